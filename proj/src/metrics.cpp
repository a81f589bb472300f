#include "rpls/metrics.hpp"

#include "rpls/errors.hpp"
#include "rpls/log.hpp"
#include "rpls/projection.hpp"
#include "rpls/random.hpp"

#include <fmt/format.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace rpls {

namespace {

constexpr std::uint64_t kSplitStream = 21;

DenseMatrix take_rows(const DenseMatrix &m,
                      const std::vector<std::size_t> &rows) {
  DenseMatrix out(static_cast<Eigen::Index>(rows.size()), m.cols());
  for (std::size_t i = 0; i < rows.size(); ++i)
    out.row(static_cast<Eigen::Index>(i)) =
        m.row(static_cast<Eigen::Index>(rows[i]));
  return out;
}

Split canonical(const Split &split, std::size_t n) {
  Split s = split;
  std::sort(s.train.begin(), s.train.end());
  std::sort(s.test.begin(), s.test.end());
  if (s.train.empty() || s.test.empty())
    throw ConfigError("split needs at least one train and one test row");
  if (std::adjacent_find(s.train.begin(), s.train.end()) != s.train.end() ||
      std::adjacent_find(s.test.begin(), s.test.end()) != s.test.end())
    throw ConfigError("split has duplicate indices");
  if (s.train.back() >= n || s.test.back() >= n)
    throw ConfigError(fmt::format("split index out of range for {} rows", n));
  std::vector<std::size_t> common;
  std::set_intersection(s.train.begin(), s.train.end(), s.test.begin(),
                        s.test.end(), std::back_inserter(common));
  if (!common.empty())
    throw ConfigError(fmt::format("row {} is in both train and test", common[0]));
  return s;
}

MethodResult run_method(MethodTag tag, const DenseMatrix &x_train,
                        const DenseMatrix &y_train, const DenseMatrix &x_test,
                        const ExperimentConfig &cfg) {
  MethodResult res;
  switch (tag) {
  case MethodTag::kMlr:
    res.predictions = predict(fit_mlr(x_train, y_train, cfg.baseline), x_test);
    break;
  case MethodTag::kPcr: {
    PcrFit f = fit_pcr(x_train, y_train, cfg.components, cfg.baseline);
    res.predictions = predict(f.model, x_test);
    res.train_scores = std::move(f.scores);
    break;
  }
  case MethodTag::kPlsr:
  case MethodTag::kPlsProj: {
    PlsFit f = fit_pls_nipals(x_train, y_train, cfg.components, cfg.baseline);
    res.predictions = tag == MethodTag::kPlsr
                          ? predict(f.model, x_test)
                          : predict_projection(from_pls(f), x_test);
    res.train_scores = std::move(f.factors.scores);
    break;
  }
  case MethodTag::kRplsProj: {
    const RplsConfig rc = cfg.rpls.resolve(x_train, y_train, cfg.components);
    RplsModel m = fit(x_train, y_train, rc);
    res.predictions = predict_projection(from_rpls(m), x_test);
    res.converged = m.converged;
    res.iterations = m.state.iter;
    res.train_scores = std::move(m.state.q);
    break;
  }
  }
  return res;
}

} // namespace

double nmse(const DenseMatrix &y_true, const DenseMatrix &y_est) {
  if (y_true.rows() != y_est.rows() || y_true.cols() != y_est.cols())
    throw ConfigError(fmt::format("nmse: shapes {}x{} and {}x{} differ",
                                  y_true.rows(), y_true.cols(), y_est.rows(),
                                  y_est.cols()));
  require_finite(y_true, "nmse y_true");
  require_finite(y_est, "nmse y_est");
  const double denom = y_true.norm();
  if (denom == 0.0)
    throw UndefinedMetricError("nmse: y_true is identically zero");
  return (y_true - y_est).norm() / denom;
}

Split make_split(std::size_t n, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw ConfigError("train fraction must lie in (0, 1)");
  const auto n_train = static_cast<std::size_t>(
      std::llround(train_fraction * static_cast<double>(n)));
  if (n_train < 1 || n_train >= n)
    throw ConfigError(fmt::format(
        "train fraction {} leaves an empty side for {} rows", train_fraction, n));
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  CounterRng rng(seed, kSplitStream);
  rng.shuffle(perm);
  Split s;
  s.train.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_train));
  s.test.assign(perm.begin() + static_cast<std::ptrdiff_t>(n_train), perm.end());
  std::sort(s.train.begin(), s.train.end());
  std::sort(s.test.begin(), s.test.end());
  return s;
}

ExperimentReport run_experiment(const DenseMatrix &x, const DenseMatrix &y,
                                const Split &split,
                                const std::vector<MethodTag> &methods,
                                const ExperimentConfig &cfg,
                                std::string dataset_tag) {
  require_finite(x, "run_experiment x");
  require_finite(y, "run_experiment y");
  if (x.rows() != y.rows())
    throw ConfigError(
        fmt::format("x has {} rows but y has {}", x.rows(), y.rows()));

  ExperimentReport report;
  report.split = canonical(split, static_cast<std::size_t>(x.rows()));
  report.dataset_tag = std::move(dataset_tag);

  const CorruptedData train =
      inject_outliers(take_rows(x, report.split.train),
                      take_rows(y, report.split.train), cfg.train_outliers);
  const DenseMatrix x_test = take_rows(x, report.split.test);
  report.y_test = take_rows(y, report.split.test);

  for (MethodTag tag : methods) {
    MethodResult res;
    try {
      res = run_method(tag, train.x, train.y, x_test, cfg);
      res.nmse = nmse(report.y_test, res.predictions);
    } catch (const Error &e) {
      res = MethodResult{};
      res.error = e.what();
      logger().info("{} failed: {}", to_string(tag), e.what());
    }
    report.results[tag] = std::move(res);
  }
  return report;
}

double chi_square_quantile_2dof(double coverage) {
  if (!(coverage > 0.0 && coverage < 1.0))
    throw ConfigError("coverage must lie in (0, 1)");
  // The chi-square CDF with 2 dof is 1 - exp(-x/2).
  return -2.0 * std::log1p(-coverage);
}

bool ConfidenceEllipse::contains(double a, double b) const {
  const double da = a - center[0], db = b - center[1];
  const double c = std::cos(rotation_angle), s = std::sin(rotation_angle);
  const double u = (c * da + s * db) / semi_axes[0];
  const double w = (-s * da + c * db) / semi_axes[1];
  return u * u + w * w <= 1.0;
}

ConfidenceEllipse confidence_ellipse(const DenseMatrix &scores_2d,
                                     double coverage) {
  if (scores_2d.cols() != 2)
    throw ConfigError(fmt::format("confidence_ellipse: need 2 columns, got {}",
                                  scores_2d.cols()));
  if (scores_2d.rows() < 3)
    throw ConfigError("confidence_ellipse: need at least 3 points");
  require_finite(scores_2d, "confidence_ellipse");
  const double q = chi_square_quantile_2dof(coverage);

  const Eigen::RowVector2d mean = scores_2d.colwise().mean();
  const DenseMatrix centered = scores_2d.rowwise() - mean;
  const Eigen::Matrix2d cov = (centered.transpose() * centered) /
                              static_cast<double>(scores_2d.rows() - 1);
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(cov);
  const Eigen::Vector2d vals = eig.eigenvalues(); // ascending
  if (!(vals(1) > 0.0) || !(vals(0) > 1e-12 * vals(1)))
    throw DegenerateError("confidence_ellipse: singular score covariance");

  ConfidenceEllipse e;
  e.center = {mean(0), mean(1)};
  e.semi_axes = {std::sqrt(q * vals(1)), std::sqrt(q * vals(0))};
  const Eigen::Vector2d major = eig.eigenvectors().col(1);
  double angle = std::atan2(major(1), major(0));
  if (angle <= -std::numbers::pi / 2)
    angle += std::numbers::pi;
  else if (angle > std::numbers::pi / 2)
    angle -= std::numbers::pi;
  e.rotation_angle = angle;
  return e;
}

} // namespace rpls
