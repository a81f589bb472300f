#include "rpls/datagen.hpp"

#include "rpls/errors.hpp"
#include "rpls/random.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace rpls {

namespace {

// Stream ids keep each ingredient independent of the others' sizes.
enum Stream : std::uint64_t {
  kLatent = 1,
  kLoadings = 2,
  kCollinear = 3,
  kTheta = 4,
  kNoise = 5,
  kSparseX = 11,
  kSparseY = 12,
};

DenseMatrix normal_matrix(CounterRng &rng, Eigen::Index rows,
                          Eigen::Index cols, double scale) {
  DenseMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j)
      m(i, j) = scale * rng.normal();
  return m;
}

double column_std(const DenseMatrix &m, Eigen::Index j) {
  const Eigen::Index n = m.rows();
  if (n < 2)
    return 0.0;
  const double mean = m.col(j).mean();
  const double ss = (m.col(j).array() - mean).square().sum();
  return std::sqrt(ss / static_cast<double>(n - 1));
}

void corrupt_sparse(DenseMatrix &m, Mask &mask, double fraction,
                    double magnitude, CounterRng &rng) {
  const auto total = static_cast<std::size_t>(m.size());
  const auto count = static_cast<std::size_t>(
      std::llround(fraction * static_cast<double>(total)));
  std::vector<double> stds(static_cast<std::size_t>(m.cols()));
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    const double s = column_std(m, j);
    stds[static_cast<std::size_t>(j)] = s > 0.0 ? s : 1.0;
  }
  const auto cols = static_cast<std::size_t>(m.cols());
  for (std::size_t lin : sample_without_replacement(rng, total, count)) {
    const auto i = static_cast<Eigen::Index>(lin / cols);
    const auto j = static_cast<Eigen::Index>(lin % cols);
    const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
    m(i, j) += sign * magnitude * stds[static_cast<std::size_t>(j)];
    mask(i, j) = true;
  }
}

} // namespace

void SynthSpec::validate() const {
  if (n < 1 || p < 1 || r < 1 || k_true < 1 || active_per_response < 1)
    throw ConfigError("SynthSpec: n, p, r, k_true, active_per_response must be >= 1");
  if (k_true > p)
    throw ConfigError(fmt::format("SynthSpec: k_true {} exceeds p {}", k_true, p));
  if (n_collinear >= p)
    throw ConfigError(
        fmt::format("SynthSpec: n_collinear {} must be < p {}", n_collinear, p));
  if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma))
    throw ConfigError("SynthSpec: noise_sigma must be finite and >= 0");
}

SynthData generate(const SynthSpec &spec) {
  spec.validate();
  const auto n = static_cast<Eigen::Index>(spec.n);
  const auto p = static_cast<Eigen::Index>(spec.p);
  const auto r = static_cast<Eigen::Index>(spec.r);
  const auto k = static_cast<Eigen::Index>(spec.k_true);
  const auto base = p - static_cast<Eigen::Index>(spec.n_collinear);

  CounterRng latent_rng(spec.seed, kLatent);
  CounterRng loading_rng(spec.seed, kLoadings);
  CounterRng collinear_rng(spec.seed, kCollinear);
  CounterRng theta_rng(spec.seed, kTheta);
  CounterRng noise_rng(spec.seed, kNoise);

  SynthData out;
  out.truth.latent = normal_matrix(latent_rng, n, k, 1.0);
  const DenseMatrix base_loadings =
      normal_matrix(loading_rng, base, k, 1.0 / std::sqrt(static_cast<double>(k)));

  // Each collinear column mixes up to three distinct base columns.
  const std::size_t mix_width = std::min<std::size_t>(3, static_cast<std::size_t>(base));
  DenseMatrix combos = DenseMatrix::Zero(base, p - base);
  for (Eigen::Index c = 0; c < p - base; ++c) {
    const double w = 1.0 / std::sqrt(static_cast<double>(mix_width));
    for (std::size_t src : sample_without_replacement(
             collinear_rng, static_cast<std::size_t>(base), mix_width))
      combos(static_cast<Eigen::Index>(src), c) = w * collinear_rng.normal();
  }

  out.truth.loadings.resize(p, k);
  out.truth.loadings.topRows(base) = base_loadings;
  out.truth.loadings.bottomRows(p - base) = combos.transpose() * base_loadings;
  out.x = out.truth.latent * out.truth.loadings.transpose();
  out.truth.q_true = svd(out.truth.latent).u;

  out.truth.theta_true = DenseMatrix::Zero(p, r);
  const std::size_t active = std::min(spec.active_per_response, spec.p);
  for (Eigen::Index j = 0; j < r; ++j)
    for (std::size_t row :
         sample_without_replacement(theta_rng, spec.p, active))
      out.truth.theta_true(static_cast<Eigen::Index>(row), j) =
          theta_rng.normal();

  out.y = out.x * out.truth.theta_true;
  if (spec.noise_sigma > 0.0)
    out.y += normal_matrix(noise_rng, n, r, spec.noise_sigma);
  return out;
}

void OutlierSpec::validate() const {
  if (!(fraction >= 0.0 && fraction <= 1.0))
    throw ConfigError("OutlierSpec: fraction must lie in [0, 1]");
  if (!(tail_fraction >= 0.0 && tail_fraction <= 1.0))
    throw ConfigError("OutlierSpec: tail_fraction must lie in [0, 1]");
  if (!std::isfinite(magnitude))
    throw ConfigError("OutlierSpec: magnitude must be finite");
  if (tail_multiplier == 0.0 || !std::isfinite(tail_multiplier))
    throw ConfigError("OutlierSpec: tail_multiplier must be finite and nonzero");
}

CorruptedData inject_sparse(const DenseMatrix &x, const DenseMatrix &y,
                            const OutlierSpec &spec) {
  spec.validate();
  require_finite(x, "inject_sparse x");
  require_finite(y, "inject_sparse y");
  CorruptedData out{x, y, Mask::Constant(x.rows(), x.cols(), false),
                    Mask::Constant(y.rows(), y.cols(), false)};
  CounterRng rng_x(spec.seed, kSparseX);
  CounterRng rng_y(spec.seed, kSparseY);
  corrupt_sparse(out.x, out.x_mask, spec.fraction, spec.magnitude, rng_x);
  corrupt_sparse(out.y, out.y_mask, spec.fraction, spec.magnitude, rng_y);
  return out;
}

CorruptedResponse inject_low_tail(const DenseMatrix &y,
                                  const OutlierSpec &spec) {
  spec.validate();
  require_finite(y, "inject_low_tail y");
  const Eigen::Index n = y.rows();
  // The epsilon guards products such as 0.29 * 100 = 28.999999999999996.
  const auto count = static_cast<Eigen::Index>(
      std::floor(spec.tail_fraction * static_cast<double>(n) + 1e-9));

  CorruptedResponse out{y, Mask::Constant(y.rows(), y.cols(), false)};
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  for (Eigen::Index j = 0; j < y.cols(); ++j) {
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) {
                       return y(a, j) < y(b, j);
                     });
    for (Eigen::Index t = 0; t < count; ++t) {
      const Eigen::Index i = order[static_cast<std::size_t>(t)];
      out.y(i, j) *= spec.tail_multiplier;
      out.mask(i, j) = true;
    }
  }
  return out;
}

CorruptedData inject_outliers(const DenseMatrix &x, const DenseMatrix &y,
                              const OutlierSpec &spec) {
  switch (spec.kind) {
  case OutlierKind::kSparseRandom:
    return inject_sparse(x, y, spec);
  case OutlierKind::kLowTail: {
    auto low = inject_low_tail(y, spec);
    return {x, std::move(low.y), Mask::Constant(x.rows(), x.cols(), false),
            std::move(low.mask)};
  }
  case OutlierKind::kNone:
    break;
  }
  return {x, y, Mask::Constant(x.rows(), x.cols(), false),
          Mask::Constant(y.rows(), y.cols(), false)};
}

} // namespace rpls
