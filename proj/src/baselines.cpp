#include "rpls/baselines.hpp"

#include "rpls/errors.hpp"
#include "rpls/preprocess.hpp"

#include <fmt/format.h>

#include <algorithm>

namespace rpls {

namespace {

constexpr double kPinvCutoff = 1e-12;

struct Centered {
  ColumnTransform xt;
  ColumnTransform yt;
  DenseMatrix x;
  DenseMatrix y;
};

Centered center(const DenseMatrix &x, const DenseMatrix &y,
                const BaselineOptions &opts) {
  require_finite(x, "baseline x");
  require_finite(y, "baseline y");
  if (x.rows() != y.rows())
    throw ConfigError(
        fmt::format("x has {} rows but y has {}", x.rows(), y.rows()));
  Centered c;
  c.xt = ColumnTransform::fit(
      x, opts.scale ? Preprocessing::kStandardize : Preprocessing::kCenter);
  c.yt = ColumnTransform::fit(
      y, opts.scale ? Preprocessing::kStandardize : Preprocessing::kCenter);
  c.x = c.xt.apply(x);
  c.y = c.yt.apply(y);
  return c;
}

// Fold a coefficient matrix fitted on standardized data back to raw units.
LinearModel assemble(const Centered &c, const DenseMatrix &theta_std,
                     MethodTag tag, std::size_t components) {
  LinearModel m;
  m.theta = c.xt.scale.cwiseInverse().asDiagonal() * theta_std *
            c.yt.scale.asDiagonal();
  m.x_means = c.xt.center;
  m.y_means = c.yt.center;
  m.method_tag = tag;
  m.n_components = components;
  return m;
}

void check_components(std::size_t k, const DenseMatrix &x) {
  const auto limit = static_cast<std::size_t>(std::min(x.rows(), x.cols()));
  if (k < 1 || k > limit)
    throw ConfigError(
        fmt::format("component count {} outside [1, {}]", k, limit));
}

void fix_sign(Eigen::Ref<Vector> v) {
  Eigen::Index imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  if (v(imax) < 0.0)
    v = -v;
}

} // namespace

std::string_view to_string(MethodTag tag) {
  switch (tag) {
  case MethodTag::kMlr:
    return "MLR";
  case MethodTag::kPcr:
    return "PCR";
  case MethodTag::kPlsr:
    return "PLSR";
  case MethodTag::kPlsProj:
    return "PLS_PROJ";
  case MethodTag::kRplsProj:
    return "RPLS_PROJ";
  }
  return "MLR";
}

MethodTag parse_method(std::string_view name) {
  if (name == "MLR" || name == "mlr")
    return MethodTag::kMlr;
  if (name == "PCR" || name == "pcr")
    return MethodTag::kPcr;
  if (name == "PLSR" || name == "plsr")
    return MethodTag::kPlsr;
  if (name == "PLS_PROJ" || name == "pls-proj")
    return MethodTag::kPlsProj;
  if (name == "RPLS_PROJ" || name == "rpls")
    return MethodTag::kRplsProj;
  throw ConfigError(fmt::format("unknown method '{}'", name));
}

LinearModel fit_mlr(const DenseMatrix &x, const DenseMatrix &y,
                    const BaselineOptions &opts) {
  const Centered c = center(x, y, opts);
  bool truncated = false;
  const DenseMatrix theta = pseudo_inverse(c.x, kPinvCutoff, &truncated) * c.y;
  LinearModel m = assemble(c, theta, MethodTag::kMlr, 0);
  m.rank_deficient = truncated;
  return m;
}

PcrFit fit_pcr(const DenseMatrix &x, const DenseMatrix &y, std::size_t k,
               const BaselineOptions &opts) {
  check_components(k, x);
  const Centered c = center(x, y, opts);
  const SvdFactors f = svd(c.x);
  const auto kk = static_cast<Eigen::Index>(k);

  // Regress y on the scores T = U_k S_k: coefficients S_k^{-1} U_k^T y.
  const double cutoff = kPinvCutoff * f.s(0);
  Vector inv = Vector::Zero(kk);
  bool truncated = false;
  for (Eigen::Index i = 0; i < kk; ++i) {
    if (f.s(i) > cutoff && f.s(i) > 0.0)
      inv(i) = 1.0 / f.s(i);
    else
      truncated = true;
  }
  const DenseMatrix gamma = inv.asDiagonal() * f.u.leftCols(kk).transpose() * c.y;

  PcrFit out;
  out.model = assemble(c, f.v.leftCols(kk) * gamma, MethodTag::kPcr, k);
  out.model.rank_deficient = truncated;
  out.scores = f.u.leftCols(kk) * f.s.head(kk).asDiagonal();
  return out;
}

PlsFit fit_pls_nipals(const DenseMatrix &x, const DenseMatrix &y,
                      std::size_t k, const BaselineOptions &opts) {
  check_components(k, x);
  const Centered c = center(x, y, opts);
  const Eigen::Index n = c.x.rows(), p = c.x.cols(), r = c.y.cols();
  const auto kk = static_cast<Eigen::Index>(k);

  DenseMatrix e = c.x;
  DenseMatrix f = c.y;
  DenseMatrix w_all(p, kk), t_all(n, kk), p_all(p, kk), c_all(r, kk);
  const double stop = 1e-12 * c.x.norm() * c.y.norm();

  Eigen::Index found = 0;
  for (; found < kk; ++found) {
    const DenseMatrix cross = e.transpose() * f;
    if (!(cross.norm() > stop))
      break;
    Vector w = svd(cross).u.col(0);
    fix_sign(w);
    const Vector t = e * w;
    const double tt = t.squaredNorm();
    if (!(tt > 0.0))
      break;
    const Vector pl = e.transpose() * t / tt;
    const Vector cl = f.transpose() * t / tt;
    e -= t * pl.transpose();
    f -= t * cl.transpose();
    w_all.col(found) = w;
    t_all.col(found) = t;
    p_all.col(found) = pl;
    c_all.col(found) = cl;
  }
  if (found == 0)
    throw InvalidInputError("fit_pls_nipals: x^T y is zero, no component");

  PlsFit out;
  out.factors.weights = w_all.leftCols(found);
  out.factors.scores = t_all.leftCols(found);
  out.factors.x_loadings = p_all.leftCols(found);
  out.factors.y_loadings = c_all.leftCols(found);

  // theta = W (P^T W)^{-1} C^T
  const DenseMatrix ptw = out.factors.x_loadings.transpose() * out.factors.weights;
  bool truncated = false;
  const DenseMatrix theta = out.factors.weights *
                            pseudo_inverse(ptw, kPinvCutoff, &truncated) *
                            out.factors.y_loadings.transpose();
  out.model = assemble(c, theta, MethodTag::kPlsr,
                       static_cast<std::size_t>(found));
  out.model.rank_deficient = truncated;
  out.x_transform = c.xt;
  out.y_transform = c.yt;
  return out;
}

DenseMatrix predict(const LinearModel &model, const DenseMatrix &x_new) {
  require_finite(x_new, "predict x");
  if (x_new.cols() != model.theta.rows())
    throw ConfigError(fmt::format("model expects {} predictors, got {}",
                                  model.theta.rows(), x_new.cols()));
  DenseMatrix out = (x_new.rowwise() - model.x_means.transpose()) * model.theta;
  out.rowwise() += model.y_means.transpose();
  return out;
}

} // namespace rpls
