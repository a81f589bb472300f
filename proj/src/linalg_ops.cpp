#include "rpls/linalg_ops.hpp"

#include "rpls/errors.hpp"

#include <fmt/format.h>

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

namespace rpls {

void require_finite(const DenseMatrix &m, std::string_view what) {
  if (m.rows() == 0 || m.cols() == 0)
    throw InvalidInputError(fmt::format("{}: empty matrix", what));
  if (!m.allFinite())
    throw InvalidInputError(fmt::format("{}: non-finite entry", what));
}

DenseMatrix soft_threshold(const DenseMatrix &k, double eps) {
  require_finite(k, "soft_threshold");
  if (!(eps >= 0.0) || !std::isfinite(eps))
    throw InvalidInputError("soft_threshold: eps must be finite and >= 0");
  // The second branch is k + eps for k < -eps. Writing it as k < eps would
  // overlap the first branch's complement and is not a proximal operator.
  return k.unaryExpr([eps](double v) {
    if (v > eps)
      return v - eps;
    if (v < -eps)
      return v + eps;
    return 0.0;
  });
}

SvdFactors svd(const DenseMatrix &a) {
  require_finite(a, "svd");
  const Eigen::Index m = a.rows(), n = a.cols();
  const Eigen::Index r = std::min(m, n);

  SvdFactors out;
  if (a.isZero(0.0)) {
    out.u = DenseMatrix::Identity(m, r);
    out.s = Vector::Zero(r);
    out.v = DenseMatrix::Identity(n, r);
    return out;
  }

  Eigen::BDCSVD<DenseMatrix> dec(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (dec.info() != Eigen::Success || !dec.singularValues().allFinite())
    throw SolverError(
        fmt::format("svd: no convergence on {}x{} matrix", m, n));

  out.u = dec.matrixU();
  out.s = dec.singularValues();
  out.v = dec.matrixV();
  for (Eigen::Index j = 0; j < r; ++j) {
    Eigen::Index imax = 0;
    out.u.col(j).cwiseAbs().maxCoeff(&imax);
    if (out.u(imax, j) < 0.0) {
      out.u.col(j) *= -1.0;
      out.v.col(j) *= -1.0;
    }
  }
  return out;
}

DenseMatrix singular_value_threshold(const DenseMatrix &a, double tau) {
  if (!(tau >= 0.0) || !std::isfinite(tau))
    throw InvalidInputError(
        "singular_value_threshold: tau must be finite and >= 0");
  const SvdFactors f = svd(a);
  const Vector shrunk = (f.s.array() - tau).max(0.0).matrix();
  return f.u * shrunk.asDiagonal() * f.v.transpose();
}

DenseMatrix procrustes_orthonormal(const DenseMatrix &d) {
  if (d.rows() < d.cols())
    throw ConfigError(fmt::format(
        "procrustes_orthonormal: need rows >= cols, got {}x{}", d.rows(),
        d.cols()));
  const SvdFactors f = svd(d);
  return f.u * f.v.transpose();
}

DenseMatrix pseudo_inverse(const DenseMatrix &a, double rel_cutoff,
                           bool *truncated) {
  const SvdFactors f = svd(a);
  const double cutoff = rel_cutoff * (f.s.size() > 0 ? f.s(0) : 0.0);
  Vector inv = Vector::Zero(f.s.size());
  bool cut = false;
  for (Eigen::Index i = 0; i < f.s.size(); ++i) {
    if (f.s(i) > cutoff && f.s(i) > 0.0)
      inv(i) = 1.0 / f.s(i);
    else
      cut = true;
  }
  if (truncated)
    *truncated = cut;
  return f.v * inv.asDiagonal() * f.u.transpose();
}

double nuclear_norm(const DenseMatrix &a) { return svd(a).s.sum(); }

} // namespace rpls
