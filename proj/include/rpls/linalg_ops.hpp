#pragma once

#include <Eigen/Dense>
#include <string_view>

namespace rpls {

/// Dense real matrix; rows are samples, columns are variables.
using DenseMatrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Thin singular value decomposition a = u * diag(s) * v^T.
///
/// Singular values are nonincreasing. The entry of largest magnitude in each
/// column of `u` is nonnegative (first such entry on ties), which makes the
/// factors reproducible across backends.
struct SvdFactors {
  DenseMatrix u;
  Vector s;
  DenseMatrix v;
};

/// Throws InvalidInputError if `m` is empty or holds a NaN/Inf.
void require_finite(const DenseMatrix &m, std::string_view what);

/// Elementwise shrinkage toward zero, the proximal operator of eps*||.||_1:
///   k - eps if k > eps,  k + eps if k < -eps,  0 otherwise.
DenseMatrix soft_threshold(const DenseMatrix &k, double eps);

SvdFactors svd(const DenseMatrix &a);

/// Proximal operator of tau*||.||_*: shrinks every singular value by tau.
DenseMatrix singular_value_threshold(const DenseMatrix &a, double tau);

/// Solves max <d, Q> over n x k matrices with orthonormal columns.
/// The maximizer is the polar factor U V^T of the thin SVD d = U S V^T.
DenseMatrix procrustes_orthonormal(const DenseMatrix &d);

/// Moore-Penrose pseudoinverse through the SVD. Singular values at or below
/// `rel_cutoff * s_max` are treated as zero; `truncated` (if given) reports
/// whether any nonzero direction was discarded that way.
DenseMatrix pseudo_inverse(const DenseMatrix &a, double rel_cutoff = 1e-12,
                           bool *truncated = nullptr);

/// Sum of singular values.
double nuclear_norm(const DenseMatrix &a);

} // namespace rpls
