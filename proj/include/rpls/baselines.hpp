#pragma once

#include "rpls/linalg_ops.hpp"
#include "rpls/preprocess.hpp"

#include <string>
#include <string_view>

namespace rpls {

enum class MethodTag { kMlr, kPcr, kPlsr, kPlsProj, kRplsProj };

/// "MLR", "PCR", "PLSR", "PLS_PROJ", "RPLS_PROJ".
std::string_view to_string(MethodTag tag);
/// Accepts the tag names above and the CLI spellings mlr, pcr, plsr,
/// pls-proj, rpls.
MethodTag parse_method(std::string_view name);

/// y_hat = (x - x_means) * theta + y_means.
struct LinearModel {
  DenseMatrix theta; ///< p x r
  Vector x_means;
  Vector y_means;
  MethodTag method_tag = MethodTag::kMlr;
  std::size_t n_components = 0;
  /// A pseudoinverse discarded near-zero singular directions during fitting.
  bool rank_deficient = false;
};

struct PlsFactors {
  DenseMatrix scores;     ///< n x k  (T)
  DenseMatrix weights;    ///< p x k  (W), unit columns
  DenseMatrix x_loadings; ///< p x k  (P)
  DenseMatrix y_loadings; ///< r x k  (C)
};

struct BaselineOptions {
  /// Divide centered columns by their sample std before fitting. The
  /// scaling is folded back into theta.
  bool scale = false;
};

LinearModel fit_mlr(const DenseMatrix &x, const DenseMatrix &y,
                    const BaselineOptions &opts = {});

struct PcrFit {
  LinearModel model;
  DenseMatrix scores; ///< n x k principal component scores U_k S_k
};

PcrFit fit_pcr(const DenseMatrix &x, const DenseMatrix &y, std::size_t k,
               const BaselineOptions &opts = {});

struct PlsFit {
  PlsFactors factors;
  LinearModel model;
  /// Maps raw data to the coordinates the factors live in.
  ColumnTransform x_transform;
  ColumnTransform y_transform;
};

/// Deflation PLS. Each weight vector is the leading singular vector of the
/// residual cross-covariance X_res^T Y_res; stops early when that matrix
/// vanishes, in which case fewer than k components come back.
PlsFit fit_pls_nipals(const DenseMatrix &x, const DenseMatrix &y,
                      std::size_t k, const BaselineOptions &opts = {});

DenseMatrix predict(const LinearModel &model, const DenseMatrix &x_new);

} // namespace rpls
