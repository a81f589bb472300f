#pragma once

#include "rpls/baselines.hpp"
#include "rpls/linalg_ops.hpp"
#include "rpls/preprocess.hpp"
#include "rpls/rpls.hpp"

namespace rpls {

enum class ProjectionSource { kRpls, kPls };

/// Regression through a shared latent space. A new sample is mapped to the
/// scores q minimizing ||x_std - q Lx^T||, then y_std = q Ly^T. In closed form
/// y_std = x_std * Theta with Theta = (Lx^T)^+ Ly^T, which solves
/// Lx^T Theta = Ly^T whenever Lx has full column rank.
class ProjectionRegressor {
public:
  ProjectionRegressor(DenseMatrix lambda_x, DenseMatrix lambda_y,
                      ColumnTransform x_transform, ColumnTransform y_transform,
                      ProjectionSource source);

  const DenseMatrix &lambda_x() const { return lambda_x_; }
  const DenseMatrix &lambda_y() const { return lambda_y_; }
  const ColumnTransform &x_transform() const { return x_transform_; }
  const ColumnTransform &y_transform() const { return y_transform_; }
  ProjectionSource source() const { return source_; }
  /// Lx lost rank, so the projection went through a truncated pseudoinverse.
  bool rank_deficient() const { return rank_deficient_; }

  /// Theta in preprocessed coordinates (p x r).
  DenseMatrix coefficients() const;
  /// The same predictor expressed as a raw-unit LinearModel.
  LinearModel to_linear_model(MethodTag tag) const;

private:
  DenseMatrix lambda_x_;
  DenseMatrix lambda_y_;
  ColumnTransform x_transform_;
  ColumnTransform y_transform_;
  ProjectionSource source_;
  DenseMatrix lambda_x_pinv_; // k x p
  bool rank_deficient_ = false;

  friend DenseMatrix project(const ProjectionRegressor &, const DenseMatrix &);
};

ProjectionRegressor from_rpls(const RplsModel &model);
/// Uses the PLS x- and y-loadings as Lx and Ly.
ProjectionRegressor from_pls(const PlsFit &fit);

/// Latent scores (n_new x k) of new samples.
DenseMatrix project(const ProjectionRegressor &reg, const DenseMatrix &x_new);
DenseMatrix predict_projection(const ProjectionRegressor &reg,
                               const DenseMatrix &x_new);

} // namespace rpls
