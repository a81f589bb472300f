#include "rpls/projection.hpp"

#include "rpls/errors.hpp"
#include "rpls/log.hpp"

#include <fmt/format.h>

namespace rpls {

ProjectionRegressor::ProjectionRegressor(DenseMatrix lambda_x,
                                         DenseMatrix lambda_y,
                                         ColumnTransform x_transform,
                                         ColumnTransform y_transform,
                                         ProjectionSource source)
    : lambda_x_(std::move(lambda_x)), lambda_y_(std::move(lambda_y)),
      x_transform_(std::move(x_transform)),
      y_transform_(std::move(y_transform)), source_(source) {
  require_finite(lambda_x_, "ProjectionRegressor lambda_x");
  require_finite(lambda_y_, "ProjectionRegressor lambda_y");
  if (lambda_x_.cols() != lambda_y_.cols())
    throw ConfigError(fmt::format("loadings disagree on k: {} vs {}",
                                  lambda_x_.cols(), lambda_y_.cols()));
  if (x_transform_.cols() != lambda_x_.rows() ||
      y_transform_.cols() != lambda_y_.rows())
    throw ConfigError("preprocessing offsets do not match loading dimensions");
  lambda_x_pinv_ = pseudo_inverse(lambda_x_, 1e-12, &rank_deficient_);
  if (rank_deficient_)
    logger().info("projection: lambda_x is rank deficient, using pseudoinverse");
}

DenseMatrix ProjectionRegressor::coefficients() const {
  return lambda_x_pinv_.transpose() * lambda_y_.transpose();
}

LinearModel ProjectionRegressor::to_linear_model(MethodTag tag) const {
  LinearModel m;
  m.theta = x_transform_.scale.cwiseInverse().asDiagonal() * coefficients() *
            y_transform_.scale.asDiagonal();
  m.x_means = x_transform_.center;
  m.y_means = y_transform_.center;
  m.method_tag = tag;
  m.n_components = static_cast<std::size_t>(lambda_x_.cols());
  m.rank_deficient = rank_deficient_;
  return m;
}

ProjectionRegressor from_rpls(const RplsModel &model) {
  return {model.state.lambda_x, model.state.lambda_y, model.x_transform,
          model.y_transform, ProjectionSource::kRpls};
}

ProjectionRegressor from_pls(const PlsFit &fit) {
  return {fit.factors.x_loadings, fit.factors.y_loadings, fit.x_transform,
          fit.y_transform, ProjectionSource::kPls};
}

DenseMatrix project(const ProjectionRegressor &reg, const DenseMatrix &x_new) {
  require_finite(x_new, "project x");
  if (x_new.cols() != reg.lambda_x_.rows())
    throw ConfigError(fmt::format("regressor expects {} predictors, got {}",
                                  reg.lambda_x_.rows(), x_new.cols()));
  return reg.x_transform_.apply(x_new) * reg.lambda_x_pinv_.transpose();
}

DenseMatrix predict_projection(const ProjectionRegressor &reg,
                               const DenseMatrix &x_new) {
  return reg.y_transform().restore(project(reg, x_new) *
                                   reg.lambda_y().transpose());
}

} // namespace rpls
