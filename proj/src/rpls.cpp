#include "rpls/rpls.hpp"

#include "rpls/errors.hpp"
#include "rpls/log.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace rpls {

namespace {

bool positive_finite(double v) { return v > 0.0 && std::isfinite(v); }

void check_state(const RplsState &s, const DenseMatrix &x,
                 const DenseMatrix &y) {
  const Eigen::Index n = x.rows(), p = x.cols(), r = y.cols();
  const Eigen::Index k = s.q.cols();
  if (y.rows() != n)
    throw ConfigError(fmt::format("x has {} rows but y has {}", n, y.rows()));
  const auto bad = [](const DenseMatrix &m, Eigen::Index rows,
                      Eigen::Index cols) {
    return m.rows() != rows || m.cols() != cols;
  };
  if (bad(s.q, n, k) || bad(s.lambda_x, p, k) || bad(s.lambda_y, r, k) ||
      bad(s.delta_x, n, p) || bad(s.delta_y, n, r) || bad(s.l, n, p) ||
      bad(s.m, n, r))
    throw ConfigError(fmt::format(
        "state dimensions inconsistent with data (n={}, p={}, r={}, k={})", n,
        p, r, k));
  if (!positive_finite(s.alpha1) || !positive_finite(s.alpha2))
    throw ConfigError("penalties must be positive and finite");
}

// B = L/alpha1 + X - Dx
DenseMatrix shifted_x(const RplsState &s, const DenseMatrix &x) {
  return s.l / s.alpha1 + x - s.delta_x;
}

// A = M/alpha2 + Y - Dy
DenseMatrix shifted_y(const RplsState &s, const DenseMatrix &y) {
  return s.m / s.alpha2 + y - s.delta_y;
}

DenseMatrix residual_x(const RplsState &s, const DenseMatrix &x) {
  return x - s.q * s.lambda_x.transpose() - s.delta_x;
}

DenseMatrix residual_y(const RplsState &s, const DenseMatrix &y) {
  return y - s.q * s.lambda_y.transpose() - s.delta_y;
}

} // namespace

void RplsConfig::validate() const {
  if (!positive_finite(lambda1) || !positive_finite(lambda2))
    throw ConfigError("lambda1 and lambda2 must be positive");
  if (!positive_finite(alpha1_0) || !positive_finite(alpha2_0))
    throw ConfigError("alpha1_0 and alpha2_0 must be positive");
  if (!(rho >= 1.0) || !std::isfinite(rho))
    throw ConfigError("rho must be >= 1");
  if (!positive_finite(alpha_max) || alpha_max < alpha1_0 ||
      alpha_max < alpha2_0)
    throw ConfigError("alpha_max must be >= alpha1_0 and alpha2_0");
  if (!(tol > 0.0) || std::isnan(tol))
    throw ConfigError("tol must be positive");
  if (k < 1)
    throw ConfigError("k must be >= 1");
  if (max_iter < 1)
    throw ConfigError("max_iter must be >= 1");
}

void RplsConfig::validate_for(Eigen::Index n, Eigen::Index p) const {
  validate();
  const auto limit = static_cast<std::size_t>(std::min(n, p));
  if (k > limit)
    throw ConfigError(
        fmt::format("k = {} exceeds min(n, p) = {}", k, limit));
}

RplsConfig RplsConfig::defaults_for(const DenseMatrix &x, const DenseMatrix &y,
                                    std::size_t k, Preprocessing pre) {
  RplsConfig cfg;
  const double dim = static_cast<double>(std::max(x.rows(), x.cols()));
  cfg.lambda1 = cfg.lambda2 = 1.0 / std::sqrt(dim);
  cfg.k = k;
  cfg.preprocessing = pre;
  const double scale = ColumnTransform::fit(x, pre).apply(x).norm() +
                       ColumnTransform::fit(y, pre).apply(y).norm();
  cfg.tol = std::max(1e-6 * scale, std::numeric_limits<double>::min());
  return cfg;
}

RplsOverrides RplsOverrides::merged_with(const RplsOverrides &top) const {
  RplsOverrides out = *this;
  const auto take = [](auto &dst, const auto &src) {
    if (src)
      dst = src;
  };
  take(out.lambda1, top.lambda1);
  take(out.lambda2, top.lambda2);
  take(out.alpha1_0, top.alpha1_0);
  take(out.alpha2_0, top.alpha2_0);
  take(out.rho, top.rho);
  take(out.alpha_max, top.alpha_max);
  take(out.tol, top.tol);
  take(out.k, top.k);
  take(out.max_iter, top.max_iter);
  take(out.preprocessing, top.preprocessing);
  return out;
}

RplsConfig RplsOverrides::resolve(const DenseMatrix &x, const DenseMatrix &y,
                                  std::size_t default_k) const {
  RplsConfig cfg = RplsConfig::defaults_for(
      x, y, k.value_or(default_k),
      preprocessing.value_or(Preprocessing::kRobust));
  cfg.lambda1 = lambda1.value_or(cfg.lambda1);
  cfg.lambda2 = lambda2.value_or(cfg.lambda2);
  cfg.alpha1_0 = alpha1_0.value_or(cfg.alpha1_0);
  cfg.alpha2_0 = alpha2_0.value_or(cfg.alpha2_0);
  cfg.rho = rho.value_or(cfg.rho);
  cfg.alpha_max = alpha_max.value_or(cfg.alpha_max);
  cfg.tol = tol.value_or(cfg.tol);
  cfg.max_iter = max_iter.value_or(cfg.max_iter);
  return cfg;
}

RplsState RplsState::initial(Eigen::Index n, Eigen::Index p, Eigen::Index r,
                             Eigen::Index k, double alpha1, double alpha2) {
  RplsState s;
  s.q = DenseMatrix::Identity(n, k);
  s.lambda_x = DenseMatrix::Zero(p, k);
  s.lambda_y = DenseMatrix::Zero(r, k);
  s.delta_x = DenseMatrix::Zero(n, p);
  s.delta_y = DenseMatrix::Zero(n, r);
  s.l = DenseMatrix::Zero(n, p);
  s.m = DenseMatrix::Zero(n, r);
  s.alpha1 = alpha1;
  s.alpha2 = alpha2;
  return s;
}

DenseMatrix RplsModel::low_rank_x() const {
  return state.q * state.lambda_x.transpose();
}

DenseMatrix RplsModel::low_rank_y() const {
  return state.q * state.lambda_y.transpose();
}

DenseMatrix update_q(const RplsState &state, const DenseMatrix &x,
                     const DenseMatrix &y) {
  check_state(state, x, y);
  const DenseMatrix d = state.alpha1 * shifted_x(state, x) * state.lambda_x +
                        state.alpha2 * shifted_y(state, y) * state.lambda_y;
  return procrustes_orthonormal(d);
}

std::pair<DenseMatrix, DenseMatrix>
update_loadings(const RplsState &state, const DenseMatrix &x,
                const DenseMatrix &y, const RplsConfig &cfg) {
  check_state(state, x, y);
  return {singular_value_threshold(shifted_x(state, x).transpose() * state.q,
                                   cfg.lambda1 / state.alpha1),
          singular_value_threshold(shifted_y(state, y).transpose() * state.q,
                                   cfg.lambda2 / state.alpha2)};
}

std::pair<DenseMatrix, DenseMatrix> update_sparse(const RplsState &state,
                                                  const DenseMatrix &x,
                                                  const DenseMatrix &y) {
  check_state(state, x, y);
  return {soft_threshold(x - state.q * state.lambda_x.transpose() +
                             state.l / state.alpha1,
                         1.0 / state.alpha1),
          soft_threshold(y - state.q * state.lambda_y.transpose() +
                             state.m / state.alpha2,
                         1.0 / state.alpha2)};
}

std::pair<DenseMatrix, DenseMatrix>
update_multipliers(const RplsState &state, const DenseMatrix &x,
                   const DenseMatrix &y) {
  check_state(state, x, y);
  return {state.l + state.alpha1 * residual_x(state, x),
          state.m + state.alpha2 * residual_y(state, y)};
}

std::pair<double, double> update_penalties(double alpha1, double alpha2,
                                           const RplsConfig &cfg) {
  return {std::min(cfg.rho * alpha1, cfg.alpha_max),
          std::min(cfg.rho * alpha2, cfg.alpha_max)};
}

double primal_residual(const RplsState &state, const DenseMatrix &x,
                       const DenseMatrix &y) {
  check_state(state, x, y);
  return residual_x(state, x).norm() + residual_y(state, y).norm();
}

double augmented_lagrangian(const RplsState &state, const DenseMatrix &x,
                            const DenseMatrix &y, const RplsConfig &cfg) {
  check_state(state, x, y);
  const DenseMatrix rx = residual_x(state, x);
  const DenseMatrix ry = residual_y(state, y);
  return state.delta_x.cwiseAbs().sum() + state.delta_y.cwiseAbs().sum() +
         cfg.lambda1 * nuclear_norm(state.lambda_x) +
         cfg.lambda2 * nuclear_norm(state.lambda_y) +
         state.l.cwiseProduct(rx).sum() +
         0.5 * state.alpha1 * rx.squaredNorm() +
         state.m.cwiseProduct(ry).sum() +
         0.5 * state.alpha2 * ry.squaredNorm();
}

RplsModel fit(const DenseMatrix &x_raw, const DenseMatrix &y_raw,
              const RplsConfig &cfg, const IterationObserver &observer) {
  require_finite(x_raw, "fit x");
  require_finite(y_raw, "fit y");
  if (x_raw.rows() != y_raw.rows())
    throw ConfigError(fmt::format("x has {} rows but y has {}", x_raw.rows(),
                                  y_raw.rows()));
  cfg.validate_for(x_raw.rows(), x_raw.cols());

  RplsModel model;
  model.config = cfg;
  model.x_transform = ColumnTransform::fit(x_raw, cfg.preprocessing);
  model.y_transform = ColumnTransform::fit(y_raw, cfg.preprocessing);
  const DenseMatrix x = model.x_transform.apply(x_raw);
  const DenseMatrix y = model.y_transform.apply(y_raw);

  const auto k = static_cast<Eigen::Index>(cfg.k);
  RplsState &s = model.state;
  s = RplsState::initial(x.rows(), x.cols(), y.cols(), k, cfg.alpha1_0,
                         cfg.alpha2_0);

  logger().info("rpls fit: n={} p={} r={} k={} lambda=({}, {}) tol={}",
                x.rows(), x.cols(), y.cols(), k, cfg.lambda1, cfg.lambda2,
                cfg.tol);
  for (std::size_t it = 1; it <= cfg.max_iter; ++it) {
    TraceEntry entry{it, 0.0, s.alpha1, s.alpha2};

    s.q = update_q(s, x, y);
    std::tie(s.lambda_x, s.lambda_y) = update_loadings(s, x, y, cfg);
    std::tie(s.delta_x, s.delta_y) = update_sparse(s, x, y);
    std::tie(s.l, s.m) = update_multipliers(s, x, y);
    std::tie(s.alpha1, s.alpha2) = update_penalties(s.alpha1, s.alpha2, cfg);
    s.iter = it;

    entry.primal_residual = primal_residual(s, x, y);
    model.residual_trace.push_back(entry);
    logger().trace("iter {:4d}  residual {:.6e}  alpha1 {:.4g}  alpha2 {:.4g}",
                   it, entry.primal_residual, entry.alpha1, entry.alpha2);
    if (observer)
      observer(s);
    if (entry.primal_residual < cfg.tol) {
      model.converged = true;
      break;
    }
  }
  if (model.converged)
    logger().info("rpls converged after {} iterations", s.iter);
  else
    logger().info("rpls stopped at max_iter = {} (residual {:.3e})",
                  cfg.max_iter, model.residual_trace.back().primal_residual);
  return model;
}

} // namespace rpls
