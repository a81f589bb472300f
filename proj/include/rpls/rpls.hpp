#pragma once

#include "rpls/linalg_ops.hpp"
#include "rpls/preprocess.hpp"

#include <functional>
#include <optional>
#include <utility>
#include <vector>

namespace rpls {

/// Hyperparameters of the ADMM solver for
///   min ||Dx||_1 + ||Dy||_1 + lambda1 ||Lx||_* + lambda2 ||Ly||_*
///   s.t. X = Q Lx^T + Dx,  Y = Q Ly^T + Dy,  Q^T Q = I.
struct RplsConfig {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double alpha1_0 = 1.0;
  double alpha2_0 = 1.0;
  double rho = 1.1;
  double alpha_max = 1e6;
  /// Absolute bound on ||X - X_hat||_F + ||Y - Y_hat||_F.
  double tol = 0.0;
  std::size_t k = 1;
  std::size_t max_iter = 500;
  /// Applied to X and Y before the solver sees them.
  Preprocessing preprocessing = Preprocessing::kRobust;

  void validate() const;
  /// Also checks 1 <= k <= min(n, p).
  void validate_for(Eigen::Index n, Eigen::Index p) const;

  /// lambda = 1/sqrt(max(n, p)), alpha0 = 1, rho = 1.1, alpha_max = 1e6,
  /// max_iter = 500 and tol = 1e-6 (||X||_F + ||Y||_F) measured after
  /// preprocessing.
  static RplsConfig defaults_for(const DenseMatrix &x, const DenseMatrix &y,
                                 std::size_t k,
                                 Preprocessing pre = Preprocessing::kRobust);
};

/// Partial settings layered over RplsConfig::defaults_for.
struct RplsOverrides {
  std::optional<double> lambda1;
  std::optional<double> lambda2;
  std::optional<double> alpha1_0;
  std::optional<double> alpha2_0;
  std::optional<double> rho;
  std::optional<double> alpha_max;
  std::optional<double> tol;
  std::optional<std::size_t> k;
  std::optional<std::size_t> max_iter;
  std::optional<Preprocessing> preprocessing;

  /// Fields set in `top` win over fields set here.
  RplsOverrides merged_with(const RplsOverrides &top) const;
  RplsConfig resolve(const DenseMatrix &x, const DenseMatrix &y,
                     std::size_t default_k) const;
};

struct RplsState {
  DenseMatrix q;        ///< n x k, orthonormal columns
  DenseMatrix lambda_x; ///< p x k
  DenseMatrix lambda_y; ///< r x k
  DenseMatrix delta_x;  ///< n x p
  DenseMatrix delta_y;  ///< n x r
  DenseMatrix l;        ///< n x p multipliers of the X constraint
  DenseMatrix m;        ///< n x r multipliers of the Y constraint
  double alpha1 = 1.0;
  double alpha2 = 1.0;
  std::size_t iter = 0;

  /// Q = eye(n, k), every other block zero.
  static RplsState initial(Eigen::Index n, Eigen::Index p, Eigen::Index r,
                           Eigen::Index k, double alpha1, double alpha2);
};

struct TraceEntry {
  std::size_t iter = 0;
  double primal_residual = 0.0;
  /// Penalties in force during this iteration.
  double alpha1 = 0.0;
  double alpha2 = 0.0;
};

struct RplsModel {
  RplsState state;
  RplsConfig config;
  bool converged = false;
  std::vector<TraceEntry> residual_trace;
  ColumnTransform x_transform;
  ColumnTransform y_transform;

  /// Q Lx^T and Q Ly^T in the preprocessed coordinates.
  DenseMatrix low_rank_x() const;
  DenseMatrix low_rank_y() const;
};

// Block updates. Each reads the blocks of `state` as they stand and returns
// the new value; x and y are the preprocessed data.

/// Procrustes step: polar factor of alpha1 B Lx + alpha2 A Ly with
/// B = L/alpha1 + X - Dx and A = M/alpha2 + Y - Dy.
DenseMatrix update_q(const RplsState &state, const DenseMatrix &x,
                     const DenseMatrix &y);

/// Singular value thresholding of B^T Q at lambda1/alpha1 and of A^T Q at
/// lambda2/alpha2.
std::pair<DenseMatrix, DenseMatrix>
update_loadings(const RplsState &state, const DenseMatrix &x,
                const DenseMatrix &y, const RplsConfig &cfg);

/// Soft thresholding of X - Q Lx^T + L/alpha1 at 1/alpha1 (and the Y analog).
std::pair<DenseMatrix, DenseMatrix> update_sparse(const RplsState &state,
                                                  const DenseMatrix &x,
                                                  const DenseMatrix &y);

/// (L + alpha1 Rx, M + alpha2 Ry) with the current constraint residuals.
std::pair<DenseMatrix, DenseMatrix>
update_multipliers(const RplsState &state, const DenseMatrix &x,
                   const DenseMatrix &y);

/// alpha <- min(rho * alpha, alpha_max) for both penalties.
std::pair<double, double> update_penalties(double alpha1, double alpha2,
                                           const RplsConfig &cfg);

/// ||X - Q Lx^T - Dx||_F + ||Y - Q Ly^T - Dy||_F.
double primal_residual(const RplsState &state, const DenseMatrix &x,
                       const DenseMatrix &y);

/// Partial augmented Lagrangian at the current state and penalties.
double augmented_lagrangian(const RplsState &state, const DenseMatrix &x,
                            const DenseMatrix &y, const RplsConfig &cfg);

/// Called after every completed iteration.
using IterationObserver = std::function<void(const RplsState &)>;

/// Runs the ADMM loop from Q = eye(n, k) until the primal residual drops
/// below cfg.tol or cfg.max_iter iterations have run. Reaching max_iter is
/// not an error: the model comes back with converged = false.
RplsModel fit(const DenseMatrix &x, const DenseMatrix &y,
              const RplsConfig &cfg, const IterationObserver &observer = {});

} // namespace rpls
