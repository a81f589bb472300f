#pragma once

#include "rpls/baselines.hpp"
#include "rpls/datagen.hpp"
#include "rpls/linalg_ops.hpp"
#include "rpls/rpls.hpp"

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace rpls {

/// ||y_true - y_est||_F / ||y_true||_F.
double nmse(const DenseMatrix &y_true, const DenseMatrix &y_est);

struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Seeded shuffle of 0..n-1; the first round(train_fraction * n) indices
/// train, the rest test. Both lists come back sorted.
Split make_split(std::size_t n, double train_fraction, std::uint64_t seed);

struct ExperimentConfig {
  /// Latent dimension for PCR, PLSR, PLS_PROJ and RPLS_PROJ.
  std::size_t components = 5;
  RplsOverrides rpls;
  BaselineOptions baseline;
  /// Corruption applied to the training copy only; test rows stay clean.
  OutlierSpec train_outliers;
};

struct MethodResult {
  DenseMatrix predictions; ///< test rows x r
  double nmse = 0.0;
  /// Set when fitting or predicting failed; other fields are then empty.
  std::optional<std::string> error;
  /// Training scores (n_train x k) for methods with a latent space.
  DenseMatrix train_scores;
  /// RPLS only.
  bool converged = true;
  std::size_t iterations = 0;
};

struct ExperimentReport {
  std::map<MethodTag, MethodResult> results;
  Split split;
  std::string dataset_tag;
  DenseMatrix y_test;
};

/// Fits every method on the training rows, predicts the test rows and scores
/// them. A failing method records its error and the others still run. The
/// split is canonicalized (sorted) first, so index order does not matter.
ExperimentReport run_experiment(const DenseMatrix &x, const DenseMatrix &y,
                                const Split &split,
                                const std::vector<MethodTag> &methods,
                                const ExperimentConfig &cfg,
                                std::string dataset_tag = "");

/// Exact chi-square quantile with two degrees of freedom.
double chi_square_quantile_2dof(double coverage);

struct ConfidenceEllipse {
  std::array<double, 2> center{};
  /// Major first.
  std::array<double, 2> semi_axes{};
  /// Angle of the major axis from the first coordinate, in (-pi/2, pi/2].
  double rotation_angle = 0.0;

  bool contains(double a, double b) const;
};

/// Level set of the Gaussian fitted to the two score columns (sample mean and
/// covariance) that holds `coverage` of its mass.
ConfidenceEllipse confidence_ellipse(const DenseMatrix &scores_2d,
                                     double coverage = 0.95);

} // namespace rpls
