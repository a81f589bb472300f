#pragma once

#include "rpls/linalg_ops.hpp"

#include <cstdint>

namespace rpls {

using Mask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

/// Parameters of the synthetic multicollinear regression problem.
struct SynthSpec {
  std::size_t n = 150;
  std::size_t p = 40;
  std::size_t r = 4;
  std::size_t k_true = 5;
  /// Trailing predictors built as linear combinations of the leading ones.
  std::size_t n_collinear = 10;
  std::size_t active_per_response = 5;
  double noise_sigma = 0.1;
  std::uint64_t seed = 0;

  void validate() const;
};

struct SynthTruth {
  DenseMatrix latent;     ///< n x k_true factors F
  DenseMatrix q_true;     ///< orthonormal basis of span(F)
  DenseMatrix loadings;   ///< p x k_true, x = latent * loadings^T
  DenseMatrix theta_true; ///< p x r, sparse by column
};

struct SynthData {
  DenseMatrix x;
  DenseMatrix y;
  SynthTruth truth;
};

/// Draws x from k_true standard-normal latent factors (loadings N(0,1)/sqrt(k)),
/// appends n_collinear columns that each mix up to three earlier columns, and
/// sets y = x * theta_true + noise_sigma * N(0,1).
SynthData generate(const SynthSpec &spec);

enum class OutlierKind { kNone, kSparseRandom, kLowTail };

struct OutlierSpec {
  OutlierKind kind = OutlierKind::kNone;
  /// SPARSE_RANDOM: fraction of entries hit in each of x and y.
  double fraction = 0.02;
  /// SPARSE_RANDOM: amplitude as a multiple of the column's sample std.
  double magnitude = 10.0;
  /// LOW_TAIL: fraction of the smallest values per response column.
  double tail_fraction = 0.10;
  double tail_multiplier = 10.0;
  std::uint64_t seed = 0;

  void validate() const;
};

struct CorruptedData {
  DenseMatrix x;
  DenseMatrix y;
  Mask x_mask;
  Mask y_mask;
};

/// Adds +/- magnitude * column_std to round(fraction * size) uniformly chosen
/// entries of x and, independently, of y. Constant columns use std = 1.
CorruptedData inject_sparse(const DenseMatrix &x, const DenseMatrix &y,
                            const OutlierSpec &spec);

struct CorruptedResponse {
  DenseMatrix y;
  Mask mask;
};

/// Per response column, multiplies the floor(tail_fraction * n) smallest
/// values by tail_multiplier. Ties go to the lower row index.
CorruptedResponse inject_low_tail(const DenseMatrix &y,
                                  const OutlierSpec &spec);

/// Dispatches on spec.kind; kNone returns copies with empty masks.
CorruptedData inject_outliers(const DenseMatrix &x, const DenseMatrix &y,
                              const OutlierSpec &spec);

} // namespace rpls
