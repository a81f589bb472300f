#pragma once

#include "rpls/linalg_ops.hpp"

#include <string_view>

namespace rpls {

enum class Preprocessing {
  kNone,        ///< raw data
  kCenter,      ///< subtract column means
  kStandardize, ///< column means, unit sample std
  kRobust,      ///< column medians, unit MAD-based std (1.4826 * MAD)
};

std::string_view to_string(Preprocessing p);
/// Accepts "none", "center", "standardize", "robust".
Preprocessing parse_preprocessing(std::string_view name);

/// Per-column affine map z = (x - center) / scale.
struct ColumnTransform {
  Vector center;
  Vector scale;

  static ColumnTransform identity(Eigen::Index cols);
  /// Zero scales (constant columns, MAD of zero) fall back to 1.
  static ColumnTransform fit(const DenseMatrix &m, Preprocessing mode);

  Eigen::Index cols() const { return center.size(); }
  DenseMatrix apply(const DenseMatrix &m) const;
  DenseMatrix restore(const DenseMatrix &z) const;
};

} // namespace rpls
