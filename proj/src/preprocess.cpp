#include "rpls/preprocess.hpp"

#include "rpls/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <vector>

namespace rpls {

namespace {

double median(std::vector<double> v) {
  const std::size_t n = v.size();
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(n / 2);
  std::nth_element(v.begin(), mid, v.end());
  if (n % 2 == 1)
    return *mid;
  const double upper = *mid;
  const double lower = *std::max_element(v.begin(), mid);
  return 0.5 * (lower + upper);
}

} // namespace

std::string_view to_string(Preprocessing p) {
  switch (p) {
  case Preprocessing::kNone:
    return "none";
  case Preprocessing::kCenter:
    return "center";
  case Preprocessing::kStandardize:
    return "standardize";
  case Preprocessing::kRobust:
    return "robust";
  }
  return "none";
}

Preprocessing parse_preprocessing(std::string_view name) {
  if (name == "none")
    return Preprocessing::kNone;
  if (name == "center")
    return Preprocessing::kCenter;
  if (name == "standardize")
    return Preprocessing::kStandardize;
  if (name == "robust")
    return Preprocessing::kRobust;
  throw ConfigError(fmt::format("unknown preprocessing '{}'", name));
}

ColumnTransform ColumnTransform::identity(Eigen::Index cols) {
  return {Vector::Zero(cols), Vector::Ones(cols)};
}

ColumnTransform ColumnTransform::fit(const DenseMatrix &m, Preprocessing mode) {
  require_finite(m, "ColumnTransform::fit");
  const Eigen::Index n = m.rows(), p = m.cols();
  ColumnTransform t = identity(p);
  if (mode == Preprocessing::kNone)
    return t;

  for (Eigen::Index j = 0; j < p; ++j) {
    if (mode == Preprocessing::kRobust) {
      std::vector<double> col(m.col(j).data(), m.col(j).data() + n);
      const double med = median(col);
      for (double &v : col)
        v = std::abs(v - med);
      t.center(j) = med;
      t.scale(j) = 1.4826 * median(std::move(col));
    } else {
      t.center(j) = m.col(j).mean();
      if (mode == Preprocessing::kStandardize && n > 1)
        t.scale(j) = std::sqrt((m.col(j).array() - t.center(j)).square().sum() /
                               static_cast<double>(n - 1));
    }
    if (!(t.scale(j) > 0.0))
      t.scale(j) = 1.0;
  }
  return t;
}

DenseMatrix ColumnTransform::apply(const DenseMatrix &m) const {
  if (m.cols() != cols())
    throw ConfigError(fmt::format("ColumnTransform: expected {} columns, got {}",
                                  cols(), m.cols()));
  return ((m.rowwise() - center.transpose()).array().rowwise() /
          scale.transpose().array())
      .matrix();
}

DenseMatrix ColumnTransform::restore(const DenseMatrix &z) const {
  if (z.cols() != cols())
    throw ConfigError(fmt::format("ColumnTransform: expected {} columns, got {}",
                                  cols(), z.cols()));
  return ((z.array().rowwise() * scale.transpose().array()).matrix().rowwise() +
          center.transpose());
}

} // namespace rpls
