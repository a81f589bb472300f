// Forward synthesis of a low-rank plus sparse pair sharing one score basis.
#pragma once

#include "oracles.hpp"

#include <algorithm>
#include <numeric>

namespace rpls::testing {

struct RecoveryProblem {
  Eigen::MatrixXd q;
  Eigen::MatrixXd lambda_x, lambda_y;
  Eigen::MatrixXd low_x, low_y;     // Q Lx^T, Q Ly^T
  Eigen::MatrixXd sparse_x, sparse_y;
  Eigen::MatrixXd x, y;
};

// Corrupts round(fraction * size) distinct entries with +/- magnitude * the
// sample std of the entry's column.
inline Eigen::MatrixXd sparse_corruption(const Eigen::MatrixXd &clean,
                                         double fraction, double magnitude,
                                         std::mt19937_64 &gen) {
  const Eigen::Index size = clean.size();
  const auto count = static_cast<Eigen::Index>(std::llround(fraction * size));
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(size));
  std::iota(idx.begin(), idx.end(), 0);
  std::shuffle(idx.begin(), idx.end(), gen);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(clean.rows(), clean.cols());
  std::bernoulli_distribution coin(0.5);
  for (Eigen::Index t = 0; t < count; ++t) {
    const Eigen::Index i = idx[static_cast<std::size_t>(t)] % clean.rows();
    const Eigen::Index j = idx[static_cast<std::size_t>(t)] / clean.rows();
    const Eigen::VectorXd col = clean.col(j);
    const double sd = std::sqrt((col.array() - col.mean()).square().sum() /
                                static_cast<double>(col.size() - 1));
    out(i, j) = (coin(gen) ? 1.0 : -1.0) * magnitude * sd;
  }
  return out;
}

inline RecoveryProblem make_recovery_problem(Eigen::Index n, Eigen::Index p,
                                             Eigen::Index r, Eigen::Index k,
                                             double fraction, double magnitude,
                                             std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  RecoveryProblem pr;
  const double s = std::sqrt(static_cast<double>(n) / static_cast<double>(k));
  pr.q = random_orthonormal(n, k, gen);
  pr.lambda_x = gaussian(p, k, gen, s);
  pr.lambda_y = gaussian(r, k, gen, s);
  pr.low_x = pr.q * pr.lambda_x.transpose();
  pr.low_y = pr.q * pr.lambda_y.transpose();
  pr.sparse_x = sparse_corruption(pr.low_x, fraction, magnitude, gen);
  pr.sparse_y = sparse_corruption(pr.low_y, fraction, magnitude, gen);
  pr.x = pr.low_x + pr.sparse_x;
  pr.y = pr.low_y + pr.sparse_y;
  return pr;
}

} // namespace rpls::testing
