#include "rpls/errors.hpp"
#include "rpls/linalg_ops.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <limits>

using namespace rpls;
using rpls::testing::gaussian;
using rpls::testing::random_orthonormal;

namespace {

double orthonormality_error(const DenseMatrix &m) {
  return (m.transpose() * m -
          DenseMatrix::Identity(m.cols(), m.cols()))
      .norm();
}

} // namespace

TEST(SoftThreshold, ShrinksAboveThreshold) {
  DenseMatrix k(1, 1);
  k << 3.0;
  EXPECT_DOUBLE_EQ(soft_threshold(k, 1.0)(0, 0), 2.0);
}

TEST(SoftThreshold, ZeroesInsideBand) {
  DenseMatrix k(1, 2);
  k << 0.5, -0.5;
  EXPECT_TRUE(soft_threshold(k, 1.0).isZero(0.0));
}

TEST(SoftThreshold, NegativeEntriesMoveUp) {
  // The lower branch applies only below -eps.
  DenseMatrix k(1, 3);
  k << -3.0, -1.0, 0.7;
  const DenseMatrix out = soft_threshold(k, 1.0);
  EXPECT_DOUBLE_EQ(out(0, 0), -2.0);
  EXPECT_DOUBLE_EQ(out(0, 1), 0.0);
  EXPECT_DOUBLE_EQ(out(0, 2), 0.0);
}

TEST(SoftThreshold, ZeroEpsIsIdentity) {
  std::mt19937_64 gen(1);
  const DenseMatrix k = gaussian(4, 6, gen);
  EXPECT_EQ(soft_threshold(k, 0.0), k);
}

TEST(SoftThreshold, ContractsAndKeepsSign) {
  std::mt19937_64 gen(2);
  for (int trial = 0; trial < 20; ++trial) {
    const DenseMatrix k = gaussian(5, 5, gen, 2.0);
    const double eps = 0.1 * trial;
    const DenseMatrix out = soft_threshold(k, eps);
    for (Eigen::Index i = 0; i < k.size(); ++i) {
      EXPECT_LE(std::abs(out(i)), std::abs(k(i)));
      EXPECT_TRUE(out(i) == 0.0 || (out(i) > 0) == (k(i) > 0));
    }
  }
}

TEST(SoftThreshold, MatchesGridSearchMinimizer) {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> eps_dist(0.0, 2.0);
  for (int trial = 0; trial < 10; ++trial) {
    const DenseMatrix k = gaussian(3, 3, gen, 2.0);
    const double eps = eps_dist(gen);
    const DenseMatrix out = soft_threshold(k, eps);
    for (Eigen::Index i = 0; i < k.size(); ++i) {
      const double ki = k(i);
      const double z = rpls::testing::grid_minimize(
          [&](double v) { return eps * std::abs(v) + 0.5 * (v - ki) * (v - ki); },
          ki - eps - 1.0, ki + eps + 1.0);
      EXPECT_NEAR(out(i), z, 1e-6);
    }
  }
}

TEST(SoftThreshold, RejectsBadInput) {
  DenseMatrix k = DenseMatrix::Ones(2, 2);
  EXPECT_THROW(soft_threshold(k, -1.0), InvalidInputError);
  k(1, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(soft_threshold(k, 1.0), InvalidInputError);
  k(1, 1) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(soft_threshold(k, 1.0), InvalidInputError);
}

TEST(Svd, Identity) {
  const SvdFactors f = svd(DenseMatrix::Identity(3, 3));
  EXPECT_TRUE(f.s.isApprox(Vector::Ones(3)));
}

TEST(Svd, DiagonalIsItsOwnDecomposition) {
  DenseMatrix a(2, 2);
  a << 5, 0, 0, 3;
  const SvdFactors f = svd(a);
  EXPECT_NEAR(f.s(0), 5.0, 1e-14);
  EXPECT_NEAR(f.s(1), 3.0, 1e-14);
  EXPECT_TRUE(f.u.cwiseAbs().isApprox(DenseMatrix::Identity(2, 2)));
  EXPECT_TRUE(f.v.cwiseAbs().isApprox(DenseMatrix::Identity(2, 2)));
}

TEST(Svd, ReconstructsTallAndWide) {
  std::mt19937_64 gen(4);
  for (auto [m, n] : {std::pair{10, 4}, std::pair{4, 10}, std::pair{7, 7}}) {
    const DenseMatrix a = gaussian(m, n, gen);
    const SvdFactors f = svd(a);
    ASSERT_EQ(f.s.size(), std::min(m, n));
    EXPECT_LT(rpls::testing::rel_error(f.u * f.s.asDiagonal() * f.v.transpose(), a),
              1e-8);
    EXPECT_LT(orthonormality_error(f.u), 1e-10);
    EXPECT_LT(orthonormality_error(f.v), 1e-10);
    for (Eigen::Index i = 1; i < f.s.size(); ++i)
      EXPECT_GE(f.s(i - 1), f.s(i));
    EXPECT_GE(f.s.minCoeff(), 0.0);
    EXPECT_TRUE(f.s.isApprox(rpls::testing::singular_values_oracle(a), 1e-8));
  }
}

TEST(Svd, LargestEntryOfEachLeftVectorIsNonnegative) {
  std::mt19937_64 gen(5);
  const SvdFactors f = svd(gaussian(9, 5, gen));
  for (Eigen::Index j = 0; j < f.u.cols(); ++j) {
    Eigen::Index imax = 0;
    f.u.col(j).cwiseAbs().maxCoeff(&imax);
    EXPECT_GE(f.u(imax, j), 0.0);
  }
}

TEST(Svd, ZeroMatrixGivesPaddedIdentity) {
  const SvdFactors f = svd(DenseMatrix::Zero(5, 3));
  EXPECT_TRUE(f.s.isZero(0.0));
  EXPECT_EQ(f.u, DenseMatrix::Identity(5, 3));
  EXPECT_EQ(f.v, DenseMatrix::Identity(3, 3));
}

TEST(Svd, DeterministicOnSameBits) {
  std::mt19937_64 gen(6);
  const DenseMatrix a = gaussian(12, 6, gen);
  const SvdFactors f1 = svd(a), f2 = svd(a);
  EXPECT_EQ(f1.u, f2.u);
  EXPECT_EQ(f1.s, f2.s);
  EXPECT_EQ(f1.v, f2.v);
}

TEST(SingularValueThreshold, ZeroTauIsIdentity) {
  std::mt19937_64 gen(7);
  const DenseMatrix a = gaussian(6, 4, gen);
  EXPECT_LT(rpls::testing::rel_error(singular_value_threshold(a, 0.0), a), 1e-8);
}

TEST(SingularValueThreshold, ShrinksRankOne) {
  std::mt19937_64 gen(8);
  const Vector u = gaussian(6, 1, gen).col(0).normalized();
  const Vector v = gaussian(4, 1, gen).col(0).normalized();
  const DenseMatrix a = 5.0 * u * v.transpose();
  EXPECT_LT(rpls::testing::rel_error(singular_value_threshold(a, 2.0),
                                     3.0 * u * v.transpose()),
            1e-12);
}

TEST(SingularValueThreshold, AllBelowTauGivesZero) {
  std::mt19937_64 gen(9);
  DenseMatrix a = gaussian(5, 3, gen);
  a *= 2.0 / svd(a).s(0);
  EXPECT_TRUE(singular_value_threshold(a, 3.0).isZero(0.0));
}

TEST(SingularValueThreshold, OutputSpectrumIsShiftedInput) {
  std::mt19937_64 gen(10);
  for (int trial = 0; trial < 10; ++trial) {
    const DenseMatrix a = gaussian(8, 5, gen);
    const Vector s = rpls::testing::singular_values_oracle(a);
    const double tau = s(2);
    const DenseMatrix out = singular_value_threshold(a, tau);
    const Vector s_out = svd(out).s;
    for (Eigen::Index i = 0; i < s.size(); ++i)
      EXPECT_NEAR(s_out(i), std::max(s(i) - tau, 0.0), 1e-8);
    EXPECT_LE(nuclear_norm(out),
              std::max(0.0, s.sum() - tau * static_cast<double>(s.size())) +
                  tau * 3 + 1e-9);
    EXPECT_LE(nuclear_norm(out), s.sum() + 1e-9);
  }
}

TEST(Procrustes, IdentityIsFixed) {
  EXPECT_TRUE(procrustes_orthonormal(DenseMatrix::Identity(4, 4))
                  .isApprox(DenseMatrix::Identity(4, 4), 1e-14));
}

TEST(Procrustes, PositiveDiagonalPadded) {
  DenseMatrix d = DenseMatrix::Zero(4, 2);
  d(0, 0) = 4;
  d(1, 1) = 2;
  EXPECT_TRUE(procrustes_orthonormal(d).isApprox(DenseMatrix::Identity(4, 2), 1e-14));
}

TEST(Procrustes, ZeroTargetGivesIdentityPadding) {
  EXPECT_EQ(procrustes_orthonormal(DenseMatrix::Zero(6, 3)),
            DenseMatrix::Identity(6, 3));
}

TEST(Procrustes, BeatsRandomOrthonormalSamples) {
  std::mt19937_64 gen(11);
  const DenseMatrix d = gaussian(8, 3, gen);
  const DenseMatrix q = procrustes_orthonormal(d);
  EXPECT_LT(orthonormality_error(q), 1e-10);
  const double best = (d.transpose() * q).trace();
  for (int i = 0; i < 1000; ++i) {
    const DenseMatrix r = random_orthonormal(8, 3, gen);
    EXPECT_GE(best, (d.transpose() * r).trace());
  }
}

TEST(Procrustes, RejectsWideTarget) {
  EXPECT_THROW(procrustes_orthonormal(DenseMatrix::Ones(2, 3)), ConfigError);
}

TEST(PseudoInverse, MatchesOracleAndFlagsRankLoss) {
  std::mt19937_64 gen(12);
  const DenseMatrix a = gaussian(7, 4, gen);
  bool cut = true;
  EXPECT_LT(rpls::testing::rel_error(pseudo_inverse(a, 1e-12, &cut),
                                     rpls::testing::pinv_oracle(a)),
            1e-10);
  EXPECT_FALSE(cut);

  DenseMatrix deficient = a;
  deficient.col(3) = deficient.col(0) + deficient.col(1);
  const DenseMatrix p = pseudo_inverse(deficient, 1e-12, &cut);
  EXPECT_TRUE(cut);
  EXPECT_LT(rpls::testing::rel_error(p, rpls::testing::pinv_oracle(deficient)), 1e-8);
}
