#include "rpls/baselines.hpp"
#include "rpls/datagen.hpp"
#include "rpls/errors.hpp"
#include "rpls/preprocess.hpp"
#include "rpls/random.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <set>

using namespace rpls;

TEST(CounterRng, FinalizerMatchesSplitMix64Reference) {
  // First output of the reference SplitMix64 generator seeded with 0.
  EXPECT_EQ(CounterRng::mix(0x9E3779B97F4A7C15ULL), 0xe220a8397b1dcdafULL);
}

TEST(CounterRng, FrozenOutputs) {
  // Computed by an independent implementation of the documented recipe.
  CounterRng rng(42, 7);
  EXPECT_EQ(rng.next_u64(), 0x75a694080932a32fULL);
  EXPECT_EQ(rng.next_u64(), 0x369337cb7f52cb3aULL);
  EXPECT_EQ(rng.next_u64(), 0xd3c8e8adda98012aULL);
  EXPECT_EQ(rng.counter(), 3u);
  CounterRng u(42, 7);
  EXPECT_EQ(u.uniform(), 0.4595730323428122);
  EXPECT_EQ(u.uniform(), 0.21318386762807073);
}

TEST(CounterRng, FrozenShuffle) {
  CounterRng rng(42, 21);
  std::vector<std::size_t> v{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  rng.shuffle(v);
  EXPECT_EQ(v, (std::vector<std::size_t>{5, 7, 6, 1, 4, 2, 3, 0, 8, 9}));
}

TEST(CounterRng, StreamsAreIndependentOfEachOther) {
  CounterRng a(1, 1), b(1, 2), c(2, 1);
  const auto va = a.next_u64();
  EXPECT_NE(va, b.next_u64());
  EXPECT_NE(va, c.next_u64());
}

TEST(CounterRng, DistributionMoments) {
  CounterRng rng(3, 0);
  const int n = 200000;
  double su = 0, sn = 0, sn2 = 0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    su += u;
    const double z = rng.normal();
    ASSERT_TRUE(std::isfinite(z));
    sn += z;
    sn2 += z * z;
  }
  EXPECT_NEAR(su / n, 0.5, 0.005);
  EXPECT_NEAR(sn / n, 0.0, 0.01);
  EXPECT_NEAR(sn2 / n, 1.0, 0.02);
}

TEST(CounterRng, BelowStaysInRange) {
  CounterRng rng(4, 0);
  std::vector<int> hits(7, 0);
  for (int i = 0; i < 7000; ++i) {
    const auto v = rng.below(7);
    ASSERT_LT(v, 7u);
    ++hits[v];
  }
  for (int h : hits)
    EXPECT_GT(h, 800);
}

TEST(SampleWithoutReplacement, DistinctAndInRange) {
  CounterRng rng(5, 0);
  const auto s = sample_without_replacement(rng, 50, 20);
  EXPECT_EQ(s.size(), 20u);
  EXPECT_EQ(std::set<std::size_t>(s.begin(), s.end()).size(), 20u);
  EXPECT_LT(*std::max_element(s.begin(), s.end()), 50u);
}

TEST(Generate, ShapesAndDeterminism) {
  SynthSpec spec;
  spec.seed = 11;
  const SynthData a = generate(spec), b = generate(spec);
  EXPECT_EQ(a.x.rows(), 150);
  EXPECT_EQ(a.x.cols(), 40);
  EXPECT_EQ(a.y.cols(), 4);
  EXPECT_EQ(a.truth.q_true.cols(), 5);
  EXPECT_EQ(a.x, b.x);
  EXPECT_EQ(a.y, b.y);
  spec.seed = 12;
  EXPECT_NE(generate(spec).x, a.x);
}

TEST(Generate, PredictorsHaveLatentRank) {
  SynthSpec spec;
  spec.seed = 13;
  const SynthData d = generate(spec);
  const Eigen::VectorXd s = svd(d.x).s;
  EXPECT_GT(s(4), 1e-6 * s(0));
  EXPECT_LT(s(5), 1e-10 * s(0));
  const DenseMatrix q = d.truth.q_true;
  EXPECT_LT((q.transpose() * q - DenseMatrix::Identity(5, 5)).norm(), 1e-10);
  // The predictors live in the span of the latent basis.
  EXPECT_LT((d.x - q * (q.transpose() * d.x)).norm(), 1e-9 * d.x.norm());
}

TEST(Generate, ThetaIsSparsePerResponse) {
  SynthSpec spec;
  spec.seed = 14;
  const SynthData d = generate(spec);
  for (Eigen::Index j = 0; j < d.truth.theta_true.cols(); ++j) {
    const auto nz = (d.truth.theta_true.col(j).array() != 0.0).count();
    EXPECT_EQ(nz, 5);
  }
}

TEST(Generate, NoiselessResponseIsExactlyLinear) {
  SynthSpec spec;
  spec.noise_sigma = 0.0;
  spec.seed = 15;
  const SynthData d = generate(spec);
  EXPECT_EQ(d.y, d.x * d.truth.theta_true);
  const LinearModel m = fit_mlr(d.x, d.y);
  EXPECT_LT((predict(m, d.x) - d.y).norm() / d.y.norm(), 1e-10);
}

TEST(Generate, RejectsBadSpecs) {
  SynthSpec spec;
  spec.n_collinear = 40;
  EXPECT_THROW(generate(spec), ConfigError);
  spec = SynthSpec{};
  spec.k_true = 41;
  EXPECT_THROW(generate(spec), ConfigError);
  spec = SynthSpec{};
  spec.noise_sigma = -1;
  EXPECT_THROW(generate(spec), ConfigError);
  spec = SynthSpec{};
  spec.r = 0;
  EXPECT_THROW(generate(spec), ConfigError);
}

TEST(InjectSparse, ZeroFractionLeavesDataAlone) {
  const SynthData d = generate(SynthSpec{});
  OutlierSpec o;
  o.kind = OutlierKind::kSparseRandom;
  o.fraction = 0.0;
  const CorruptedData c = inject_outliers(d.x, d.y, o);
  EXPECT_EQ(c.x, d.x);
  EXPECT_EQ(c.y, d.y);
  EXPECT_EQ(c.x_mask.count(), 0);
}

TEST(InjectSparse, CountsMagnitudesAndMasks) {
  SynthSpec spec;
  spec.seed = 16;
  const SynthData d = generate(spec);
  OutlierSpec o;
  o.kind = OutlierKind::kSparseRandom;
  o.seed = 99;
  const CorruptedData c = inject_outliers(d.x, d.y, o);
  EXPECT_EQ(c.x_mask.count(), 120);
  EXPECT_EQ(c.y_mask.count(), 12);
  const auto check = [&](const DenseMatrix &clean, const DenseMatrix &dirty,
                         const Mask &mask) {
    for (Eigen::Index j = 0; j < clean.cols(); ++j) {
      const Eigen::VectorXd col = clean.col(j);
      const double sd = std::sqrt((col.array() - col.mean()).square().sum() /
                                  static_cast<double>(col.size() - 1));
      for (Eigen::Index i = 0; i < clean.rows(); ++i) {
        const double diff = dirty(i, j) - clean(i, j);
        EXPECT_EQ(mask(i, j), diff != 0.0);
        if (mask(i, j))
          EXPECT_NEAR(std::abs(diff), 10.0 * sd, 1e-9 * (1.0 + sd + std::abs(clean(i, j))));
      }
    }
  };
  check(d.x, c.x, c.x_mask);
  check(d.y, c.y, c.y_mask);
  EXPECT_EQ(inject_outliers(d.x, d.y, o).x, c.x);
}

TEST(InjectSparse, ConstantColumnUsesUnitStd) {
  DenseMatrix x = DenseMatrix::Constant(10, 1, 3.0);
  DenseMatrix y = DenseMatrix::Zero(10, 1);
  OutlierSpec o;
  o.kind = OutlierKind::kSparseRandom;
  o.fraction = 0.1;
  o.magnitude = 4.0;
  const CorruptedData c = inject_sparse(x, y, o);
  EXPECT_EQ(c.x_mask.count(), 1);
  EXPECT_DOUBLE_EQ((c.x - x).cwiseAbs().sum(), 4.0);
}

TEST(InjectLowTail, ScalesSmallestValues) {
  DenseMatrix y(5, 1);
  y << 5, 1, 3, 2, 4;
  OutlierSpec o;
  o.kind = OutlierKind::kLowTail;
  o.tail_fraction = 0.2;
  const CorruptedResponse c = inject_low_tail(y, o);
  DenseMatrix expected(5, 1);
  expected << 5, 10, 3, 2, 4;
  EXPECT_EQ(c.y, expected);
  EXPECT_TRUE(c.mask(1, 0));
  EXPECT_EQ(c.mask.count(), 1);
}

TEST(InjectLowTail, TiesGoToLowerRow) {
  DenseMatrix y(5, 1);
  y << 1, 1, 3, 4, 5;
  OutlierSpec o;
  o.tail_fraction = 0.2;
  const CorruptedResponse c = inject_low_tail(y, o);
  EXPECT_TRUE(c.mask(0, 0));
  EXPECT_FALSE(c.mask(1, 0));
}

TEST(InjectLowTail, PerColumnCountAndUntouchedPredictors) {
  SynthSpec spec;
  spec.seed = 17;
  const SynthData d = generate(spec);
  OutlierSpec o;
  o.kind = OutlierKind::kLowTail;
  const CorruptedData c = inject_outliers(d.x, d.y, o);
  EXPECT_EQ(c.x, d.x);
  EXPECT_EQ(c.x_mask.count(), 0);
  for (Eigen::Index j = 0; j < d.y.cols(); ++j) {
    EXPECT_EQ(c.y_mask.col(j).count(), 15);
    // Every masked entry sits at or below every unmasked one.
    double max_masked = -INFINITY, min_unmasked = INFINITY;
    for (Eigen::Index i = 0; i < d.y.rows(); ++i) {
      if (c.y_mask(i, j)) {
        max_masked = std::max(max_masked, d.y(i, j));
        EXPECT_DOUBLE_EQ(c.y(i, j), 10.0 * d.y(i, j));
      } else {
        min_unmasked = std::min(min_unmasked, d.y(i, j));
        EXPECT_EQ(c.y(i, j), d.y(i, j));
      }
    }
    EXPECT_LE(max_masked, min_unmasked);
  }
}

TEST(OutlierSpec, RejectsBadValues) {
  OutlierSpec o;
  o.fraction = 1.5;
  EXPECT_THROW(o.validate(), ConfigError);
  o = OutlierSpec{};
  o.tail_multiplier = 0.0;
  EXPECT_THROW(o.validate(), ConfigError);
}

TEST(ColumnTransform, RobustUsesMedianAndMad) {
  DenseMatrix m(5, 1);
  m << 1, 2, 3, 4, 100;
  const ColumnTransform t = ColumnTransform::fit(m, Preprocessing::kRobust);
  EXPECT_DOUBLE_EQ(t.center(0), 3.0);
  EXPECT_DOUBLE_EQ(t.scale(0), 1.4826 * 1.0);
}

TEST(ColumnTransform, StandardizeGivesUnitSampleStd) {
  std::mt19937_64 gen(18);
  const DenseMatrix m = rpls::testing::gaussian(30, 3, gen, 4.0).array() + 2.0;
  const DenseMatrix z = ColumnTransform::fit(m, Preprocessing::kStandardize).apply(m);
  for (Eigen::Index j = 0; j < 3; ++j) {
    EXPECT_NEAR(z.col(j).mean(), 0.0, 1e-12);
    EXPECT_NEAR(z.col(j).squaredNorm() / 29.0, 1.0, 1e-12);
  }
}

TEST(ColumnTransform, RoundTripAndConstantColumns) {
  std::mt19937_64 gen(19);
  DenseMatrix m = rpls::testing::gaussian(20, 3, gen);
  m.col(1).setConstant(5.0);
  for (Preprocessing p : {Preprocessing::kNone, Preprocessing::kCenter,
                          Preprocessing::kStandardize, Preprocessing::kRobust}) {
    const ColumnTransform t = ColumnTransform::fit(m, p);
    EXPECT_EQ(t.scale(1), 1.0);
    EXPECT_LT((t.restore(t.apply(m)) - m).norm(), 1e-12);
  }
  EXPECT_EQ(ColumnTransform::fit(m, Preprocessing::kNone).apply(m), m);
  EXPECT_THROW(ColumnTransform::identity(2).apply(m), ConfigError);
}

TEST(Preprocessing, NamesRoundTrip) {
  for (Preprocessing p : {Preprocessing::kNone, Preprocessing::kCenter,
                          Preprocessing::kStandardize, Preprocessing::kRobust})
    EXPECT_EQ(parse_preprocessing(to_string(p)), p);
  EXPECT_THROW(parse_preprocessing("median"), ConfigError);
}
