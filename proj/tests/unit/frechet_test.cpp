// Copyright 2026 The fvdlens Authors.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "fvdlens/error.hpp"
#include "fvdlens/frechet.hpp"
#include "fvdlens/rng.hpp"
#include "synthetic.hpp"

namespace fvdlens {
namespace {

using testing::features_from;
using testing::seeded_normal;
using testing::seeded_psd;

GaussianStats stats(Vector mean, Matrix cov) {
  GaussianStats s;
  s.mean = std::move(mean);
  s.cov = std::move(cov);
  s.n_samples = 1;
  return s;
}

void expect_error(ErrorKind kind, const std::function<void()>& fn) {
  try {
    fn();
    FAIL() << "expected " << to_string(kind);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), kind) << e.what();
  }
}

TEST(FitGaussian, IdenticalRowsHaveZeroCovariance) {
  Matrix data(3, 2);
  data << 1, 2, 1, 2, 1, 2;
  const GaussianStats s = fit_gaussian(features_from(data));
  EXPECT_DOUBLE_EQ(s.mean(0), 1.0);
  EXPECT_DOUBLE_EQ(s.mean(1), 2.0);
  EXPECT_EQ(s.cov, Matrix::Zero(2, 2));
  EXPECT_EQ(s.n_samples, 3);
}

TEST(FitGaussian, TwoPointVarianceUsesOneOverN) {
  Matrix data(2, 2);
  data << 0, 0, 2, 0;
  const GaussianStats s = fit_gaussian(features_from(data));
  EXPECT_DOUBLE_EQ(s.mean(0), 1.0);
  EXPECT_DOUBLE_EQ(s.mean(1), 0.0);
  EXPECT_DOUBLE_EQ(s.cov(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(s.cov(0, 1), 0.0);
  EXPECT_DOUBLE_EQ(s.cov(1, 1), 0.0);
}

TEST(FitGaussian, MatchesTwoPassLoopOracle) {
  const Matrix data = seeded_normal(64, 4, 11);
  const GaussianStats s = fit_gaussian(features_from(data));
  double mean[4] = {0, 0, 0, 0};
  for (int i = 0; i < 64; ++i)
    for (int j = 0; j < 4; ++j) mean[j] += data(i, j) / 64.0;
  for (int a = 0; a < 4; ++a) {
    EXPECT_NEAR(s.mean(a), mean[a], 1e-12);
    for (int b = 0; b < 4; ++b) {
      double c = 0.0;
      for (int i = 0; i < 64; ++i) c += (data(i, a) - mean[a]) * (data(i, b) - mean[b]);
      EXPECT_NEAR(s.cov(a, b), c / 64.0, 1e-12);
      EXPECT_EQ(s.cov(a, b), s.cov(b, a));
    }
  }
}

TEST(FitGaussian, AcceptsLargeRowCount) {
  const GaussianStats s = fit_gaussian(features_from(seeded_normal(2048, 16, 3)));
  EXPECT_EQ(s.n_samples, 2048);
  EXPECT_EQ(s.dim(), 16);
}

TEST(FeatureMatrixValidate, RejectsBadInput) {
  Matrix data = seeded_normal(4, 2, 1);
  data(2, 1) = std::numeric_limits<double>::quiet_NaN();
  expect_error(ErrorKind::NonFiniteInput, [&] { fit_gaussian(features_from(data)); });

  FeatureMatrix dup = features_from(seeded_normal(3, 2, 1));
  dup.ids[2] = dup.ids[0];
  expect_error(ErrorKind::IdCountMismatch, [&] { dup.validate(); });

  FeatureMatrix short_ids = features_from(seeded_normal(3, 2, 1));
  short_ids.ids.pop_back();
  expect_error(ErrorKind::IdCountMismatch, [&] { short_ids.validate(); });

  FeatureMatrix empty;
  expect_error(ErrorKind::InvalidArgument, [&] { empty.validate(); });
}

TEST(SqrtmPsd, IdentityAndDiagonal) {
  EXPECT_TRUE(sqrtm_psd(Matrix::Identity(3, 3)).isApprox(Matrix::Identity(3, 3), 1e-14));
  Matrix d = Eigen::Vector3d(4, 9, 0).asDiagonal();
  const Matrix r = sqrtm_psd(d);
  EXPECT_NEAR(r(0, 0), 2.0, 1e-12);
  EXPECT_NEAR(r(1, 1), 3.0, 1e-12);
  EXPECT_NEAR(r(2, 2), 0.0, 1e-12);
  EXPECT_NEAR(r(0, 1), 0.0, 1e-12);
}

TEST(SqrtmPsd, SquareReconstructsInput) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Matrix m = seeded_psd(6, 6, seed);
    const Matrix r = sqrtm_psd(m);
    EXPECT_LT((r * r - m).norm(), 1e-8) << "seed " << seed;
    EXPECT_LT((r - r.transpose()).norm(), 1e-12);
  }
}

TEST(SqrtmPsd, IdempotentThroughSquare) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Matrix m = seeded_psd(5, 3, seed + 100);
    const Matrix r = sqrtm_psd(m);
    EXPECT_LT((sqrtm_psd(r * r) - r).norm(), 1e-7) << "seed " << seed;
  }
}

TEST(SqrtmPsd, RejectsAsymmetricAndNonFinite) {
  Matrix m = Matrix::Identity(3, 3);
  m(0, 1) = 0.5;
  expect_error(ErrorKind::NotSymmetric, [&] { sqrtm_psd(m); });
  Matrix n = Matrix::Identity(2, 2);
  n(1, 1) = std::numeric_limits<double>::infinity();
  expect_error(ErrorKind::NonFiniteInput, [&] { sqrtm_psd(n); });
}

TEST(FrechetDistance, IdenticalStatsAreZero) {
  const GaussianStats s = fit_gaussian(features_from(seeded_normal(50, 6, 8)));
  const FrechetResult r = frechet_distance(s, s);
  EXPECT_NEAR(r.value, 0.0, 1e-9);
  EXPECT_GE(r.value, 0.0);
}

TEST(FrechetDistance, OneDimensionalExample) {
  Matrix one(1, 1);
  one << 1.0;
  Matrix four(1, 1);
  four << 4.0;
  const FrechetResult r =
      frechet_distance(stats(Vector::Constant(1, 0.0), one), stats(Vector::Constant(1, 3.0), four));
  EXPECT_NEAR(r.value, 10.0, 1e-12);
  EXPECT_NEAR(r.mean_term, 9.0, 1e-12);
  EXPECT_NEAR(r.trace_term, 1.0, 1e-12);
}

TEST(FrechetDistance, DiagonalClosedForm) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    CounterRng rng(derive_key(seed, {77}));
    Vector mr(3), mg(3), a(3), b(3);
    double expected = 0.0;
    for (int i = 0; i < 3; ++i) {
      mr(i) = rng.uniform(-2, 2);
      mg(i) = rng.uniform(-2, 2);
      a(i) = rng.uniform(0, 5);
      b(i) = rng.uniform(0, 5);
      expected += (mr(i) - mg(i)) * (mr(i) - mg(i));
      expected += (std::sqrt(a(i)) - std::sqrt(b(i))) * (std::sqrt(a(i)) - std::sqrt(b(i)));
    }
    const FrechetResult r =
        frechet_distance(stats(mr, a.asDiagonal()), stats(mg, b.asDiagonal()));
    EXPECT_NEAR(r.value, expected, 1e-9);
  }
}

TEST(FrechetDistance, DecompositionSumsAndIsSymmetric) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const GaussianStats a = fit_gaussian(features_from(seeded_normal(40, 5, seed)));
    const GaussianStats b = fit_gaussian(features_from(seeded_normal(30, 5, seed + 50)));
    const FrechetResult ab = frechet_distance(a, b);
    const FrechetResult ba = frechet_distance(b, a);
    EXPECT_NEAR(ab.value, ab.mean_term + ab.trace_term, 1e-9);
    EXPECT_NEAR(ab.value, ba.value, 1e-9);
    EXPECT_GE(ab.value, 0.0);
  }
}

TEST(FrechetDistance, ScalesQuadratically) {
  const Matrix x = seeded_normal(40, 4, 5);
  Matrix y = seeded_normal(40, 4, 6);
  y.col(0).array() += 0.7;
  const FrechetResult base = compute_fvd(features_from(x), features_from(y));
  const double c = 3.5;
  const FrechetResult scaled = compute_fvd(features_from(c * x), features_from(c * y));
  EXPECT_NEAR(scaled.mean_term / base.mean_term, c * c, 1e-8 * c * c);
  EXPECT_NEAR(scaled.trace_term / base.trace_term, c * c, 1e-8 * c * c);
}

TEST(FrechetDistance, RankDeficientInputsAreFiniteAndNonNegative) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Matrix x = seeded_normal(3, 8, seed);
    const Matrix y = seeded_normal(5, 8, seed + 20);
    const FrechetResult r = compute_fvd(features_from(x), features_from(y));
    EXPECT_TRUE(std::isfinite(r.value));
    EXPECT_GE(r.value, 0.0);
    EXPECT_LT(compute_fvd(features_from(x), features_from(x)).value, 1e-6);
  }
}

TEST(FrechetDistance, DimensionMismatch) {
  const GaussianStats a = fit_gaussian(features_from(seeded_normal(10, 3, 1)));
  const GaussianStats b = fit_gaussian(features_from(seeded_normal(10, 4, 2)));
  expect_error(ErrorKind::DimensionMismatch, [&] { frechet_distance(a, b); });
}

TEST(FrechetDistance, NegativeTraceBeyondToleranceThrows) {
  // An indefinite "covariance" makes the trace term negative; no PSD input
  // can do this, so it has to surface as an error.
  Matrix cov = Matrix::Zero(2, 2);
  cov(0, 0) = -1.0;
  const GaussianStats bad = stats(Vector::Zero(2), cov);
  const GaussianStats zero = stats(Vector::Zero(2), Matrix::Zero(2, 2));
  expect_error(ErrorKind::NumericalInstability, [&] { frechet_distance(bad, zero); });
}

TEST(FrechetDistance, TinyNegativeTraceIsClamped) {
  Matrix cov = Matrix::Zero(2, 2);
  cov(0, 0) = -5e-7;
  const FrechetResult r =
      frechet_distance(stats(Vector::Zero(2), cov), stats(Vector::Zero(2), Matrix::Zero(2, 2)));
  EXPECT_TRUE(r.clamped);
  EXPECT_EQ(r.value, 0.0);
  EXPECT_EQ(r.trace_term, 0.0);
}

TEST(ComputeFvd, SameMatrixIsZero) {
  const FeatureMatrix f = features_from(seeded_normal(100, 8, 9));
  EXPECT_LT(compute_fvd(f, f).value, 1e-9);
}

TEST(ComputeFvd, UnitShiftIsAboutOne) {
  const Matrix x = seeded_normal(8192, 8, 21);
  Matrix y = seeded_normal(8192, 8, 22);
  y.col(0).array() += 1.0;
  const FrechetResult r = compute_fvd(features_from(x), features_from(y));
  EXPECT_LT(std::abs(r.value - 1.0), 0.1);
}

}  // namespace
}  // namespace fvdlens
