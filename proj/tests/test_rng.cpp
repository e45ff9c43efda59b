#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <vector>

#include "levyou/rng.hpp"
#include "test_support.hpp"

using namespace levyou;

TEST(Stream, SameSeedAndIndexAreIdentical) {
  Stream a = derive_stream(Seed{42}, 0);
  Stream b = derive_stream(Seed{42}, 0);
  for (int i = 0; i < 1000; ++i) EXPECT_EQ(a.uniform(), b.uniform());
}

TEST(Stream, DifferentIndexDiffers) {
  Stream a = derive_stream(Seed{42}, 0);
  Stream b = derive_stream(Seed{42}, 1);
  int differ = 0;
  for (int i = 0; i < 1000; ++i) differ += a.uniform() != b.uniform();
  EXPECT_GT(differ, 0);
}

TEST(Stream, FourHundredDistinctFirstUniforms) {
  std::set<double> first;
  for (std::uint64_t k = 0; k < 400; ++k) first.insert(derive_stream(Seed{20240601}, k).uniform());
  EXPECT_EQ(first.size(), 400u);
}

TEST(Stream, DifferentSeedsDiffer) {
  EXPECT_NE(derive_stream(Seed{1}, 0).next_u64(), derive_stream(Seed{2}, 0).next_u64());
}

TEST(Stream, UniformIsInOpenUnitInterval) {
  Stream s = derive_stream(Seed{3}, 0);
  for (int i = 0; i < 100000; ++i) {
    const double u = s.uniform();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(Samplers, StdNormalMoments) {
  Stream s = derive_stream(Seed{5}, 0);
  std::vector<double> x(1000000);
  for (auto& v : x) v = sample_std_normal(s);
  const auto m = testsupport::moments(x);
  EXPECT_NEAR(m.mean, 0.0, 5e-3);
  EXPECT_NEAR(m.var, 1.0, 5 * std::sqrt(2.0 / x.size()));
  EXPECT_NEAR(m.skew, 0.0, 0.01);
}

TEST(Samplers, GammaUnitMean) {
  Stream s = derive_stream(Seed{6}, 0);
  std::vector<double> x(1000000);
  for (auto& v : x) v = sample_gamma(1.0, 1.0, s);
  const auto m = testsupport::moments(x);
  EXPECT_NEAR(m.mean, 1.0, 0.005);
  EXPECT_NEAR(m.var, 1.0, 0.02);
}

TEST(Samplers, GammaSmallAndLargeShapes) {
  for (double shape : {1e-3, 0.05, 0.5, 2.5, 40.0}) {
    Stream s = derive_stream(Seed{7}, static_cast<std::uint64_t>(shape * 1000));
    std::vector<double> x(200000);
    for (auto& v : x) {
      v = sample_gamma(shape, 2.0, s);
      ASSERT_GT(v, 0.0);
    }
    const auto m = testsupport::moments(x);
    const double mean = 2.0 * shape, var = 4.0 * shape;
    EXPECT_NEAR(m.mean, mean, 5 * std::sqrt(var / x.size())) << "shape " << shape;
  }
}

TEST(Samplers, GammaTinyShapeStaysPositive) {
  Stream s = derive_stream(Seed{8}, 0);
  for (int i = 0; i < 10000; ++i) ASSERT_GT(sample_gamma(1e-5, 1.0, s), 0.0);
}

TEST(Samplers, InverseGaussianMoments) {
  const double m = 2.0, lambda = 3.0;
  Stream s = derive_stream(Seed{9}, 0);
  std::vector<double> x(1000000);
  for (auto& v : x) v = sample_inverse_gaussian(m, lambda, s);
  const auto mo = testsupport::moments(x);
  const double var = m * m * m / lambda;
  EXPECT_NEAR(mo.mean, m, 5 * std::sqrt(var / x.size()));
  EXPECT_NEAR(mo.var / var, 1.0, 0.03);
}

TEST(Samplers, InverseGaussianSmallDt) {
  // mean dt, shape dt^2 (mu = eta2 = 1) at dt = 1e-4
  Stream s = derive_stream(Seed{10}, 0);
  double sum = 0;
  const int n = 400000;
  for (int i = 0; i < n; ++i) {
    const double v = sample_inverse_gaussian(1e-4, 1e-8, s);
    ASSERT_GT(v, 0.0);
    sum += v;
  }
  EXPECT_NEAR(sum / n, 1e-4, 5 * std::sqrt(1e-4 / n));
}

TEST(Samplers, RejectNonPositiveParameters) {
  Stream s = derive_stream(Seed{1}, 0);
  EXPECT_THROW(sample_gamma(0.0, 1.0, s), DomainError);
  EXPECT_THROW(sample_gamma(1.0, -1.0, s), DomainError);
  EXPECT_THROW(sample_inverse_gaussian(-1.0, 1.0, s), DomainError);
  EXPECT_THROW(sample_inverse_gaussian(1.0, 0.0, s), DomainError);
}
