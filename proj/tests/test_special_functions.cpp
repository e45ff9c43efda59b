#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "levyou/special_functions.hpp"

using namespace levyou;

namespace {

// Reference values from tests/oracles/special_values.py (mpmath, 50 digits).
struct Ref {
  double x;
  double want;
};

void expect_rel(double got, double want, double rel) {
  if (want == 0.0) {
    EXPECT_EQ(got, 0.0);
  } else {
    EXPECT_LE(std::fabs(got - want) / std::fabs(want), rel) << "got " << got << " want " << want;
  }
}

}  // namespace

TEST(NormalCdf, Oracles) {
  EXPECT_EQ(std_normal_cdf(0.0).value(), 0.5);
  const Ref refs[] = {{1.96, 0.97500210485177956379},   {-8.0, 6.2209605742717841235e-16},
                      {-1.0, 0.15865525393145705141},   {0.5, 0.69146246127401310364},
                      {3.0, 0.99865010196836990547},    {-20.0, 2.7536241186062336951e-89},
                      {-37.5, 4.6053530095819548438e-308}, {6.0, 0.99999999901341235496}};
  for (const auto& r : refs) expect_rel(std_normal_cdf(r.x).value(), r.want, 1e-13);
}

TEST(NormalCdf, AgreesWithErfc) {
  for (double x = -30; x <= 8; x += 0.173) {
    const double ref = 0.5 * std::erfc(-x / std::sqrt(2.0));
    expect_rel(std_normal_cdf(x).value(), ref, 1e-12);
  }
}

TEST(NormalCdf, Symmetry) {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> u(-40, 40);
  for (int i = 0; i < 5000; ++i) {
    const double x = u(gen);
    EXPECT_NEAR(std_normal_cdf(x).value() + std_normal_cdf(-x).value(), 1.0, 1e-12);
  }
}

TEST(NormalCdf, LogTail) {
  expect_rel(log_std_normal_cdf(-30.0), -454.32124395634319711, 1e-13);
  expect_rel(log_std_normal_cdf(-40.0), -804.60844201375378817, 1e-13);
  expect_rel(log_std_normal_cdf(-100.0), -5005.5242086942050886, 1e-13);
  expect_rel(log_std_normal_cdf(0.5), std::log(0.69146246127401310364), 1e-13);
  EXPECT_TRUE(std::isfinite(log_std_normal_cdf(-1e5)));
}

TEST(NormalCdf, RejectsNonFinite) {
  EXPECT_THROW(std_normal_cdf(std::numeric_limits<double>::quiet_NaN()), DomainError);
  EXPECT_THROW(std_normal_cdf(std::numeric_limits<double>::infinity()), DomainError);
}

TEST(NormalQuantile, Oracles) {
  EXPECT_EQ(std_normal_quantile(0.5), 0.0);
  expect_rel(std_normal_quantile(0.975), 1.9599639845400538556, 1e-12);
  expect_rel(std_normal_quantile(0.025), -1.9599639845400538556, 1e-12);
  expect_rel(std_normal_quantile(0.9), 1.2815515655446005935, 1e-12);
  expect_rel(std_normal_quantile(1e-10), -6.3613409024040561991, 1e-12);
  expect_rel(std_normal_quantile(0.999999), 4.7534243088170877657, 1e-9);
}

TEST(NormalQuantile, InvertsCdf) {
  for (double x = -6; x <= 6; x += 0.01) EXPECT_NEAR(std_normal_quantile(std_normal_cdf(x)), x, 1e-8);
}

TEST(NormalQuantile, RejectsOutsideOpenInterval) {
  EXPECT_THROW(std_normal_quantile(0.0), DomainError);
  EXPECT_THROW(std_normal_quantile(1.0), DomainError);
  EXPECT_THROW(std_normal_quantile(-0.1), DomainError);
}

TEST(LogGamma, Oracles) {
  expect_rel(log_gamma(0.5), 0.57236494292470008707, 1e-13);
  expect_rel(log_gamma(0.001), 6.9071788853838536617, 1e-13);
  expect_rel(log_gamma(7.25), 7.0521854507385394449, 1e-13);
  expect_rel(log_gamma(150.0), 600.00947055532742811, 1e-13);
  expect_rel(log_gamma(2.5), 0.28468287047291915963, 1e-13);
  for (double x = 0.01; x < 50; x *= 1.37) expect_rel(log_gamma(x), std::lgamma(x), 1e-12);
}

TEST(RegularizedGamma, Oracles) {
  EXPECT_NEAR(regularized_lower_gamma(1.0, std::log(2.0)).value(), 0.5, 1e-15);
  EXPECT_EQ(regularized_lower_gamma(3.7, 0.0).value(), 0.0);
  const struct {
    double s, x, want;
  } refs[] = {{2, 2, 0.59399415029016192432},     {0.5, 0.3, 0.56142197391900013648},
              {5, 3, 0.18473675547622793371},     {10, 15, 0.93014633930059023231},
              {0.001, 1e-5, 0.98912304469578266885}, {100, 90, 0.1582209891864301681},
              {3.5, 40, 0.99999999999998622498},  {50, 49, 0.46210439360094025889}};
  for (const auto& r : refs) expect_rel(regularized_lower_gamma(r.s, r.x).value(), r.want, 1e-10);
}

TEST(RegularizedGamma, ClosedFormShapeTwo) {
  for (double x = 0.1; x < 30; x += 0.37) {
    expect_rel(regularized_lower_gamma(2.0, x).value(), -std::expm1(-x) - x * std::exp(-x), 1e-10);
  }
}

TEST(RegularizedGamma, MonotoneOnRandomGrids) {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> shape(0.01, 60);
  for (int t = 0; t < 50; ++t) {
    const double s = shape(gen);
    double prev = 0.0;
    for (double x = 0; x < 4 * s + 20; x += (s + 1) / 40) {
      const double p = regularized_lower_gamma(s, x).value();
      EXPECT_GE(p, prev - 1e-15) << "shape " << s << " x " << x;
      prev = p;
    }
    EXPECT_NEAR(prev, 1.0, 1e-6);
  }
}

TEST(RegularizedGamma, RejectsBadShape) {
  EXPECT_THROW(regularized_lower_gamma(0.0, 1.0), DomainError);
  EXPECT_THROW(regularized_lower_gamma(-1.0, 1.0), DomainError);
}

TEST(KsPValue, Oracles) {
  EXPECT_EQ(ks_pvalue(0.0, 100).value(), 1.0);
  const Ref refs[] = {{1.36, 0.04948587675537788364}, {0.5, 0.96394524366487509439},
                      {1.0, 0.2699996716773545212},   {2.0, 0.00067092525577969534654},
                      {0.2, 0.99999999999949495927},  {0.1, 1.0}};
  for (const auto& r : refs) expect_rel(ks_pvalue(r.x / 10.0, 100).value(), r.want, 1e-12);
  EXPECT_LE(ks_pvalue(1.0, 100).value(), 1e-12);
}

TEST(KsPValue, NonincreasingInD) {
  double prev = 1.0;
  for (double d = 0; d < 0.5; d += 0.0011) {
    const double p = ks_pvalue(d, 64).value();
    EXPECT_LE(p, prev + 1e-15);
    prev = p;
  }
}

TEST(Probability, ValidatesRange) {
  EXPECT_NO_THROW(Probability(0.0));
  EXPECT_NO_THROW(Probability(1.0));
  EXPECT_THROW(Probability(1.5), DomainError);
  EXPECT_THROW(Probability(-0.01), DomainError);
  EXPECT_THROW(Probability(std::numeric_limits<double>::quiet_NaN()), DomainError);
}
