#include <gtest/gtest.h>

#include <fstream>

#include "levyou/io.hpp"
#include "levyou/verification.hpp"

using namespace levyou;

namespace {

Path bm_path(double a, std::uint64_t seed) {
  Stream s = derive_stream(Seed{seed}, 0);
  return simulate_path({a, 1}, DrivingKind::BrownianMotion, {1, 1}, {100, 100}, {10, true, 0.5}, s);
}

Path fixture_path() {
  return read_path_file(LEVYOU_FIXTURE_DIR "/correlated_path.csv").path;
}

}  // namespace

TEST(Verify, BrownianPathsMostlyAccepted) {
  int accepted = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto rep = run_verification(bm_path(5.0, seed), {});
    accepted += rep.exit_code == kExitAccept;
  }
  EXPECT_GE(accepted, 34);
}

TEST(Verify, CorrelatedFixtureRejectsWhiteness) {
  VerifyOptions opts;
  opts.families = {{Family::Normal, 2}};
  const auto rep = run_verification(fixture_path(), opts);
  ASSERT_TRUE(rep.whiteness);
  EXPECT_TRUE(rep.whiteness->reject);
  EXPECT_GT(rep.whiteness->w_stat, 3.0);
  EXPECT_EQ(rep.exit_code, kExitRejectWhiteness);
  EXPECT_FALSE(rep.step5_run);
  EXPECT_TRUE(rep.family_tests.empty());
}

TEST(Verify, ForceStep5RunsFamilyTests) {
  VerifyOptions opts;
  opts.families = {{Family::Normal, 1}};
  opts.force_step5 = true;
  const auto rep = run_verification(fixture_path(), opts);
  EXPECT_TRUE(rep.step5_run);
  EXPECT_EQ(rep.family_tests.size(), 1u);
  EXPECT_EQ(rep.exit_code, kExitRejectWhiteness);
}

TEST(Verify, FamilyRejectionGivesExitThree) {
  Stream s = derive_stream(Seed{3}, 0);
  const auto p = simulate_path({0.9, 1}, DrivingKind::Gamma, {1, 1}, {100, 100}, {}, s);
  VerifyOptions opts;
  opts.estimator = Estimator::DMB;
  opts.families = {{Family::Normal, 2}};
  opts.bootstrap = 200;
  const auto rep = run_verification(p, opts);
  ASSERT_FALSE(rep.whiteness->reject);
  EXPECT_TRUE(rep.step5_run);
  EXPECT_EQ(rep.exit_code, kExitRejectFamily);
}

TEST(Verify, DmbOnNonPositivePathIsAnError) {
  VerifyOptions opts;
  opts.estimator = Estimator::DMB;
  const auto rep = run_verification(bm_path(0.9, 1), opts);  // mean 1.1, sd 0.75: dips below zero
  EXPECT_EQ(rep.exit_code, kExitError);
  ASSERT_TRUE(rep.error);
  EXPECT_NE(rep.error->find("LSB"), std::string::npos);
  EXPECT_FALSE(rep.a_hat);
}

TEST(Verify, ShortSeriesWarnings) {
  const auto rep = run_verification(Path({10, 5}, [] {
    std::vector<double> v(51);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::sin(0.7 * i) + 0.1 * i;
    return v;
  }()), {});
  EXPECT_EQ(rep.warnings.size(), 2u);
}

TEST(Report, JsonRoundTrip) {
  VerifyOptions opts;
  opts.input = "some/file.csv";
  opts.families = {{Family::Normal, 1}, {Family::Gamma, 2}};
  opts.force_step5 = true;
  opts.bootstrap = 100;
  opts.seed = 18446744073709551615ull;
  Stream s = derive_stream(Seed{5}, 0);
  const auto p = simulate_path({0.9, 1}, DrivingKind::Gamma, {1, 1}, {60, 50}, {}, s);
  const auto rep = run_verification(p, opts);
  ASSERT_EQ(rep.family_tests.size(), 2u);
  const auto text = serialize(rep);
  EXPECT_EQ(parse_report(text), rep);
  EXPECT_EQ(serialize(parse_report(text)), text);
  // stable key order
  EXPECT_LT(text.find("\"inputs\""), text.find("\"n_periods\""));
  EXPECT_LT(text.find("\"whiteness\""), text.find("\"decision\""));
}

TEST(Report, ErrorReportRoundTrip) {
  VerificationReport rep;
  rep.error = "boom";
  rep.decision = "error";
  EXPECT_EQ(parse_report(serialize(rep)), rep);
}
