#pragma once

/**
 * @file verification.hpp
 * @brief End-to-end check of a sampled series against a Levy-driven CAR(1) model.
 *
 *   1. estimate a (LSB or DMB)
 *   2. (grid chosen by the caller; N <= 50 draws a warning)
 *   3. recover unit increments with the estimate
 *   4. W(1) whiteness test
 *   5. family tests, run only when step 4 does not reject (or when forced)
 */

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "levyou/car1_simulator.hpp"
#include "levyou/distribution_tests.hpp"
#include "levyou/errors.hpp"
#include "levyou/estimators.hpp"
#include "levyou/increment_recovery.hpp"
#include "levyou/rng.hpp"
#include "levyou/whiteness_test.hpp"

namespace levyou {

inline constexpr int kExitAccept = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitRejectWhiteness = 2;
inline constexpr int kExitRejectFamily = 3;

/// Recommended minimum number of unit periods.
inline constexpr std::size_t kMinRecommendedPeriods = 50;

struct FamilyTestRequest {
  Family family = Family::Normal;
  int procedure = 2;  ///< 1 (normal only) or 2

  friend bool operator==(const FamilyTestRequest&, const FamilyTestRequest&) = default;
};

struct VerifyOptions {
  std::string input;  ///< echoed only
  Estimator estimator = Estimator::LSB;
  double alpha = 0.05;
  double sigma = 1.0;
  std::size_t lag = 1;
  std::vector<FamilyTestRequest> families;
  bool force_step5 = false;
  bool ks_on_resample = false;
  std::size_t bootstrap = 1000;
  std::uint64_t seed = 0;
  unsigned threads = 1;

  friend bool operator==(const VerifyOptions&, const VerifyOptions&) = default;
};

struct FamilyTestOutcome {
  FamilyTestRequest request;
  GofResult result;

  friend bool operator==(const FamilyTestOutcome&, const FamilyTestOutcome&) = default;
};

struct VerificationReport {
  VerifyOptions inputs;
  std::size_t n_periods = 0;
  std::size_t per_period = 0;
  std::optional<double> a_hat;
  Estimator method = Estimator::LSB;
  std::optional<WhitenessResult> whiteness;
  bool step5_run = false;
  std::vector<FamilyTestOutcome> family_tests;
  std::vector<std::string> warnings;
  std::optional<std::string> error;
  std::string decision;
  int exit_code = kExitError;

  friend bool operator==(const VerificationReport&, const VerificationReport&) = default;
};

/// Runs the five steps on `path`. Estimator failures (nonpositive path under
/// DMB, constant path) are reported with exit code 1 rather than thrown.
inline VerificationReport run_verification(const Path& path, const VerifyOptions& opts) {
  VerificationReport rep;
  rep.inputs = opts;
  rep.n_periods = path.grid().n_periods;
  rep.per_period = path.grid().per_period;
  rep.method = opts.estimator;
  if (rep.n_periods <= kMinRecommendedPeriods) {
    rep.warnings.push_back("N = " + std::to_string(rep.n_periods) +
                           " <= 50 unit periods; the empirical level of the whiteness test may drift from alpha");
  }
  if (rep.n_periods >= rep.per_period) {
    rep.warnings.push_back("N/M = " + std::to_string(static_cast<double>(rep.n_periods) / rep.per_period) +
                           " is not small; recovered increments may be biased");
  }

  RateEstimate est;
  try {
    est = estimate_rate(path, opts.estimator);
  } catch (const PositivityError& e) {
    rep.error = e.what();
    rep.decision = "error";
    return rep;
  } catch (const DegenerateInputError& e) {
    rep.error = e.what();
    rep.decision = "error";
    return rep;
  }
  rep.a_hat = est.a_hat;
  if (est.warning) rep.warnings.push_back(*est.warning);

  const IncrementSeries incr = recover_increments(path, est.a_hat, opts.sigma);
  try {
    rep.whiteness = w_statistic(incr, opts.lag, opts.alpha);
  } catch (const std::exception& e) {
    rep.error = e.what();
    rep.decision = "error";
    return rep;
  }

  const bool white_reject = rep.whiteness->reject;
  rep.exit_code = white_reject ? kExitRejectWhiteness : kExitAccept;
  rep.decision = white_reject ? "reject: recovered increments are correlated" : "fail to reject: increments uncorrelated";

  if (opts.families.empty() || (white_reject && !opts.force_step5)) return rep;

  rep.step5_run = true;
  Stream stream = derive_stream(Seed{opts.seed}, 0);
  bool family_reject = false;
  for (const auto& req : opts.families) {
    FamilyTestOutcome out{req, {}};
    try {
      if (req.procedure == 1) {
        if (req.family != Family::Normal) throw DomainError("procedure 1 tests the normal family only");
        out.result = procedure1_bm_test(incr.values, stream, {opts.alpha, opts.ks_on_resample});
      } else {
        out.result = procedure2_gof_test(incr.values, req.family, stream, {opts.bootstrap, opts.threads});
      }
    } catch (const std::exception& e) {
      rep.error = std::string(to_string(req.family)) + ": " + e.what();
      rep.decision = "error";
      rep.exit_code = kExitError;
      return rep;
    }
    family_reject = family_reject || out.result.reject;
    rep.family_tests.push_back(out);
  }
  if (!white_reject && family_reject) {
    rep.exit_code = kExitRejectFamily;
    rep.decision = "reject: driving process not in the tested family";
  } else if (!white_reject) {
    rep.decision = "fail to reject: increments uncorrelated and consistent with the tested families";
  }
  return rep;
}

// ---- JSON -------------------------------------------------------------------

inline void to_json(nlohmann::ordered_json& j, const FamilyTestRequest& r) {
  j = nlohmann::ordered_json{{"family", std::string(to_string(r.family))}, {"procedure", r.procedure}};
}

inline void from_json(const nlohmann::ordered_json& j, FamilyTestRequest& r) {
  r.family = parse_family(j.at("family").get<std::string>());
  r.procedure = j.at("procedure").get<int>();
}

inline void to_json(nlohmann::ordered_json& j, const VerifyOptions& o) {
  j = nlohmann::ordered_json{{"input", o.input},
                             {"estimator", std::string(to_string(o.estimator))},
                             {"alpha", o.alpha},
                             {"sigma", o.sigma},
                             {"lag", o.lag},
                             {"families", o.families},
                             {"force_step5", o.force_step5},
                             {"ks_on_resample", o.ks_on_resample},
                             {"bootstrap", o.bootstrap},
                             {"seed", o.seed},
                             {"threads", o.threads}};
}

inline void from_json(const nlohmann::ordered_json& j, VerifyOptions& o) {
  o.input = j.at("input").get<std::string>();
  o.estimator = parse_estimator(j.at("estimator").get<std::string>());
  o.alpha = j.at("alpha").get<double>();
  o.sigma = j.at("sigma").get<double>();
  o.lag = j.at("lag").get<std::size_t>();
  o.families = j.at("families").get<std::vector<FamilyTestRequest>>();
  o.force_step5 = j.at("force_step5").get<bool>();
  o.ks_on_resample = j.at("ks_on_resample").get<bool>();
  o.bootstrap = j.at("bootstrap").get<std::size_t>();
  o.seed = j.at("seed").get<std::uint64_t>();
  o.threads = j.at("threads").get<unsigned>();
}

inline void to_json(nlohmann::ordered_json& j, const WhitenessResult& w) {
  j = nlohmann::ordered_json{{"w_stat", w.w_stat}, {"lag", w.lag},           {"n", w.n},
                             {"mean", w.mean},     {"eta2_hat", w.eta2_hat}, {"gamma_hat", w.gamma_hat},
                             {"alpha", w.alpha},   {"critical", w.critical}, {"reject", w.reject}};
}

inline void from_json(const nlohmann::ordered_json& j, WhitenessResult& w) {
  w.w_stat = j.at("w_stat").get<double>();
  w.lag = j.at("lag").get<std::size_t>();
  w.n = j.at("n").get<std::size_t>();
  w.mean = j.at("mean").get<double>();
  w.eta2_hat = j.at("eta2_hat").get<double>();
  w.gamma_hat = j.at("gamma_hat").get<double>();
  w.alpha = j.at("alpha").get<double>();
  w.critical = j.at("critical").get<double>();
  w.reject = j.at("reject").get<bool>();
}

inline void to_json(nlohmann::ordered_json& j, const GofResult& g) {
  j = nlohmann::ordered_json{{"statistic", g.statistic}};
  j["p_value"] = g.p_value ? nlohmann::ordered_json(*g.p_value) : nlohmann::ordered_json(nullptr);
  j["critical_95"] = g.critical_95 ? nlohmann::ordered_json(*g.critical_95) : nlohmann::ordered_json(nullptr);
  j["reject"] = g.reject;
  j["bootstrap_count"] = g.bootstrap_count;
}

inline void from_json(const nlohmann::ordered_json& j, GofResult& g) {
  g.statistic = j.at("statistic").get<double>();
  g.p_value = j.at("p_value").is_null() ? std::nullopt : std::optional<double>(j.at("p_value").get<double>());
  g.critical_95 =
      j.at("critical_95").is_null() ? std::nullopt : std::optional<double>(j.at("critical_95").get<double>());
  g.reject = j.at("reject").get<bool>();
  g.bootstrap_count = j.at("bootstrap_count").get<std::size_t>();
}

inline void to_json(nlohmann::ordered_json& j, const FamilyTestOutcome& f) {
  j = nlohmann::ordered_json{{"request", f.request}, {"result", f.result}};
}

inline void from_json(const nlohmann::ordered_json& j, FamilyTestOutcome& f) {
  f.request = j.at("request").get<FamilyTestRequest>();
  f.result = j.at("result").get<GofResult>();
}

inline nlohmann::ordered_json to_json(const VerificationReport& r) {
  nlohmann::ordered_json j;
  j["inputs"] = r.inputs;
  j["n_periods"] = r.n_periods;
  j["per_period"] = r.per_period;
  j["estimator"] = std::string(to_string(r.method));
  j["a_hat"] = r.a_hat ? nlohmann::ordered_json(*r.a_hat) : nlohmann::ordered_json(nullptr);
  j["whiteness"] = r.whiteness ? nlohmann::ordered_json(*r.whiteness) : nlohmann::ordered_json(nullptr);
  j["step5_run"] = r.step5_run;
  j["family_tests"] = r.family_tests;
  j["warnings"] = r.warnings;
  j["error"] = r.error ? nlohmann::ordered_json(*r.error) : nlohmann::ordered_json(nullptr);
  j["decision"] = r.decision;
  j["exit_code"] = r.exit_code;
  return j;
}

inline VerificationReport report_from_json(const nlohmann::ordered_json& j) {
  VerificationReport r;
  r.inputs = j.at("inputs").get<VerifyOptions>();
  r.n_periods = j.at("n_periods").get<std::size_t>();
  r.per_period = j.at("per_period").get<std::size_t>();
  r.method = parse_estimator(j.at("estimator").get<std::string>());
  if (!j.at("a_hat").is_null()) r.a_hat = j.at("a_hat").get<double>();
  if (!j.at("whiteness").is_null()) r.whiteness = j.at("whiteness").get<WhitenessResult>();
  r.step5_run = j.at("step5_run").get<bool>();
  r.family_tests = j.at("family_tests").get<std::vector<FamilyTestOutcome>>();
  r.warnings = j.at("warnings").get<std::vector<std::string>>();
  if (!j.at("error").is_null()) r.error = j.at("error").get<std::string>();
  r.decision = j.at("decision").get<std::string>();
  r.exit_code = j.at("exit_code").get<int>();
  return r;
}

inline std::string serialize(const VerificationReport& r) { return to_json(r).dump(2); }

inline VerificationReport parse_report(const std::string& text) {
  return report_from_json(nlohmann::ordered_json::parse(text));
}

}  // namespace levyou
