#pragma once

/**
 * @file montecarlo.hpp
 * @brief Empirical level / power experiments: simulate, estimate, recover, test, repeat.
 *
 * Replication r always uses derive_stream(cfg.seed, r) and results are reduced
 * in index order, so a run is bit-reproducible at any thread count.
 */

#include <cctype>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <iomanip>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "levyou/car1_simulator.hpp"
#include "levyou/distribution_tests.hpp"
#include "levyou/errors.hpp"
#include "levyou/estimators.hpp"
#include "levyou/increment_recovery.hpp"
#include "levyou/levy_generators.hpp"
#include "levyou/parallel.hpp"
#include "levyou/rng.hpp"
#include "levyou/whiteness_test.hpp"

namespace levyou {

enum class TestKind { WLag1, Procedure1, Procedure2 };

inline std::string_view to_string(TestKind t) {
  switch (t) {
    case TestKind::WLag1: return "w";
    case TestKind::Procedure1: return "p1";
    case TestKind::Procedure2: return "p2";
  }
  return "?";
}

inline TestKind parse_test_kind(std::string_view s) {
  if (s == "w" || s == "w1") return TestKind::WLag1;
  if (s == "p1" || s == "1") return TestKind::Procedure1;
  if (s == "p2" || s == "2") return TestKind::Procedure2;
  throw DomainError("unknown test '" + std::string(s) + "' (expected w|p1|p2)");
}

struct ExperimentConfig {
  std::string label;
  DrivingKind kind = DrivingKind::Gamma;
  LevyParams levy{1.0, 1.0};
  double a = 1.0;
  double sigma = 1.0;
  SamplingGrid grid{100, 100};
  std::size_t replications = 400;
  double alpha = 0.05;
  Estimator estimator = Estimator::DMB;
  TestKind test = TestKind::WLag1;
  Family family = Family::Normal;  ///< Procedure 2 only
  Seed seed{20240601};
  std::size_t substeps = 10;
  bool exact_bm = true;
  double mix_weight = 0.5;
  std::size_t bootstrap = 1000;  ///< Procedure 2 only
  bool ks_on_resample = false;   ///< Procedure 1 only
};

inline void validate(const ExperimentConfig& cfg) {
  validate(Car1Params{cfg.a, cfg.sigma});
  validate(cfg.grid);
  if (cfg.replications < 1) throw DomainError("experiment: replications must be at least 1");
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) throw DomainError("experiment: alpha must lie in (0,1)");
  if (cfg.estimator == Estimator::DMB && !is_subordinator(cfg.kind)) {
    throw DomainError("experiment: DMB estimator requires a subordinator driver (gamma|ig|mixed)");
  }
  if (cfg.substeps < 1) throw DomainError("experiment: substeps must be at least 1");
  if (cfg.grid.n_periods < 2) throw DomainError("experiment: need N >= 2 increments to test");
}

struct RateResult {
  double rejection_rate = 0.0;
  std::size_t replications = 0;  ///< valid replications (the denominator)
  std::size_t rejections = 0;
  std::size_t invalid = 0;    ///< degenerate estimator/fit, excluded
  std::size_t fallbacks = 0;  ///< DMB replaced by LSB on a nonpositive path
  double standard_error = 0.0;

  friend bool operator==(const RateResult&, const RateResult&) = default;
};

enum class ReplicateOutcome : std::uint8_t { Accept, Reject, Invalid };

struct ReplicateRecord {
  ReplicateOutcome outcome = ReplicateOutcome::Invalid;
  bool fallback = false;
  double a_hat = 0.0;
  double statistic = 0.0;
};

/// One replication of the full pipeline.
inline ReplicateRecord run_replicate(const ExperimentConfig& cfg, std::size_t r) {
  Stream stream = derive_stream(cfg.seed, r);
  SimulationOptions sim;
  sim.substeps = cfg.substeps;
  sim.exact_bm = cfg.exact_bm;
  sim.mix_weight = cfg.mix_weight;
  const Path path = simulate_path({cfg.a, cfg.sigma}, cfg.kind, cfg.levy, cfg.grid, sim, stream);

  ReplicateRecord rec;
  try {
    RateEstimate est;
    try {
      est = estimate_rate(path, cfg.estimator);
    } catch (const PositivityError&) {
      est = lsb_estimate(path);
      rec.fallback = true;
    }
    rec.a_hat = est.a_hat;
    const IncrementSeries incr = recover_increments(path, est.a_hat, cfg.sigma);
    bool reject = false;
    switch (cfg.test) {
      case TestKind::WLag1: {
        const auto w = w_statistic(incr, 1, cfg.alpha);
        rec.statistic = w.w_stat;
        reject = w.reject;
        break;
      }
      case TestKind::Procedure1: {
        const auto g = procedure1_bm_test(incr.values, stream, {cfg.alpha, cfg.ks_on_resample});
        rec.statistic = g.statistic;
        reject = g.reject;
        break;
      }
      case TestKind::Procedure2: {
        const auto g = procedure2_gof_test(incr.values, cfg.family, stream, {cfg.bootstrap, 1});
        rec.statistic = g.statistic;
        reject = g.reject;
        break;
      }
    }
    rec.outcome = reject ? ReplicateOutcome::Reject : ReplicateOutcome::Accept;
  } catch (const DegenerateInputError&) {
    rec.outcome = ReplicateOutcome::Invalid;
  } catch (const FitError&) {
    rec.outcome = ReplicateOutcome::Invalid;
  }
  return rec;
}

inline std::vector<ReplicateRecord> run_replicates(const ExperimentConfig& cfg, unsigned threads) {
  validate(cfg);
  std::vector<ReplicateRecord> records(cfg.replications);
  parallel_for(cfg.replications, threads, [&](std::size_t r) { records[r] = run_replicate(cfg, r); });
  return records;
}

inline RateResult summarize(const std::vector<ReplicateRecord>& records) {
  RateResult res;
  for (const auto& rec : records) {
    if (rec.fallback) ++res.fallbacks;
    switch (rec.outcome) {
      case ReplicateOutcome::Invalid: ++res.invalid; break;
      case ReplicateOutcome::Reject: ++res.rejections; ++res.replications; break;
      case ReplicateOutcome::Accept: ++res.replications; break;
    }
  }
  if (res.replications > 0) {
    const double r = static_cast<double>(res.replications);
    res.rejection_rate = static_cast<double>(res.rejections) / r;
    res.standard_error = std::sqrt(res.rejection_rate * (1.0 - res.rejection_rate) / r);
  }
  return res;
}

/// Empirical level: the test's null matches the driver.
inline RateResult run_level(const ExperimentConfig& cfg, unsigned threads = 0) {
  return summarize(run_replicates(cfg, threads));
}

/// Empirical power: same computation; the configured test targets a family
/// other than the driver's.
inline RateResult run_power(const ExperimentConfig& cfg, unsigned threads = 0) {
  return summarize(run_replicates(cfg, threads));
}

struct TableRow {
  ExperimentConfig config;
  std::optional<RateResult> result;
  std::string error;  ///< set when the cell could not run
};

inline std::vector<TableRow> run_table(const std::vector<ExperimentConfig>& spec, unsigned threads = 0) {
  std::vector<TableRow> rows;
  rows.reserve(spec.size());
  for (const auto& cfg : spec) {
    TableRow row{cfg, std::nullopt, {}};
    try {
      row.result = run_level(cfg, threads);
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

/// Per-replication rate estimates, for estimator accuracy studies. DMB is
/// empty when the path is not strictly positive.
struct EstimatePair {
  double lsb;
  std::optional<double> dmb;
};

inline std::vector<EstimatePair> collect_estimates(const ExperimentConfig& cfg, unsigned threads = 0) {
  validate(Car1Params{cfg.a, cfg.sigma});
  validate(cfg.grid);
  std::vector<EstimatePair> out(cfg.replications);
  parallel_for(cfg.replications, threads, [&](std::size_t r) {
    Stream stream = derive_stream(cfg.seed, r);
    const Path path = simulate_path({cfg.a, cfg.sigma}, cfg.kind, cfg.levy, cfg.grid,
                                    {cfg.substeps, cfg.exact_bm, cfg.mix_weight}, stream);
    out[r].lsb = lsb_estimate(path).a_hat;
    try {
      out[r].dmb = dmb_estimate(path).a_hat;
    } catch (const PositivityError&) {
    }
  });
  return out;
}

namespace detail {

inline bool parse_bool(std::string_view v) {
  if (v == "1" || v == "true" || v == "yes") return true;
  if (v == "0" || v == "false" || v == "no") return false;
  throw DomainError("expected a boolean, got '" + std::string(v) + "'");
}

inline double parse_double(std::string_view v) {
  std::size_t used = 0;
  const std::string s(v);
  double d = 0.0;
  try {
    d = std::stod(s, &used);
  } catch (const std::exception&) {
    throw DomainError("expected a number, got '" + s + "'");
  }
  if (used != s.size()) throw DomainError("expected a number, got '" + s + "'");
  return d;
}

inline std::uint64_t parse_uint(std::string_view v) {
  const std::string s(v);
  std::size_t used = 0;
  unsigned long long u = 0;
  try {
    if (!s.empty() && s[0] == '-') throw std::invalid_argument("negative");
    u = std::stoull(s, &used, 10);
  } catch (const std::exception&) {
    throw DomainError("expected a nonnegative integer, got '" + s + "'");
  }
  if (used != s.size()) throw DomainError("expected a nonnegative integer, got '" + s + "'");
  return u;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace detail

/// Applies one key=value setting. Keys: label driver mu eta2 a sigma n m reps
/// alpha estimator test family seed substeps exact_bm mix_weight bootstrap
/// ks_on_resample.
inline void apply_setting(ExperimentConfig& cfg, std::string_view key, std::string_view value) {
  using namespace detail;
  if (key == "label") cfg.label = std::string(value);
  else if (key == "driver" || key == "kind") cfg.kind = parse_driving_kind(value);
  else if (key == "mu") cfg.levy.mu = parse_double(value);
  else if (key == "eta2") cfg.levy.eta2 = parse_double(value);
  else if (key == "a") cfg.a = parse_double(value);
  else if (key == "sigma") cfg.sigma = parse_double(value);
  else if (key == "n") cfg.grid.n_periods = parse_uint(value);
  else if (key == "m") cfg.grid.per_period = parse_uint(value);
  else if (key == "reps" || key == "r") cfg.replications = parse_uint(value);
  else if (key == "alpha") cfg.alpha = parse_double(value);
  else if (key == "estimator") cfg.estimator = parse_estimator(value);
  else if (key == "test") cfg.test = parse_test_kind(value);
  else if (key == "family") cfg.family = parse_family(value);
  else if (key == "seed") cfg.seed = Seed{parse_uint(value)};
  else if (key == "substeps") cfg.substeps = parse_uint(value);
  else if (key == "exact_bm") cfg.exact_bm = parse_bool(value);
  else if (key == "mix_weight") cfg.mix_weight = parse_double(value);
  else if (key == "bootstrap") cfg.bootstrap = parse_uint(value);
  else if (key == "ks_on_resample") cfg.ks_on_resample = parse_bool(value);
  else throw DomainError("unknown experiment key '" + std::string(key) + "'");
}

/// One experiment per line as whitespace-separated key=value pairs; '#'
/// starts a comment. Unset keys take values from `defaults`.
inline std::vector<ExperimentConfig> parse_table_spec(std::istream& in, const ExperimentConfig& defaults = {}) {
  std::vector<ExperimentConfig> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view(line);
    if (auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = detail::trim(view);
    if (view.empty()) continue;
    ExperimentConfig cfg = defaults;
    std::istringstream tokens{std::string(view)};
    std::string tok;
    while (tokens >> tok) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos) {
        throw DomainError("line " + std::to_string(lineno) + ": expected key=value, got '" + tok + "'");
      }
      try {
        apply_setting(cfg, tok.substr(0, eq), tok.substr(eq + 1));
      } catch (const DomainError& e) {
        throw DomainError("line " + std::to_string(lineno) + ": " + e.what());
      }
    }
    out.push_back(std::move(cfg));
  }
  return out;
}

inline constexpr std::string_view kTableCsvHeader =
    "label,driver,mu,eta2,a,sigma,n,m,reps,alpha,estimator,test,family,seed,rejections,valid,invalid,fallbacks,"
    "rate,se,error";

inline void write_table_csv(std::ostream& os, const std::vector<TableRow>& rows) {
  os << kTableCsvHeader << '\n';
  for (const auto& row : rows) {
    const auto& c = row.config;
    os << c.label << ',' << to_string(c.kind) << ',' << c.levy.mu << ',' << c.levy.eta2 << ',' << c.a << ','
       << c.sigma << ',' << c.grid.n_periods << ',' << c.grid.per_period << ',' << c.replications << ','
       << c.alpha << ',' << to_string(c.estimator) << ',' << to_string(c.test) << ','
       << (c.test == TestKind::Procedure2 ? to_string(c.family) : std::string_view("")) << ',' << c.seed.master
       << ',';
    if (row.result) {
      const auto& r = *row.result;
      os << r.rejections << ',' << r.replications << ',' << r.invalid << ',' << r.fallbacks << ',' << std::fixed
         << std::setprecision(4) << r.rejection_rate << ',' << r.standard_error << std::defaultfloat << ",";
    } else {
      os << ",,,,,,\"" << row.error << '"';
    }
    os << '\n';
  }
}

inline void write_table_text(std::ostream& os, const std::vector<TableRow>& rows) {
  os << std::left << std::setw(12) << "label" << std::setw(7) << "driver" << std::right << std::setw(7) << "a"
     << std::setw(6) << "N" << std::setw(6) << "M" << std::setw(6) << "R" << std::setw(5) << "est" << std::setw(5)
     << "test" << std::setw(8) << "family" << std::setw(10) << "rate" << std::setw(10) << "se" << std::setw(9)
     << "invalid" << '\n';
  for (const auto& row : rows) {
    const auto& c = row.config;
    os << std::left << std::setw(12) << c.label << std::setw(7) << to_string(c.kind) << std::right << std::setw(7)
       << c.a << std::setw(6) << c.grid.n_periods << std::setw(6) << c.grid.per_period << std::setw(6)
       << c.replications << std::setw(5) << to_string(c.estimator) << std::setw(5) << to_string(c.test)
       << std::setw(8) << (c.test == TestKind::Procedure2 ? to_string(c.family) : std::string_view("-"));
    if (row.result) {
      os << std::fixed << std::setprecision(4) << std::setw(10) << row.result->rejection_rate << std::setw(10)
         << row.result->standard_error << std::defaultfloat << std::setw(9) << row.result->invalid;
    } else {
      os << "  error: " << row.error;
    }
    os << '\n';
  }
}

}  // namespace levyou
