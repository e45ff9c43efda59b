// levyou: command-line front end for simulation, estimation, verification,
// Monte Carlo studies and the price-data pipeline.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#ifdef LEVYOU_SYSTEM_CLI11
#include <CLI/CLI.hpp>
#else
#include "CLI11.hpp"
#endif
#include "levyou/levyou.hpp"

namespace fs = std::filesystem;
using namespace levyou;

namespace {

struct GlobalOptions {
  std::uint64_t seed = 1;
  unsigned threads = 0;
  std::string out = ".";
};

fs::path out_file(const GlobalOptions& g, const std::string& name) {
  fs::create_directories(g.out);
  return fs::path(g.out) / name;
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream os(p);
  if (!os) throw DataError("cannot write '" + p.string() + "'");
  return os;
}

Timestamp parse_interval(const std::string& s) {
  if (s.empty()) throw DomainError("empty interval");
  std::size_t used = 0;
  const long long v = std::stoll(s, &used);
  const std::string unit = s.substr(used);
  if (v <= 0) throw DomainError("interval must be positive");
  if (unit == "s" || unit.empty()) return v;
  if (unit == "m" || unit == "min") return v * 60;
  if (unit == "h") return v * 3600;
  throw DomainError("unknown interval unit '" + unit + "' (use s, m or h)");
}

void print_text_report(std::ostream& os, const VerificationReport& r) {
  os << "input:      " << r.inputs.input << "\n";
  os << "grid:       N=" << r.n_periods << " M=" << r.per_period << "\n";
  if (r.a_hat) os << "a_hat:      " << *r.a_hat << " (" << to_string(r.method) << ")\n";
  if (r.whiteness) {
    const auto& w = *r.whiteness;
    os << "increments: n=" << w.n << " mean=" << w.mean << " eta2_hat=" << w.eta2_hat << "\n";
    os << "W(" << w.lag << "):       " << w.w_stat << "  critical=" << w.critical << "  "
       << (w.reject ? "REJECT" : "fail to reject") << "\n";
  }
  for (const auto& f : r.family_tests) {
    os << "family " << to_string(f.request.family) << " (procedure " << f.request.procedure
       << "): statistic=" << f.result.statistic;
    if (f.result.p_value) os << " p=" << *f.result.p_value;
    if (f.result.critical_95) os << " critical_95=" << *f.result.critical_95;
    os << "  " << (f.result.reject ? "REJECT" : "fail to reject") << "\n";
  }
  for (const auto& w : r.warnings) os << "warning:    " << w << "\n";
  if (r.error) os << "error:      " << *r.error << "\n";
  os << "decision:   " << r.decision << " (exit " << r.exit_code << ")\n";
}

void add_experiment_flags(CLI::App* cmd, ExperimentConfig& cfg, std::string& driver, std::string& estimator,
                          std::string& test, std::string& family) {
  cmd->add_option("--driver", driver, "Driving process: bm|gamma|ig|mixed")->capture_default_str();
  cmd->add_option("--mu", cfg.levy.mu, "Unit-time mean of the driver")->capture_default_str();
  cmd->add_option("--eta2", cfg.levy.eta2, "Unit-time variance of the driver")->capture_default_str();
  cmd->add_option("--a", cfg.a, "Mean-reversion rate")->capture_default_str();
  cmd->add_option("--sigma", cfg.sigma, "Noise scale")->capture_default_str();
  cmd->add_option("--n", cfg.grid.n_periods, "Number of unit periods N")->capture_default_str();
  cmd->add_option("--m", cfg.grid.per_period, "Samples per unit period M")->capture_default_str();
  cmd->add_option("--reps", cfg.replications, "Replications R")->capture_default_str();
  cmd->add_option("--alpha", cfg.alpha, "Significance level")->capture_default_str();
  cmd->add_option("--estimator", estimator, "Rate estimator: lsb|dmb")->capture_default_str();
  cmd->add_option("--test", test, "Test: w (whiteness), p1 (procedure 1), p2 (procedure 2)")->capture_default_str();
  cmd->add_option("--family", family, "Procedure 2 family: normal|gamma|ig")->capture_default_str();
  cmd->add_option("--substeps", cfg.substeps, "Fine simulation steps per grid step K")->capture_default_str();
  cmd->add_option("--exact-bm", cfg.exact_bm, "Exact transitions for Brownian drivers")->capture_default_str();
  cmd->add_option("--mix-weight", cfg.mix_weight, "Gamma share of the mixed driver")->capture_default_str();
  cmd->add_option("--bootstrap", cfg.bootstrap, "Procedure 2 bootstrap samples")->capture_default_str();
  cmd->add_flag("--ks-on-resample", cfg.ks_on_resample, "Procedure 1: KS-test the bootstrap resample itself");
  cmd->add_option("--label", cfg.label, "Label for the output row");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"levyou: verify that a sampled series is a Levy-driven Ornstein-Uhlenbeck (CAR(1)) process"};
  app.require_subcommand(1);
  GlobalOptions g;
  app.add_option("--seed", g.seed, "Master random seed (decimal 64-bit)")->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads (0 = all cores)")->capture_default_str();
  app.add_option("--out", g.out, "Output directory")->capture_default_str();

  // simulate
  auto* sim = app.add_subcommand("simulate", "Simulate a stationary CAR(1) path and write it as t,y CSV");
  std::string sim_driver = "gamma";
  Car1Params sim_car{1.0, 1.0};
  LevyParams sim_levy{1.0, 1.0};
  SamplingGrid sim_grid{100, 100};
  SimulationOptions sim_opts;
  std::string sim_output = "path.csv";
  sim->add_option("--driver", sim_driver, "Driving process: bm|gamma|ig|mixed")->capture_default_str();
  sim->add_option("--mu", sim_levy.mu, "Unit-time mean of the driver")->capture_default_str();
  sim->add_option("--eta2", sim_levy.eta2, "Unit-time variance of the driver")->capture_default_str();
  sim->add_option("--a", sim_car.a, "Mean-reversion rate")->capture_default_str();
  sim->add_option("--sigma", sim_car.sigma, "Noise scale")->capture_default_str();
  sim->add_option("--n", sim_grid.n_periods, "Number of unit periods N")->capture_default_str();
  sim->add_option("--m", sim_grid.per_period, "Samples per unit period M")->capture_default_str();
  sim->add_option("--substeps", sim_opts.substeps, "Fine steps per grid step K")->capture_default_str();
  sim->add_flag("--exact", sim_opts.exact_bm, "Exact Gaussian transitions (Brownian driver only)");
  sim->add_option("--mix-weight", sim_opts.mix_weight, "Gamma share of the mixed driver")->capture_default_str();
  sim->add_option("--output", sim_output, "File name inside --out")->capture_default_str();

  // estimate
  auto* est = app.add_subcommand("estimate", "Estimate the mean-reversion rate of a path CSV");
  std::string est_input;
  std::string est_method = "lsb";
  std::optional<std::size_t> est_m;
  est->add_option("--input", est_input, "Path CSV (t,y)")->required();
  est->add_option("--method", est_method, "lsb|dmb")->capture_default_str();
  est->add_option("--m", est_m, "Samples per unit period (default: inferred from t)");

  // recover
  auto* rec = app.add_subcommand("recover", "Recover unit driving increments and write n,dl CSV");
  std::string rec_input;
  std::string rec_method = "lsb";
  std::optional<double> rec_a;
  double rec_sigma = 1.0;
  std::optional<std::size_t> rec_m;
  std::string rec_output = "increments.csv";
  rec->add_option("--input", rec_input, "Path CSV (t,y)")->required();
  rec->add_option("--a", rec_a, "Rate to use (default: estimate with --method)");
  rec->add_option("--method", rec_method, "lsb|dmb")->capture_default_str();
  rec->add_option("--sigma", rec_sigma, "Noise scale")->capture_default_str();
  rec->add_option("--m", rec_m, "Samples per unit period (default: inferred from t)");
  rec->add_option("--output", rec_output, "File name inside --out")->capture_default_str();

  // verify
  auto* ver = app.add_subcommand("verify", "Run the full verification (estimate, recover, W test, family tests)");
  VerifyOptions vopts;
  std::string ver_method = "lsb";
  std::optional<std::size_t> ver_m;
  std::vector<std::string> ver_families;
  int ver_procedure = 2;
  ver->add_option("--input", vopts.input, "Path CSV (t,y)")->required();
  ver->add_option("--method", ver_method, "Rate estimator: lsb|dmb")->capture_default_str();
  ver->add_option("--alpha", vopts.alpha, "Significance level")->capture_default_str();
  ver->add_option("--sigma", vopts.sigma, "Noise scale")->capture_default_str();
  ver->add_option("--lag", vopts.lag, "Autocovariance lag of the W statistic")->capture_default_str();
  ver->add_option("--m", ver_m, "Samples per unit period (default: inferred from t)");
  ver->add_option("--family", ver_families, "Family tests after a non-rejection: normal|gamma|ig (repeatable)");
  ver->add_option("--procedure", ver_procedure, "Procedure for the normal family: 1|2")->capture_default_str();
  ver->add_option("--bootstrap", vopts.bootstrap, "Procedure 2 bootstrap samples")->capture_default_str();
  ver->add_flag("--force-step5", vopts.force_step5, "Run family tests even when W rejects");
  ver->add_flag("--ks-on-resample", vopts.ks_on_resample, "Procedure 1: KS-test the bootstrap resample itself");

  // disttest
  auto* dt = app.add_subcommand("disttest", "Test recovered increments (n,dl CSV) against a family");
  std::string dt_input;
  std::string dt_family = "normal";
  int dt_procedure = 2;
  std::size_t dt_bootstrap = 1000;
  double dt_alpha = 0.05;
  bool dt_resample = false;
  dt->add_option("--input", dt_input, "Increments CSV (n,dl)")->required();
  dt->add_option("--family", dt_family, "normal|gamma|ig")->capture_default_str();
  dt->add_option("--procedure", dt_procedure, "1 (normal only) or 2")->capture_default_str();
  dt->add_option("--bootstrap", dt_bootstrap, "Procedure 2 bootstrap samples")->capture_default_str();
  dt->add_option("--alpha", dt_alpha, "Procedure 1 significance level")->capture_default_str();
  dt->add_flag("--ks-on-resample", dt_resample, "Procedure 1: KS-test the bootstrap resample itself");

  // mc-level / mc-power
  ExperimentConfig mc_cfg;
  std::string mc_driver = "gamma", mc_estimator = "dmb", mc_test = "w", mc_family = "normal";
  std::string mc_config;
  std::string mc_output;
  auto* mcl = app.add_subcommand("mc-level", "Monte Carlo empirical level of a test");
  auto* mcp = app.add_subcommand("mc-power", "Monte Carlo empirical power of a test");
  for (auto* cmd : {mcl, mcp}) {
    add_experiment_flags(cmd, mc_cfg, mc_driver, mc_estimator, mc_test, mc_family);
    cmd->add_option("--config", mc_config, "Table spec: one experiment per line, key=value pairs");
    cmd->add_option("--output", mc_output, "CSV file name inside --out (default <subcommand>.csv)");
  }

  // spread
  auto* spr = app.add_subcommand("spread", "Log-price spread of two stocks");
  std::string spr_a, spr_b, spr_column = "close", spr_output = "spread.csv";
  std::optional<std::size_t> spr_n, spr_m;
  spr->add_option("--a", spr_a, "Price CSV of stock A")->required();
  spr->add_option("--b", spr_b, "Price CSV of stock B")->required();
  spr->add_option("--column", spr_column, "Price column")->capture_default_str();
  spr->add_option("--n", spr_n, "Map onto a grid with N unit periods (requires --m)");
  spr->add_option("--m", spr_m, "Samples per unit period for the grid mapping");
  spr->add_option("--output", spr_output, "File name inside --out")->capture_default_str();

  // rv
  auto* rv = app.add_subcommand("rv", "Daily realized volatility from intraday prices");
  std::string rv_file, rv_interval = "5m", rv_column = "close", rv_output = "rv.csv";
  std::optional<std::size_t> rv_n, rv_m;
  rv->add_option("--file", rv_file, "Intraday price CSV")->required();
  rv->add_option("--interval", rv_interval, "Return interval (e.g. 5m, 300s, 1h)")->capture_default_str();
  rv->add_option("--column", rv_column, "Price column")->capture_default_str();
  rv->add_option("--n", rv_n, "Unit periods for the grid mapping (default: as many as fit)");
  rv->add_option("--m", rv_m, "Samples per unit period; enables the grid mapping");
  rv->add_option("--output", rv_output, "File name inside --out")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sim) {
      Stream stream = derive_stream(Seed{g.seed}, 0);
      const Path p = simulate_path(sim_car, parse_driving_kind(sim_driver), sim_levy, sim_grid, sim_opts, stream);
      const auto file = out_file(g, sim_output);
      auto os = open_out(file);
      write_path_csv(os, p);
      std::cout << "wrote " << p.size() << " points to " << file.string() << "\n";
      return 0;
    }
    if (*est) {
      const auto loaded = read_path_file(est_input, est_m);
      for (const auto& w : loaded.warnings) std::cerr << "warning: " << w << "\n";
      const RateEstimate e = estimate_rate(loaded.path, parse_estimator(est_method));
      if (e.warning) std::cerr << "warning: " << *e.warning << "\n";
      std::cout.precision(17);
      std::cout << e.a_hat << "\n";
      return 0;
    }
    if (*rec) {
      const auto loaded = read_path_file(rec_input, rec_m);
      for (const auto& w : loaded.warnings) std::cerr << "warning: " << w << "\n";
      const double a = rec_a ? *rec_a : estimate_rate(loaded.path, parse_estimator(rec_method)).a_hat;
      const IncrementSeries incr = recover_increments(loaded.path, a, rec_sigma);
      const auto file = out_file(g, rec_output);
      auto os = open_out(file);
      write_increments_csv(os, incr.values);
      std::cout << "a=" << a << "; wrote " << incr.values.size() << " increments to " << file.string() << "\n";
      return 0;
    }
    if (*ver) {
      vopts.estimator = parse_estimator(ver_method);
      vopts.seed = g.seed;
      vopts.threads = g.threads;
      if (ver_procedure != 1 && ver_procedure != 2) throw DomainError("--procedure must be 1 or 2");
      for (const auto& f : ver_families) {
        const Family fam = parse_family(f);
        vopts.families.push_back({fam, fam == Family::Normal ? ver_procedure : 2});
      }
      const auto loaded = read_path_file(vopts.input, ver_m);
      VerificationReport rep = run_verification(loaded.path, vopts);
      rep.warnings.insert(rep.warnings.begin(), loaded.warnings.begin(), loaded.warnings.end());

      auto js = open_out(out_file(g, "report.json"));
      js << serialize(rep) << "\n";
      auto txt = open_out(out_file(g, "report.txt"));
      print_text_report(txt, rep);
      if (rep.a_hat) {
        const IncrementSeries incr = recover_increments(loaded.path, *rep.a_hat, vopts.sigma);
        auto inc = open_out(out_file(g, "increments.csv"));
        write_increments_csv(inc, incr.values);
        if (rep.whiteness) {
          const std::size_t max_lag = std::min<std::size_t>(incr.values.size() - 1, 20);
          auto ac = open_out(out_file(g, "acf.csv"));
          write_acf_csv(ac, acf(incr.values, max_lag));
        }
      }
      print_text_report(std::cout, rep);
      return rep.exit_code;
    }
    if (*dt) {
      const auto x = read_increments_file(dt_input);
      Stream stream = derive_stream(Seed{g.seed}, 0);
      const Family fam = parse_family(dt_family);
      GofResult r;
      if (dt_procedure == 1) {
        if (fam != Family::Normal) throw DomainError("procedure 1 tests the normal family only");
        r = procedure1_bm_test(x, stream, {dt_alpha, dt_resample});
      } else if (dt_procedure == 2) {
        r = procedure2_gof_test(x, fam, stream, {dt_bootstrap, g.threads});
      } else {
        throw DomainError("--procedure must be 1 or 2");
      }
      std::cout << "family:    " << to_string(fam) << " (procedure " << dt_procedure << ")\n";
      std::cout << "statistic: " << r.statistic << "\n";
      if (r.p_value) std::cout << "p-value:   " << *r.p_value << "\n";
      if (r.critical_95) std::cout << "critical:  " << *r.critical_95 << " (95th percentile of " << r.bootstrap_count
                                   << " bootstrap statistics)\n";
      std::cout << "decision:  " << (r.reject ? "reject" : "fail to reject") << "\n";
      return r.reject ? kExitRejectFamily : kExitAccept;
    }
    if (*mcl || *mcp) {
      mc_cfg.kind = parse_driving_kind(mc_driver);
      mc_cfg.estimator = parse_estimator(mc_estimator);
      mc_cfg.test = parse_test_kind(mc_test);
      mc_cfg.family = parse_family(mc_family);
      mc_cfg.seed = Seed{g.seed};
      std::vector<ExperimentConfig> spec;
      if (!mc_config.empty()) {
        std::ifstream in(mc_config);
        if (!in) throw DataError("cannot open '" + mc_config + "'");
        spec = parse_table_spec(in, mc_cfg);
      } else {
        spec.push_back(mc_cfg);
      }
      const auto rows = run_table(spec, g.threads);
      const std::string name = mc_output.empty() ? std::string(*mcl ? "mc-level" : "mc-power") + ".csv" : mc_output;
      auto os = open_out(out_file(g, name));
      write_table_csv(os, rows);
      write_table_text(std::cout, rows);
      for (const auto& row : rows) {
        if (!row.error.empty()) return kExitError;
      }
      return 0;
    }
    if (*spr) {
      const auto a = load_prices_file(spr_a, spr_column);
      const auto b = load_prices_file(spr_b, spr_column);
      for (const auto& w : a.report.warnings) std::cerr << "warning (" << spr_a << "): " << w << "\n";
      for (const auto& w : b.report.warnings) std::cerr << "warning (" << spr_b << "): " << w << "\n";
      const Series s = pair_spread(a.series, b.series);
      const auto file = out_file(g, spr_output);
      auto os = open_out(file);
      if (spr_n || spr_m) {
        if (!spr_n || !spr_m) throw DomainError("--n and --m must be given together");
        const auto mapped = to_path(s.values, SamplingGrid{*spr_n, *spr_m});
        write_path_csv(os, mapped.path);
        std::cout << "mapped " << mapped.mapping.used << " of " << mapped.mapping.available
                  << " spread points (stride " << mapped.mapping.stride << ")\n";
      } else {
        write_series_csv(os, s);
      }
      std::cout << "wrote spread (" << s.values.size() << " joined timestamps) to " << file.string() << "\n";
      return 0;
    }
    if (*rv) {
      const auto prices = load_prices_file(rv_file, rv_column);
      for (const auto& w : prices.report.warnings) std::cerr << "warning: " << w << "\n";
      const auto daily = intraday_returns(prices.series, parse_interval(rv_interval));
      const auto vol = realized_volatility(daily);
      for (const auto& w : vol.warnings) std::cerr << "warning: " << w << "\n";
      const auto file = out_file(g, rv_output);
      auto os = open_out(file);
      if (rv_m) {
        const std::size_t n = rv_n ? *rv_n : periods_for_length(vol.series.values.size(), *rv_m);
        const auto mapped = to_path(vol.series.values, SamplingGrid{n, *rv_m});
        write_path_csv(os, mapped.path);
        std::cout << "mapped " << mapped.mapping.used << " of " << mapped.mapping.available
                  << " daily values onto N=" << n << ", M=" << *rv_m << "\n";
      } else {
        write_series_csv(os, vol.series);
      }
      std::cout << "wrote " << vol.series.values.size() << " daily realized volatilities to " << file.string()
                << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
