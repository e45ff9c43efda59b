#pragma once

/**
 * @file car1_simulator.hpp
 * @brief Stationary CAR(1) (Levy-driven Ornstein-Uhlenbeck) paths on a regular grid.
 *
 * dY(t) = -a Y(t) dt + sigma dL(t), observed at t = i/M, i = 0..N*M.
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "levyou/errors.hpp"
#include "levyou/levy_generators.hpp"
#include "levyou/rng.hpp"

namespace levyou {

struct Car1Params {
  double a = 1.0;      ///< mean-reversion rate
  double sigma = 1.0;  ///< scale of the driving noise
};

inline void validate(const Car1Params& p) {
  if (!(p.a > 0.0) || !std::isfinite(p.a)) throw DomainError("CAR(1): a must be positive");
  if (!(p.sigma > 0.0) || !std::isfinite(p.sigma)) throw DomainError("CAR(1): sigma must be positive");
}

/// N unit periods, each sampled M times.
struct SamplingGrid {
  std::size_t n_periods = 1;
  std::size_t per_period = 1;

  std::size_t steps() const { return n_periods * per_period; }
  std::size_t points() const { return steps() + 1; }
  double step() const { return 1.0 / static_cast<double>(per_period); }

  friend bool operator==(const SamplingGrid&, const SamplingGrid&) = default;
};

inline void validate(const SamplingGrid& g) {
  if (g.n_periods < 1 || g.per_period < 1) throw DomainError("sampling grid needs N >= 1 and M >= 1");
}

/// Observations Y_{i/M}, i = 0..N*M. Length and finiteness are enforced on construction.
class Path {
 public:
  Path(SamplingGrid grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
    validate(grid_);
    if (values_.size() != grid_.points()) {
      throw DomainError("path length " + std::to_string(values_.size()) + " does not match grid (" +
                        std::to_string(grid_.points()) + " points expected)");
    }
    if (!std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); })) {
      throw DomainError("path contains non-finite values");
    }
  }

  const SamplingGrid& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  double time(std::size_t i) const { return static_cast<double>(i) / static_cast<double>(grid_.per_period); }

 private:
  SamplingGrid grid_;
  std::vector<double> values_;
};

struct StationaryMoments {
  double mean;
  double variance;
  double rate;

  double autocov(double lag) const { return variance * std::exp(-rate * std::fabs(lag)); }
};

/// Mean mu sigma / a, autocovariance (sigma^2 eta2 / 2a) e^{-a s}.
inline StationaryMoments stationary_moments(const Car1Params& car, const LevyParams& levy) {
  validate(car);
  return {levy.mu * car.sigma / car.a, car.sigma * car.sigma * levy.eta2 / (2.0 * car.a), car.a};
}

struct SimulationOptions {
  std::size_t substeps = 10;  ///< K fine steps per grid step
  bool exact_bm = false;      ///< exact AR(1) transition for Brownian drivers
  double mix_weight = 0.5;    ///< Gamma share of the mixed driver
};

/// Burn-in length in time units before the first recorded point.
inline double burn_in_time(double a) { return std::max(10.0 / a, 10.0); }

/// Simulates one path.
///
/// Generic mode: on the fine step d = 1/(M K), Y <- e^{-a d} Y + sigma dL with
/// dL one driving increment over d; every K-th fine point is recorded. The
/// state starts at the stationary mean and runs burn_in_time(a) before t = 0.
///
/// Exact Brownian mode: the grid transition is drawn from its exact Gaussian
/// law (mean (mu sigma/a)(1-phi), variance (1-phi^2) sigma^2 eta2/(2a),
/// phi = e^{-a/M}) and Y(0) from the stationary law, so the sampled path is
/// exactly stationary and K is not used.
inline Path simulate_path(const Car1Params& car, DrivingKind kind, const LevyParams& levy, const SamplingGrid& grid,
                          const SimulationOptions& opts, Stream& stream) {
  validate(car);
  validate(grid);
  if (opts.substeps < 1) throw DomainError("simulate_path: substeps must be at least 1");
  const StationaryMoments sm = stationary_moments(car, levy);
  std::vector<double> values(grid.points());

  if (opts.exact_bm && kind == DrivingKind::BrownianMotion) {
    if (!(levy.eta2 > 0.0)) throw DomainError("simulate_path: eta2 must be positive");
    const double phi = std::exp(-car.a * grid.step());
    const double innov_mean = sm.mean * (1.0 - phi);
    const double innov_sd = std::sqrt(-std::expm1(-2.0 * car.a * grid.step()) * sm.variance);
    double y = sm.mean + std::sqrt(sm.variance) * sample_std_normal(stream);
    values[0] = y;
    for (std::size_t i = 1; i < values.size(); ++i) {
      y = phi * y + innov_mean + innov_sd * sample_std_normal(stream);
      values[i] = y;
    }
    return Path(grid, std::move(values));
  }

  const std::size_t k = opts.substeps;
  const double fine = 1.0 / static_cast<double>(grid.per_period * k);
  const IncrementLaw law = increment_params(kind, levy, fine, opts.mix_weight);
  const double decay = std::exp(-car.a * fine);
  const double sigma = car.sigma;

  double y = sm.mean;
  const auto burn_steps = static_cast<std::size_t>(std::ceil(burn_in_time(car.a) / fine));
  for (std::size_t i = 0; i < burn_steps; ++i) y = decay * y + sigma * sample_increment(law, stream);

  values[0] = y;
  for (std::size_t i = 1; i < values.size(); ++i) {
    for (std::size_t j = 0; j < k; ++j) y = decay * y + sigma * sample_increment(law, stream);
    values[i] = y;
  }
  return Path(grid, std::move(values));
}

}  // namespace levyou
