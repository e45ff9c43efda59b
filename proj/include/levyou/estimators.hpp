#pragma once

/**
 * @file estimators.hpp
 * @brief Mean-reversion rate estimators for a sampled CAR(1) path.
 *
 * LSB: least-squares based, valid for any second-order driver.
 * DMB: Davis-McCormick based, max of scaled log-decrements; needs Y > 0 and
 *      is the accurate choice for subordinator (Gamma, IG, mixed) drivers.
 */

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <string_view>

#include "levyou/car1_simulator.hpp"
#include "levyou/errors.hpp"

namespace levyou {

enum class Estimator { LSB, DMB };

inline std::string_view to_string(Estimator e) { return e == Estimator::LSB ? "lsb" : "dmb"; }

inline Estimator parse_estimator(std::string_view s) {
  if (s == "lsb") return Estimator::LSB;
  if (s == "dmb") return Estimator::DMB;
  throw DomainError("unknown estimator '" + std::string(s) + "' (expected lsb|dmb)");
}

/// Guidance attached to PositivityError and surfaced in reports.
inline constexpr std::string_view kDmbPositivityGuidance =
    "DMB estimator requires a strictly positive path; the path takes nonpositive values, use the LSB estimator "
    "instead";

struct RateEstimate {
  double a_hat = 0.0;
  Estimator method = Estimator::LSB;
  std::optional<std::string> warning;
};

/// a_hat = sum (Y_{n-1} - Y_n)(Y_{n-1} - Ybar) / ((1/M) sum (Y_{n-1} - Ybar)^2),
/// n = 1..NM, with Ybar the mean of Y_1..Y_NM (index 0 excluded).
///
/// A negative estimate is returned as is, with a warning: it signals misfit.
inline RateEstimate lsb_estimate(const Path& path) {
  const auto& y = path.values();
  const std::size_t steps = path.grid().steps();
  double mean = 0.0;
  for (std::size_t n = 1; n <= steps; ++n) mean += y[n];
  mean /= static_cast<double>(steps);

  double num = 0.0;
  double den = 0.0;
  for (std::size_t n = 1; n <= steps; ++n) {
    const double lagged = y[n - 1] - mean;
    num += (y[n - 1] - y[n]) * lagged;
    den += lagged * lagged;
  }
  den /= static_cast<double>(path.grid().per_period);
  if (!(den > 0.0)) throw DegenerateInputError("LSB estimator: constant path (zero denominator)");

  RateEstimate est{num / den, Estimator::LSB, std::nullopt};
  if (est.a_hat <= 0.0) {
    est.warning = "LSB estimate is nonpositive (" + std::to_string(est.a_hat) + "); the path is not mean-reverting";
  }
  return est;
}

/// a_hat = max_{0 <= n < NM} M log(Y_n / Y_{n+1}).
inline RateEstimate dmb_estimate(const Path& path) {
  const auto& y = path.values();
  for (double v : y) {
    if (!(v > 0.0)) throw PositivityError(std::string(kDmbPositivityGuidance));
  }
  const double m = static_cast<double>(path.grid().per_period);
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n + 1 < y.size(); ++n) {
    best = std::max(best, std::log(y[n] / y[n + 1]));
  }
  return {m * best, Estimator::DMB, std::nullopt};
}

inline RateEstimate estimate_rate(const Path& path, Estimator method) {
  return method == Estimator::LSB ? lsb_estimate(path) : dmb_estimate(path);
}

}  // namespace levyou
