#pragma once

#include <cmath>
#include <vector>

#include "levyou/car1_simulator.hpp"
#include "levyou/errors.hpp"

namespace levyou {

/// Unit-interval driving increments recovered from a path.
struct IncrementSeries {
  std::vector<double> values;
  double a_used = 0.0;
  double sigma_used = 1.0;
};

/// Trapezoidal reconstruction of L(n) - L(n-1), n = 1..N:
///
///   (a/(M sigma)) sum_{i=(n-1)M+1}^{nM} Y_{i/M} + (1/sigma - a/(2 M sigma)) (Y_n - Y_{n-1})
///
/// `a` is normally an estimate; with the true rate and fine sampling the
/// error is O(1/M^2).
inline IncrementSeries recover_increments(const Path& path, double a, double sigma = 1.0) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw DomainError("recover_increments: sigma must be positive");
  if (!std::isfinite(a)) throw DomainError("recover_increments: rate must be finite");
  const auto& y = path.values();
  const std::size_t m = path.grid().per_period;
  const std::size_t n_periods = path.grid().n_periods;
  const double md = static_cast<double>(m);
  const double sum_coef = a / (md * sigma);
  const double diff_coef = 1.0 / sigma - a / (2.0 * md * sigma);

  IncrementSeries out{std::vector<double>(n_periods), a, sigma};
  for (std::size_t n = 1; n <= n_periods; ++n) {
    double sum = 0.0;
    for (std::size_t i = (n - 1) * m + 1; i <= n * m; ++i) sum += y[i];
    out.values[n - 1] = sum_coef * sum + diff_coef * (y[n * m] - y[(n - 1) * m]);
  }
  return out;
}

}  // namespace levyou
