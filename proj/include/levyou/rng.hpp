#pragma once

/**
 * @file rng.hpp
 * @brief Reproducible random streams and the samplers the driving processes need.
 *
 * Every stream is a xoshiro256** generator whose state is expanded by
 * SplitMix64 from a (master seed, stream index) pair. Parallel code never
 * shares a generator: each replication derives its own stream by index, so
 * results do not depend on scheduling or thread count.
 */

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>

#include "levyou/errors.hpp"

namespace levyou {

struct Seed {
  std::uint64_t master = 0;
};

namespace detail {

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

inline constexpr std::uint64_t splitmix_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

}  // namespace detail

/// Single-owner random stream. Not safe to share between threads.
class Stream {
 public:
  explicit Stream(std::array<std::uint64_t, 4> state) : s_(state) {}

  std::uint64_t next_u64() {
    const std::uint64_t result = detail::rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = detail::rotl(s_[3], 45);
    return result;
  }

  /// Uniform on the open interval (0,1): 53 random bits, offset by half an ulp.
  double uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  const std::array<std::uint64_t, 4>& state() const { return s_; }

  // Box-Muller produces normals in pairs; the second is held here.
  std::optional<double>& spare_normal() { return spare_; }

 private:
  std::array<std::uint64_t, 4> s_;
  std::optional<double> spare_;
};

/// Deterministic stream for (seed, index). Distinct indices give distinct
/// states because both mixing steps are bijections of the index.
inline Stream derive_stream(Seed seed, std::uint64_t index) {
  std::uint64_t x = detail::splitmix_mix(seed.master) ^ detail::splitmix_mix(index * detail::kGolden + 0x632be59bd9b4e019ULL);
  std::array<std::uint64_t, 4> st{};
  for (auto& w : st) {
    x += detail::kGolden;
    w = detail::splitmix_mix(x);
  }
  return Stream(st);
}

inline double sample_uniform(Stream& s) { return s.uniform(); }

/// Box-Muller. Every two calls consume exactly two uniforms (u1, u2): the
/// first call returns r cos(2 pi u2) and the second r sin(2 pi u2).
inline double sample_std_normal(Stream& s) {
  if (auto& spare = s.spare_normal(); spare) {
    const double v = *spare;
    spare.reset();
    return v;
  }
  constexpr double kTwoPi = 6.283185307179586476925286766559;
  const double u1 = s.uniform();
  const double u2 = s.uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  s.spare_normal() = r * std::sin(kTwoPi * u2);
  return r * std::cos(kTwoPi * u2);
}

namespace detail {

// Marsaglia & Tsang (2000) squeeze method; shape >= 1, unit scale.
inline double gamma_mt(double shape, Stream& s) {
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = 0.0;
    double v = 0.0;
    do {
      x = sample_std_normal(s);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = s.uniform();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

// Strictly positive result: values below the subnormal range are returned as
// the smallest positive double rather than flushed to zero.
inline double positive_exp(double log_value) {
  const double v = std::exp(log_value);
  return v > 0.0 ? v : std::numeric_limits<double>::denorm_min();
}

}  // namespace detail

/// Gamma(shape, scale), mean shape*scale. Shape < 1 uses the boost
/// G(shape+1) * U^{1/shape}, evaluated in log space so tiny shapes
/// (1e-3 and below) keep their full dynamic range.
inline double sample_gamma(double shape, double scale, Stream& s) {
  if (!(shape > 0.0) || !(scale > 0.0)) {
    throw DomainError("sample_gamma: shape and scale must be positive");
  }
  if (shape >= 1.0) return detail::gamma_mt(shape, s) * scale;
  const double g = detail::gamma_mt(shape + 1.0, s);
  const double u = s.uniform();
  return detail::positive_exp(std::log(g) + std::log(u) / shape + std::log(scale));
}

/// Inverse Gaussian IG(mean, shape) by Michael, Schucany & Haas (1976).
/// Variance is mean^3 / shape.
inline double sample_inverse_gaussian(double mean, double shape, Stream& s) {
  if (!(mean > 0.0) || !(shape > 0.0)) {
    throw DomainError("sample_inverse_gaussian: mean and shape must be positive");
  }
  const double nu = sample_std_normal(s);
  const double y = nu * nu;
  double x = mean;
  if (y > 0.0) {
    // Smaller root m + m^2 y/(2 l) - (m/(2 l)) sqrt(4 m l y + m^2 y^2),
    // rewritten as m * 4 m l y / (m y + sqrt(...))^2 to avoid cancellation.
    const double my = mean * y;
    const double root = std::sqrt(my * my + 4.0 * mean * shape * y);
    const double den = my + root;
    x = mean * (4.0 * mean * shape * y / den) / den;
  }
  if (!(x > 0.0)) x = std::numeric_limits<double>::denorm_min();
  const double u = s.uniform();
  if (u <= mean / (mean + x)) return x;
  const double other = mean / x * mean;
  return std::isfinite(other) ? other : std::numeric_limits<double>::max();
}

}  // namespace levyou
