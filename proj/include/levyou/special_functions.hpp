#pragma once

/**
 * @file special_functions.hpp
 * @brief Normal CDF/quantile, regularized incomplete gamma, Kolmogorov tail.
 *
 * Everything here is self-contained: no reliance on the platform's erf,
 * lgamma or tgamma, so results are identical wherever IEEE doubles are.
 */

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "levyou/errors.hpp"

namespace levyou {

/// A value in [0, 1]. Converts implicitly to double.
class Probability {
 public:
  constexpr Probability() = default;
  explicit Probability(double v) : value_(v) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw DomainError("probability outside [0,1]: " + std::to_string(v));
    }
  }
  constexpr double value() const { return value_; }
  constexpr operator double() const { return value_; }

 private:
  double value_ = 0.0;
};

namespace detail {

inline constexpr double kInvSqrt2Pi = 0.398942280401432677939946059934;
inline constexpr double kSqrt32 = 5.656854249492380195206754896838;
inline constexpr double kLnSqrt2Pi = 0.918938533204672741780329736406;

// exp(-y^2/2) split so the leading factor is exact in binary (Cody).
inline double half_gauss_log(double y) {
  const double ysq = std::trunc(y * 16.0) / 16.0;
  const double del = (y - ysq) * (y + ysq);
  return -ysq * ysq * 0.5 - del * 0.5;
}

// W. J. Cody's rational Chebyshev approximations (Math. Comp. 1969), the
// algorithm behind most statistical packages' pnorm. Max abs error < 1e-15.
//
// For y > 0.67448975 returns log Phi(-y) without forming Phi(-y), so callers
// can work far below the double underflow threshold.
inline double log_lower_tail(double y) {
  static constexpr std::array<double, 9> c = {
      0.39894151208813466764, 8.8831497943883759412,  93.506656132177855979,
      597.27027639480026226,  2494.5375852903726711,  6848.1904505362823326,
      11602.651437647350124,  9842.7148383839780218,  1.0765576773720192317e-8};
  static constexpr std::array<double, 8> d = {
      22.266688044328115691, 235.38790178262499861, 1519.377599407554805,
      6485.558298266760755,  18615.571640885098091, 34900.952721145977266,
      38912.003286093271411, 19685.429676859990727};
  static constexpr std::array<double, 6> p = {
      0.21589853405795699,     0.1274011611602473639, 0.022235277870649807,
      0.001421619193227893466, 2.9112874951168792e-5, 0.02307344176494017303};
  static constexpr std::array<double, 5> q = {
      1.28426009614491121, 0.468238212480865118, 0.0659881378689285515,
      0.00378239633202758244, 7.29751555083966205e-5};

  double temp = 0.0;
  if (y <= kSqrt32) {
    double num = c[8] * y;
    double den = y;
    for (int i = 0; i < 7; ++i) {
      num = (num + c[i]) * y;
      den = (den + d[i]) * y;
    }
    temp = (num + c[7]) / (den + d[7]);
  } else {
    const double xsq = 1.0 / (y * y);
    double num = p[5] * xsq;
    double den = xsq;
    for (int i = 0; i < 4; ++i) {
      num = (num + p[i]) * xsq;
      den = (den + q[i]) * xsq;
    }
    temp = xsq * (num + p[4]) / (den + q[4]);
    temp = (kInvSqrt2Pi - temp) / y;
  }
  return half_gauss_log(y) + std::log(temp);
}

// Central region |x| <= 0.67448975: returns Phi(x) - 0.5.
inline double central_offset(double x) {
  static constexpr std::array<double, 5> a = {
      2.2352520354606839287, 161.02823106855587881, 1067.6894854603709582,
      18154.981253343561249, 0.065682337918207449113};
  static constexpr std::array<double, 4> b = {
      47.20258190468824187, 976.09855173777669322, 10260.932208618978205,
      45507.789335026729956};
  const double xsq = x * x;
  double num = a[4] * xsq;
  double den = xsq;
  for (int i = 0; i < 3; ++i) {
    num = (num + a[i]) * xsq;
    den = (den + b[i]) * xsq;
  }
  return x * (num + a[3]) / (den + b[3]);
}

inline constexpr double kCentralBound = 0.67448975;

inline void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) {
    throw DomainError(std::string(what) + ": non-finite argument");
  }
}

}  // namespace detail

/// Standard normal CDF, absolute error below 1e-15.
inline Probability std_normal_cdf(double x) {
  detail::require_finite(x, "std_normal_cdf");
  const double y = std::fabs(x);
  if (y <= detail::kCentralBound) {
    return Probability(0.5 + detail::central_offset(x));
  }
  const double lower = std::exp(detail::log_lower_tail(y));
  return Probability(x > 0 ? 1.0 - lower : lower);
}

/// log Phi(x), accurate deep into the lower tail (x around -1e3 and below).
inline double log_std_normal_cdf(double x) {
  detail::require_finite(x, "log_std_normal_cdf");
  const double y = std::fabs(x);
  if (y <= detail::kCentralBound) {
    return std::log(0.5 + detail::central_offset(x));
  }
  if (x < 0) {
    return detail::log_lower_tail(y);
  }
  return std::log1p(-std::exp(detail::log_lower_tail(y)));
}

inline double std_normal_pdf(double x) {
  return detail::kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

/// Inverse of std_normal_cdf by a safeguarded Newton iteration on
/// log Phi inside a shrinking bracket. |Phi(x) - p| <= 1e-10 (in practice
/// the result is within a few ulps of the true quantile).
inline double std_normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError("std_normal_quantile: p must lie in (0,1)");
  }
  if (p == 0.5) return 0.0;
  // Work on the lower tail; 1 - p is exact for p >= 0.5.
  const bool upper = p > 0.5;
  const double target = upper ? 1.0 - p : p;
  const double log_target = std::log(target);

  // Abramowitz & Stegun 26.2.23 starting point (|error| < 4.5e-4).
  const double t = std::sqrt(-2.0 * log_target);
  double x = -(t - (2.515517 + 0.802853 * t + 0.010328 * t * t) /
                       (1.0 + 1.432788 * t + 0.189269 * t * t + 0.001308 * t * t * t));
  double lo = -40.0;
  double hi = 0.0;
  for (int iter = 0; iter < 100; ++iter) {
    const double g = log_std_normal_cdf(x) - log_target;
    if (g == 0.0) break;
    if (g > 0) {
      hi = x;
    } else {
      lo = x;
    }
    // d/dx log Phi(x) = phi(x)/Phi(x) = exp(log phi - log Phi)
    const double log_phi = -0.5 * x * x - detail::kLnSqrt2Pi;
    const double slope = std::exp(log_phi - log_std_normal_cdf(x));
    double next = x - g / slope;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::fabs(next - x) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::fabs(x))) {
      x = next;
      break;
    }
    x = next;
  }
  return upper ? -x : x;
}

/// ln Gamma(x) for x > 0 via the Lanczos approximation (g = 7, n = 9).
inline double log_gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError("log_gamma: argument must be positive and finite");
  }
  static constexpr std::array<double, 9> coef = {
      0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
      771.32342877765313,   -176.61502916214059,   12.507343278686905,
      -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
  constexpr double kPi = 3.14159265358979323846;
  if (x < 0.5) {
    // Reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x)
    return std::log(kPi / std::sin(kPi * x)) - log_gamma(1.0 - x);
  }
  const double z = x - 1.0;
  double sum = coef[0];
  for (int i = 1; i < 9; ++i) sum += coef[i] / (z + i);
  const double t = z + 7.5;
  return detail::kLnSqrt2Pi + (z + 0.5) * std::log(t) - t + std::log(sum);
}

namespace detail {

inline constexpr double kGammaEps = 1e-16;
inline constexpr int kGammaMaxIter = 100000;

// Series for P(a, x); converges quickly for x < a + 1.
inline double lower_gamma_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int n = 0; n < kGammaMaxIter; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * kGammaEps) break;
  }
  return sum * std::exp(-x + a * std::log(x) - log_gamma(a));
}

// Modified Lentz continued fraction for Q(a, x); used for x >= a + 1.
inline double upper_gamma_fraction(double a, double x) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kGammaMaxIter; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kGammaEps) break;
  }
  return std::exp(-x + a * std::log(x) - log_gamma(a)) * h;
}

}  // namespace detail

/// Regularized lower incomplete gamma P(shape, x) = gamma(shape, x) / Gamma(shape).
inline Probability regularized_lower_gamma(double shape, double x) {
  if (!(shape > 0.0) || !std::isfinite(shape)) {
    throw DomainError("regularized_lower_gamma: shape must be positive");
  }
  if (!(x >= 0.0)) {
    throw DomainError("regularized_lower_gamma: x must be nonnegative");
  }
  if (x == 0.0) return Probability(0.0);
  if (std::isinf(x)) return Probability(1.0);
  double v = x < shape + 1.0 ? detail::lower_gamma_series(shape, x)
                             : 1.0 - detail::upper_gamma_fraction(shape, x);
  return Probability(std::clamp(v, 0.0, 1.0));
}

/// Asymptotic Kolmogorov tail P(K > sqrt(n) * d).
///
/// For lambda = sqrt(n) d >= 1 the alternating series
/// 2 sum (-1)^{j-1} exp(-2 j^2 lambda^2) is summed until a term drops below
/// 1e-12. Below 1 that series cancels badly, so the equivalent Jacobi theta
/// form of the CDF, sqrt(2 pi)/lambda sum exp(-(2j-1)^2 pi^2 / (8 lambda^2)),
/// is used instead. Approximate (not the exact finite-n law) for n < 35.
inline Probability ks_pvalue(double d, std::size_t n) {
  if (!(d >= 0.0)) throw DomainError("ks_pvalue: d must be nonnegative");
  if (n < 1) throw DomainError("ks_pvalue: n must be at least 1");
  const double lambda = std::sqrt(static_cast<double>(n)) * d;
  if (lambda == 0.0) return Probability(1.0);
  constexpr double kTermTol = 1e-12;
  constexpr double kPi = 3.14159265358979323846;
  double tail = 0.0;
  if (lambda < 1.0) {
    const double k = -kPi * kPi / (8.0 * lambda * lambda);
    double cdf = 0.0;
    for (int j = 1; j < 1000; ++j) {
      const double odd = 2.0 * j - 1.0;
      const double term = std::exp(k * odd * odd);
      cdf += term;
      if (term < kTermTol) break;
    }
    cdf *= std::sqrt(2.0 * kPi) / lambda;
    tail = 1.0 - cdf;
  } else {
    double sign = 1.0;
    for (int j = 1; j < 1000; ++j) {
      const double term = std::exp(-2.0 * j * j * lambda * lambda);
      tail += sign * term;
      if (term < kTermTol) break;
      sign = -sign;
    }
    tail *= 2.0;
  }
  return Probability(std::clamp(tail, 0.0, 1.0));
}

}  // namespace levyou
