#pragma once

/**
 * @file levy_generators.hpp
 * @brief Increments of second-order Levy processes over a step dt.
 *
 * Every family is parameterized by its unit-time mean mu = E[L(1)] and
 * variance eta2 = Var[L(1)]; an increment over dt then has mean mu*dt and
 * variance eta2*dt.
 */

#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "levyou/errors.hpp"
#include "levyou/rng.hpp"

namespace levyou {

struct LevyParams {
  double mu = 1.0;
  double eta2 = 1.0;
};

enum class DrivingKind { BrownianMotion, Gamma, InverseGaussian, MixedIGGamma };

inline bool is_subordinator(DrivingKind k) { return k != DrivingKind::BrownianMotion; }

inline std::string_view to_string(DrivingKind k) {
  switch (k) {
    case DrivingKind::BrownianMotion: return "bm";
    case DrivingKind::Gamma: return "gamma";
    case DrivingKind::InverseGaussian: return "ig";
    case DrivingKind::MixedIGGamma: return "mixed";
  }
  return "?";
}

inline DrivingKind parse_driving_kind(std::string_view s) {
  if (s == "bm") return DrivingKind::BrownianMotion;
  if (s == "gamma") return DrivingKind::Gamma;
  if (s == "ig") return DrivingKind::InverseGaussian;
  if (s == "mixed") return DrivingKind::MixedIGGamma;
  throw DomainError("unknown driver '" + std::string(s) + "' (expected bm|gamma|ig|mixed)");
}

struct NormalIncrement {
  double mean;
  double variance;
};

struct GammaIncrement {
  double shape;
  double scale;
};

struct InverseGaussianIncrement {
  double mean;
  double shape;
};

// Independent sum of a Gamma and an IG increment.
struct MixedIncrement {
  GammaIncrement gamma;
  InverseGaussianIncrement ig;
};

using IncrementLaw = std::variant<NormalIncrement, GammaIncrement, InverseGaussianIncrement, MixedIncrement>;

namespace detail {

inline GammaIncrement gamma_law(LevyParams p, double dt) {
  return {p.mu * p.mu / p.eta2 * dt, p.eta2 / p.mu};
}

inline InverseGaussianIncrement ig_law(LevyParams p, double dt) {
  // Var = mean^3 / shape = eta2 dt with mean = mu dt.
  return {p.mu * dt, p.mu * p.mu * p.mu * dt * dt / p.eta2};
}

}  // namespace detail

/// Distribution of L(t + dt) - L(t).
///
/// For the mixed driver, `mix_weight` w gives the Gamma component rates
/// (w mu, w eta2) and the IG component ((1-w) mu, (1-w) eta2), so the sum
/// still has mean mu dt and variance eta2 dt.
inline IncrementLaw increment_params(DrivingKind kind, LevyParams p, double dt, double mix_weight = 0.5) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("increment_params: dt must be positive");
  if (!(p.eta2 > 0.0) || !std::isfinite(p.eta2)) throw DomainError("increment_params: eta2 must be positive");
  if (!std::isfinite(p.mu)) throw DomainError("increment_params: mu must be finite");
  if (is_subordinator(kind) && !(p.mu > 0.0)) {
    throw DomainError("increment_params: subordinator drivers need mu > 0");
  }
  switch (kind) {
    case DrivingKind::BrownianMotion:
      return NormalIncrement{p.mu * dt, p.eta2 * dt};
    case DrivingKind::Gamma:
      return detail::gamma_law(p, dt);
    case DrivingKind::InverseGaussian:
      return detail::ig_law(p, dt);
    case DrivingKind::MixedIGGamma: {
      if (!(mix_weight > 0.0 && mix_weight < 1.0)) {
        throw DomainError("increment_params: mix weight must lie in (0,1)");
      }
      const double w = mix_weight;
      return MixedIncrement{detail::gamma_law({w * p.mu, w * p.eta2}, dt),
                            detail::ig_law({(1 - w) * p.mu, (1 - w) * p.eta2}, dt)};
    }
  }
  throw DomainError("increment_params: unknown kind");
}

inline double sample_increment(const IncrementLaw& law, Stream& s) {
  struct Visitor {
    Stream& s;
    double operator()(const NormalIncrement& n) const {
      return n.mean + std::sqrt(n.variance) * sample_std_normal(s);
    }
    double operator()(const GammaIncrement& g) const { return sample_gamma(g.shape, g.scale, s); }
    double operator()(const InverseGaussianIncrement& ig) const {
      return sample_inverse_gaussian(ig.mean, ig.shape, s);
    }
    double operator()(const MixedIncrement& m) const {
      const double g = sample_gamma(m.gamma.shape, m.gamma.scale, s);
      return g + sample_inverse_gaussian(m.ig.mean, m.ig.shape, s);
    }
  };
  return std::visit(Visitor{s}, law);
}

inline std::vector<double> sample_increment_sequence(DrivingKind kind, LevyParams p, double dt, std::size_t count,
                                                     Stream& s, double mix_weight = 0.5) {
  if (count < 1) throw DomainError("sample_increment_sequence: count must be at least 1");
  const IncrementLaw law = increment_params(kind, p, dt, mix_weight);
  std::vector<double> out(count);
  for (auto& v : out) v = sample_increment(law, s);
  return out;
}

}  // namespace levyou
