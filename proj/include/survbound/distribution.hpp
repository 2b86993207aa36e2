#pragma once

// Energy distributions rho(E): analytic families, discrete spectra and
// tabulated densities, with cut-off truncation and energy moments.

#include <cmath>
#include <limits>
#include <algorithm>
#include <memory>
#include <numbers>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "survbound/error.hpp"
#include "survbound/moment_vector.hpp"
#include "survbound/quadrature.hpp"

namespace survbound {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// rho(E) proportional to E^{-1/2} exp(-E/gamma), E > 0.
struct GammaHalf {
  double gamma;
};
/// rho(E) proportional to (1 + E/gamma)^{-exponent}, E > 0.
struct PowerLaw {
  double gamma;
  double exponent;
};
/// rho(E) proportional to 1/((E - e0)^2 + gamma^2) on the whole real line.
struct BreitWigner {
  double gamma;
  double e0;
};
/// rho(E) = 1/m on [0, m].
struct Square {
  double m;
};
struct Atom {
  double energy;
  double weight;
};
struct Discrete {
  std::vector<Atom> atoms;
};
struct Sample {
  double energy;
  double density;
};
/// Piecewise-linear density through the samples, zero outside them.
struct Tabulated {
  std::shared_ptr<const std::vector<Sample>> samples;
};

/// Immutable, unit-weight energy distribution.
class EnergyDistribution {
 public:
  using Kind = std::variant<GammaHalf, PowerLaw, BreitWigner, Square, Discrete, Tabulated>;

  static EnergyDistribution gamma_half(double gamma);
  static EnergyDistribution power_law(double gamma, double exponent);
  static EnergyDistribution breit_wigner(double gamma, double e0 = 0.0);
  static EnergyDistribution square(double m);
  /// Atoms are sorted by energy; weights must already sum to 1.
  static EnergyDistribution discrete(std::vector<Atom> atoms);
  /// Energies strictly increasing; total weight must already be 1.
  static EnergyDistribution tabulated(std::vector<Sample> samples);

  const Kind& kind() const { return kind_; }
  template <typename K>
  bool is() const {
    return std::holds_alternative<K>(kind_);
  }
  template <typename K>
  const K& as() const {
    return std::get<K>(kind_);
  }

  std::string name() const;
  double lower() const;
  double upper() const;
  /// Natural energy unit: gamma, m, or the width of the support.
  double scale() const;
  /// rho(E); zero outside the support. Invalid for discrete spectra.
  double density(double e) const;
  /// Cut-off windows are symmetric about the centre (Breit-Wigner only);
  /// the cut-off parameter is then the half-width.
  bool symmetric_cutoff() const { return is<BreitWigner>(); }

  /// The distribution of E + shift (discrete, tabulated and Breit-Wigner).
  EnergyDistribution shifted(double shift) const;

 private:
  explicit EnergyDistribution(Kind kind) : kind_(std::move(kind)) {}
  Kind kind_;
};

/// Unnormalized inputs accepted by normalize().
struct RawUniform {
  double m;
  double density;
};
using RawDensity = std::variant<RawUniform, Discrete, Tabulated>;

struct Normalized {
  EnergyDistribution distribution;
  double total_weight;  // raw weight before rescaling
};

/// Rescale a nonnegative density to unit weight.
Normalized normalize(const RawDensity& raw);

/// Trapezoid weight of a piecewise-linear density.
double tabulated_weight(const std::vector<Sample>& samples);

/// Energy window kept by a cut-off at c, with its probability alpha.
struct TruncationView {
  EnergyDistribution base;
  double cutoff;
  double lower;
  double upper;
  double alpha;
};

TruncationView truncate(const EnergyDistribution& dist, double c);

/// alpha(c): probability below the cut-off (inside the window for Breit-Wigner).
double alpha_at(const EnergyDistribution& dist, double c);

/// Smallest cut-off with alpha(c) >= target.
double cutoff_for_alpha(const EnergyDistribution& dist, double target);

/// Raw moments h_0..h_n. Orders whose integral diverges are not returned;
/// divergent_at() reports the first of them.
MomentVector raw_moments(const EnergyDistribution& dist, int n);

/// Moments over the whole support by adaptive quadrature (continuous kinds
/// only; every requested order must converge). Cross-check for raw_moments.
MomentVector quadrature_moments(const EnergyDistribution& dist, int n);

/// Moments of the truncated, renormalized distribution.
MomentVector truncated_moments(const TruncationView& view, int n);
MomentVector truncated_moments(const EnergyDistribution& dist, double c, int n);

/// int_lo^hi f(E) rho(E) dE over the intersection with the support. For
/// discrete spectra, the sum over atoms with lo <= E_i <= hi.
template <typename F>
auto integrate_weighted(const EnergyDistribution& dist, F&& f, double lo, double hi,
                        quad::Tolerance tol = {}) -> std::decay_t<decltype(f(lo))> {
  using T = std::decay_t<decltype(f(lo))>;
  lo = std::max(lo, dist.lower());
  hi = std::min(hi, dist.upper());

  if (dist.is<Discrete>()) {
    const auto& atoms = dist.as<Discrete>().atoms;
    T acc = T(f(atoms.front().energy)) * 0.0;
    for (const auto& a : atoms) {
      if (a.energy >= lo && a.energy <= hi) acc += T(f(a.energy)) * a.weight;
    }
    return acc;
  }
  if (!(hi > lo)) return T(f(std::isfinite(lo) ? lo : 0.0)) * 0.0;

  if (dist.is<GammaHalf>()) {
    // E = v^2 removes the E^{-1/2} endpoint singularity.
    const double g = dist.as<GammaHalf>().gamma;
    const double norm = 2.0 / std::sqrt(std::numbers::pi * g);
    auto smooth = [&](double v) -> T {
      const double w = norm * std::exp(-v * v / g);
      // far tail: skip f, whose powers may already have overflowed
      if (w == 0.0) return T(f(0.0)) * 0.0;
      return f(v * v) * w;
    };
    const double vlo = std::sqrt(lo);
    if (std::isinf(hi)) return quad::integrate_to_infinity(smooth, vlo, std::sqrt(g), tol).value;
    return quad::integrate(smooth, vlo, std::sqrt(hi), tol).value;
  }

  if (dist.is<Tabulated>()) {
    const auto& s = *dist.as<Tabulated>().samples;
    T acc = T(f(lo)) * 0.0;
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
      const double a = std::max(lo, s[i].energy);
      const double b = std::min(hi, s[i + 1].energy);
      if (!(b > a)) continue;
      const double slope = (s[i + 1].density - s[i].density) / (s[i + 1].energy - s[i].energy);
      const double e0 = s[i].energy;
      const double r0 = s[i].density;
      auto seg = [&](double e) -> T { return f(e) * (r0 + slope * (e - e0)); };
      acc += quad::integrate(seg, a, b, tol).value;
    }
    return acc;
  }

  if (dist.is<PowerLaw>() && std::isinf(hi)) {
    // E = gamma (s^-4 - 1): rho dE = 4 (p - 1) s^{4(p-1)-1} ds, which tames
    // slowly decaying moment integrands near s = 0.
    const auto& k = dist.as<PowerLaw>();
    constexpr double m = 4.0;
    auto mapped = [&](double s) -> T {
      const double w = m * (k.exponent - 1.0) * std::pow(s, m * (k.exponent - 1.0) - 1.0);
      const double e = k.gamma * (std::pow(s, -m) - 1.0);
      if (w == 0.0 || !std::isfinite(e)) return T(f(0.0)) * 0.0;
      return f(e) * w;
    };
    const double slo = std::pow(1.0 + lo / k.gamma, -1.0 / m);
    return quad::integrate(mapped, 0.0, slo, tol).value;
  }

  auto weighted = [&](double e) -> T {
    const double w = dist.density(e);
    if (w == 0.0) return T(f(0.0)) * 0.0;
    return f(e) * w;
  };
  const double s = dist.scale();
  if (std::isinf(lo) && std::isinf(hi)) {
    const double centre = dist.is<BreitWigner>() ? dist.as<BreitWigner>().e0 : 0.0;
    T left = quad::integrate_from_minus_infinity(weighted, centre, s, tol).value;
    return T(left + quad::integrate_to_infinity(weighted, centre, s, tol).value);
  }
  if (std::isinf(hi)) return quad::integrate_to_infinity(weighted, lo, s, tol).value;
  if (std::isinf(lo)) return quad::integrate_from_minus_infinity(weighted, hi, s, tol).value;
  return quad::integrate(weighted, lo, hi, tol).value;
}

}  // namespace survbound
