#include "survbound/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "survbound/numeric.hpp"

namespace survbound {

namespace {

constexpr double kWeightTolerance = 1e-9;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw Error(ErrorCode::InvalidInput, std::string(what) + " must be positive and finite");
  }
}

void validate_samples(const std::vector<Sample>& s) {
  if (s.size() < 2) throw Error(ErrorCode::InvalidInput, "tabulated density needs >= 2 samples");
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!std::isfinite(s[i].energy) || !std::isfinite(s[i].density)) {
      throw Error(ErrorCode::InvalidInput, "tabulated density has a non-finite sample");
    }
    if (s[i].density < 0.0) {
      throw Error(ErrorCode::NegativeDensity,
                  "density " + std::to_string(s[i].density) + " at E = " +
                      std::to_string(s[i].energy));
    }
    if (i > 0 && !(s[i].energy > s[i - 1].energy)) {
      throw Error(ErrorCode::InvalidInput, "tabulated energies must be strictly increasing");
    }
  }
}

void validate_atoms(std::vector<Atom>& atoms) {
  if (atoms.empty()) throw Error(ErrorCode::InvalidInput, "discrete spectrum has no atoms");
  for (const auto& a : atoms) {
    if (!std::isfinite(a.energy) || !std::isfinite(a.weight)) {
      throw Error(ErrorCode::InvalidInput, "discrete atom is not finite");
    }
    if (a.weight < 0.0) {
      throw Error(ErrorCode::NegativeDensity, "atom weight " + std::to_string(a.weight));
    }
    if (a.weight == 0.0) throw Error(ErrorCode::InvalidInput, "atom weights must be positive");
  }
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& x, const Atom& y) { return x.energy < y.energy; });
  for (std::size_t i = 1; i < atoms.size(); ++i) {
    if (atoms[i].energy == atoms[i - 1].energy) {
      throw Error(ErrorCode::InvalidInput, "duplicate atom energy");
    }
  }
}

void require_unit_weight(double w) {
  if (std::abs(w - 1.0) > kWeightTolerance) {
    throw Error(ErrorCode::NonNormalizable,
                "total weight " + std::to_string(w) + " is not 1; normalize first");
  }
}

// Dimensionless monomials x^k / k! for k = 0..n.
MomentArray scaled_powers(double x, int n) {
  MomentArray out(n + 1);
  out(0) = 1.0;
  for (int k = 1; k <= n; ++k) out(k) = out(k - 1) * x / k;
  return out;
}

quad::Tolerance moment_tolerance() {
  // Every component is a positive integral; control each one relatively.
  quad::Tolerance tol;
  tol.abs = 1e-300;
  tol.rel = 1e-13;
  return tol;
}

// Moments about `origin` of rho restricted to [lo, hi], all with nonnegative
// integrands (lo >= origin). Returns unnormalized scaled integrals.
Eigen::VectorXd positive_moment_integrals(const EnergyDistribution& dist, double origin,
                                          double lo, double hi, double unit, int n) {
  auto integrand = [&](double e) -> MomentArray {
    return scaled_powers((e - origin) / unit, n);
  };
  MomentArray raw = integrate_weighted(dist, integrand, lo, hi, moment_tolerance());
  Eigen::VectorXd out(n + 1);
  double p = 1.0;
  for (int k = 0; k <= n; ++k) {
    out(k) = raw(k) * p;
    p *= unit;
  }
  return out;
}

double tabulated_density(const std::vector<Sample>& s, double e) {
  if (e < s.front().energy || e > s.back().energy) return 0.0;
  auto it = std::upper_bound(s.begin(), s.end(), e,
                             [](double v, const Sample& x) { return v < x.energy; });
  if (it == s.end()) return s.back().density;
  if (it == s.begin()) return s.front().density;
  const Sample& hi = *it;
  const Sample& lo = *(it - 1);
  const double w = (e - lo.energy) / (hi.energy - lo.energy);
  return lo.density + w * (hi.density - lo.density);
}

}  // namespace

EnergyDistribution EnergyDistribution::gamma_half(double gamma) {
  require_positive(gamma, "gamma");
  return EnergyDistribution(GammaHalf{gamma});
}

EnergyDistribution EnergyDistribution::power_law(double gamma, double exponent) {
  require_positive(gamma, "gamma");
  if (!(exponent > 1.0) || !std::isfinite(exponent)) {
    throw Error(ErrorCode::NonNormalizable, "power-law exponent must exceed 1");
  }
  return EnergyDistribution(PowerLaw{gamma, exponent});
}

EnergyDistribution EnergyDistribution::breit_wigner(double gamma, double e0) {
  require_positive(gamma, "gamma");
  if (!std::isfinite(e0)) throw Error(ErrorCode::InvalidInput, "e0 must be finite");
  return EnergyDistribution(BreitWigner{gamma, e0});
}

EnergyDistribution EnergyDistribution::square(double m) {
  require_positive(m, "m");
  return EnergyDistribution(Square{m});
}

EnergyDistribution EnergyDistribution::discrete(std::vector<Atom> atoms) {
  validate_atoms(atoms);
  CompensatedSum<double> total;
  for (const auto& a : atoms) total.add(a.weight);
  require_unit_weight(total.value());
  return EnergyDistribution(Discrete{std::move(atoms)});
}

EnergyDistribution EnergyDistribution::tabulated(std::vector<Sample> samples) {
  validate_samples(samples);
  require_unit_weight(tabulated_weight(samples));
  return EnergyDistribution(
      Tabulated{std::make_shared<const std::vector<Sample>>(std::move(samples))});
}

std::string EnergyDistribution::name() const {
  std::ostringstream os;
  std::visit(Overloaded{
                 [&](const GammaHalf& k) { os << "gamma_half(gamma=" << k.gamma << ")"; },
                 [&](const PowerLaw& k) {
                   os << "power_law(gamma=" << k.gamma << ", exponent=" << k.exponent << ")";
                 },
                 [&](const BreitWigner& k) {
                   os << "breit_wigner(gamma=" << k.gamma << ", e0=" << k.e0 << ")";
                 },
                 [&](const Square& k) { os << "square(m=" << k.m << ")"; },
                 [&](const Discrete& k) { os << "discrete(" << k.atoms.size() << " atoms)"; },
                 [&](const Tabulated& k) {
                   os << "tabulated(" << k.samples->size() << " samples)";
                 },
             },
             kind_);
  return os.str();
}

double EnergyDistribution::lower() const {
  return std::visit(Overloaded{
                        [](const BreitWigner&) { return -kInf; },
                        [](const Discrete& k) { return k.atoms.front().energy; },
                        [](const Tabulated& k) { return k.samples->front().energy; },
                        [](const auto&) { return 0.0; },
                    },
                    kind_);
}

double EnergyDistribution::upper() const {
  return std::visit(Overloaded{
                        [](const Square& k) { return k.m; },
                        [](const Discrete& k) { return k.atoms.back().energy; },
                        [](const Tabulated& k) { return k.samples->back().energy; },
                        [](const auto&) { return kInf; },
                    },
                    kind_);
}

double EnergyDistribution::scale() const {
  return std::visit(Overloaded{
                        [](const GammaHalf& k) { return k.gamma; },
                        [](const PowerLaw& k) { return k.gamma; },
                        [](const BreitWigner& k) { return k.gamma; },
                        [](const Square& k) { return k.m; },
                        [](const Discrete& k) {
                          const double w = k.atoms.back().energy - k.atoms.front().energy;
                          return w > 0.0 ? w : std::max(1.0, std::abs(k.atoms.front().energy));
                        },
                        [](const Tabulated& k) {
                          return k.samples->back().energy - k.samples->front().energy;
                        },
                    },
                    kind_);
}

double EnergyDistribution::density(double e) const {
  return std::visit(
      Overloaded{
          [&](const GammaHalf& k) {
            if (!(e > 0.0)) return 0.0;
            return std::exp(-e / k.gamma) / std::sqrt(std::numbers::pi * k.gamma * e);
          },
          [&](const PowerLaw& k) {
            if (e < 0.0) return 0.0;
            return (k.exponent - 1.0) / k.gamma * std::pow(1.0 + e / k.gamma, -k.exponent);
          },
          [&](const BreitWigner& k) {
            const double x = e - k.e0;
            return k.gamma / (std::numbers::pi * (x * x + k.gamma * k.gamma));
          },
          [&](const Square& k) { return (e >= 0.0 && e <= k.m) ? 1.0 / k.m : 0.0; },
          [&](const Discrete&) -> double {
            throw Error(ErrorCode::InvalidInput, "a discrete spectrum has no density");
          },
          [&](const Tabulated& k) { return tabulated_density(*k.samples, e); },
      },
      kind_);
}

EnergyDistribution EnergyDistribution::shifted(double shift) const {
  return std::visit(
      Overloaded{
          [&](const BreitWigner& k) { return breit_wigner(k.gamma, k.e0 + shift); },
          [&](const Discrete& k) {
            auto atoms = k.atoms;
            for (auto& a : atoms) a.energy += shift;
            return EnergyDistribution(Discrete{std::move(atoms)});
          },
          [&](const Tabulated& k) {
            auto samples = *k.samples;
            for (auto& s : samples) s.energy += shift;
            return EnergyDistribution(
                Tabulated{std::make_shared<const std::vector<Sample>>(std::move(samples))});
          },
          [&](const Square& k) {
            return tabulated({{shift, 1.0 / k.m}, {shift + k.m, 1.0 / k.m}});
          },
          [&](const auto&) -> EnergyDistribution {
            throw Error(ErrorCode::InvalidInput, "cannot shift " + name());
          },
      },
      kind_);
}

double tabulated_weight(const std::vector<Sample>& s) {
  CompensatedSum<double> w;
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    w.add(0.5 * (s[i].density + s[i + 1].density) * (s[i + 1].energy - s[i].energy));
  }
  return w.value();
}

Normalized normalize(const RawDensity& raw) {
  auto check_total = [](double total) {
    if (!std::isfinite(total) || !(total > 0.0)) {
      throw Error(ErrorCode::NonNormalizable, "total weight " + std::to_string(total));
    }
  };
  return std::visit(
      Overloaded{
          [&](const RawUniform& u) {
            require_positive(u.m, "m");
            if (u.density < 0.0) throw Error(ErrorCode::NegativeDensity, "uniform density");
            const double total = u.density * u.m;
            check_total(total);
            return Normalized{EnergyDistribution::square(u.m), total};
          },
          [&](const Discrete& d) {
            std::vector<Atom> atoms;
            CompensatedSum<double> total;
            for (const auto& a : d.atoms) {
              if (a.weight < 0.0) {
                throw Error(ErrorCode::NegativeDensity, "atom weight " + std::to_string(a.weight));
              }
              total.add(a.weight);
              if (a.weight > 0.0) atoms.push_back(a);
            }
            check_total(total.value());
            for (auto& a : atoms) a.weight /= total.value();
            return Normalized{EnergyDistribution::discrete(std::move(atoms)), total.value()};
          },
          [&](const Tabulated& t) {
            auto samples = *t.samples;
            validate_samples(samples);
            const double total = tabulated_weight(samples);
            check_total(total);
            for (auto& s : samples) s.density /= total;
            return Normalized{EnergyDistribution::tabulated(std::move(samples)), total};
          },
      },
      raw);
}

double alpha_at(const EnergyDistribution& dist, double c) {
  if (std::isnan(c)) throw Error(ErrorCode::CutoffOutOfSupport, "cut-off is NaN");
  if (dist.symmetric_cutoff()) {
    if (!(c > 0.0)) {
      throw Error(ErrorCode::CutoffOutOfSupport, "window half-width must be positive");
    }
    if (std::isinf(c)) return 1.0;
    const auto& k = dist.as<BreitWigner>();
    return 2.0 / std::numbers::pi * std::atan(c / k.gamma);
  }
  const double lo = dist.lower();
  const double hi = dist.upper();
  const bool at_lowest_atom = dist.is<Discrete>() && c == lo;
  if ((!(c > lo) && !at_lowest_atom) || c > hi) {
    throw Error(ErrorCode::CutoffOutOfSupport,
                "cut-off " + std::to_string(c) + " outside (" + std::to_string(lo) + ", " +
                    std::to_string(hi) + "]");
  }
  if (c == hi) return 1.0;
  if (std::isinf(c)) return 1.0;
  return std::visit(
      Overloaded{
          [&](const GammaHalf& k) { return std::erf(std::sqrt(c / k.gamma)); },
          [&](const PowerLaw& k) {
            return -std::expm1(-(k.exponent - 1.0) * std::log1p(c / k.gamma));
          },
          [&](const Square& k) { return c / k.m; },
          [&](const Discrete& k) {
            CompensatedSum<double> s;
            for (const auto& a : k.atoms) {
              if (a.energy <= c) s.add(a.weight);
            }
            return s.value();
          },
          [&](const auto&) {
            return integrate_weighted(dist, [](double) { return 1.0; }, lo, c,
                                      moment_tolerance());
          },
      },
      dist.kind());
}

double cutoff_for_alpha(const EnergyDistribution& dist, double target) {
  if (!(target > 0.0 && target <= 1.0)) {
    throw Error(ErrorCode::InvalidInput, "alpha target must lie in (0, 1]");
  }
  const double lo0 = dist.symmetric_cutoff() ? 0.0 : dist.lower();
  double hi = dist.symmetric_cutoff() ? kInf : dist.upper();
  if (std::isinf(hi)) {
    hi = lo0 + dist.scale();
    while (alpha_at(dist, hi) < target) {
      hi = lo0 + 2.0 * (hi - lo0);
      if (hi > 1e300) throw Error(ErrorCode::InvalidInput, "alpha target not reachable");
    }
  }
  double lo = lo0;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo0 || alpha_at(dist, mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

TruncationView truncate(const EnergyDistribution& dist, double c) {
  const double alpha = alpha_at(dist, c);
  if (!(alpha > 0.0)) {
    throw Error(ErrorCode::CutoffOutOfSupport,
                "no probability below cut-off " + std::to_string(c));
  }
  if (dist.symmetric_cutoff()) {
    const double e0 = dist.as<BreitWigner>().e0;
    return {dist, c, e0 - c, e0 + c, alpha};
  }
  return {dist, c, dist.lower(), std::min(c, dist.upper()), alpha};
}

MomentVector truncated_moments(const TruncationView& view, int n) {
  check_order(n);
  const EnergyDistribution& dist = view.base;
  const double c = view.upper;

  if (dist.is<Square>()) {
    Eigen::VectorXd m(n + 1);
    for (int k = 0; k <= n; ++k) m(k) = std::pow(c, k) / factorial(k + 1);
    return MomentVector(0.0, m, view.alpha);
  }
  if (dist.is<Discrete>()) {
    const double origin = dist.lower();
    Eigen::VectorXd m = Eigen::VectorXd::Zero(n + 1);
    CompensatedSum<double> w;
    std::vector<CompensatedSum<double>> acc(n + 1);
    for (const auto& a : dist.as<Discrete>().atoms) {
      if (a.energy > c) break;
      w.add(a.weight);
      double p = 1.0;
      for (int k = 0; k <= n; ++k) {
        acc[k].add(a.weight * p);
        p *= (a.energy - origin) / (k + 1);
      }
    }
    for (int k = 0; k <= n; ++k) m(k) = acc[k].value() / w.value();
    return MomentVector(origin, m, view.alpha);
  }
  if (dist.is<BreitWigner>()) {
    // Symmetric window about e0: odd central moments vanish exactly.
    const auto& bw = dist.as<BreitWigner>();
    const double half = view.cutoff;
    if (std::isinf(half)) {
      Eigen::VectorXd m = Eigen::VectorXd::Ones(1);
      return MomentVector(bw.e0, m, 1.0, n >= 1 ? std::optional<int>(1) : std::nullopt);
    }
    Eigen::VectorXd right = positive_moment_integrals(dist, bw.e0, bw.e0, bw.e0 + half, half, n);
    Eigen::VectorXd m(n + 1);
    for (int k = 0; k <= n; ++k) m(k) = (k % 2 == 0) ? right(k) / right(0) : 0.0;
    return MomentVector(bw.e0, m, view.alpha);
  }

  if (std::isinf(c)) return raw_moments(dist, n);
  const double origin = view.lower;
  Eigen::VectorXd m = positive_moment_integrals(dist, origin, view.lower, c, c - origin, n);
  m /= m(0);
  m(0) = 1.0;
  return MomentVector(origin, m, view.alpha);
}

MomentVector truncated_moments(const EnergyDistribution& dist, double c, int n) {
  return truncated_moments(truncate(dist, c), n);
}

MomentVector quadrature_moments(const EnergyDistribution& dist, int n) {
  check_order(n);
  if (dist.is<Discrete>() || dist.is<BreitWigner>()) {
    throw Error(ErrorCode::InvalidInput, "no moment quadrature for " + dist.name());
  }
  const double origin = dist.lower();
  const double unit = dist.scale();
  Eigen::VectorXd m = positive_moment_integrals(dist, origin, origin, dist.upper(), unit, n);
  m /= m(0);
  m(0) = 1.0;
  return MomentVector(origin, m);
}

MomentVector raw_moments(const EnergyDistribution& dist, int n) {
  check_order(n);
  return std::visit(
      Overloaded{
          [&](const GammaHalf& k) {
            // h_k = gamma^k Gamma(k + 1/2) / Gamma(1/2)
            Eigen::VectorXd m(n + 1);
            m(0) = 1.0;
            for (int j = 1; j <= n; ++j) m(j) = m(j - 1) * k.gamma * (j - 0.5) / j;
            return MomentVector(0.0, m);
          },
          [&](const PowerLaw& k) {
            // h_j exists for j < p - 1; h_j / j! = gamma^j / prod_{i=2}^{j+1} (p - i)
            std::optional<int> divergent;
            int top = n;
            for (int j = 0; j <= n; ++j) {
              if (!(static_cast<double>(j) < k.exponent - 1.0)) {
                divergent = j;
                top = j - 1;
                break;
              }
            }
            Eigen::VectorXd m(top + 1);
            m(0) = 1.0;
            for (int j = 1; j <= top; ++j) m(j) = m(j - 1) * k.gamma / (k.exponent - (j + 1));
            return MomentVector(0.0, m, 1.0, divergent);
          },
          [&](const BreitWigner& k) {
            Eigen::VectorXd m = Eigen::VectorXd::Ones(1);
            return MomentVector(k.e0, m, 1.0, n >= 1 ? std::optional<int>(1) : std::nullopt);
          },
          [&](const auto&) { return truncated_moments(dist, dist.upper(), n); },
      },
      dist.kind());
}

}  // namespace survbound
