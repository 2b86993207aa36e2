#include "survbound/oracle.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "survbound/error.hpp"

namespace survbound {

namespace {

using Complex = std::complex<double>;

SurvivalSample from_amplitude(double t, Complex a) {
  const double abs = std::abs(a);
  return {t, a.real(), -a.imag(), abs, abs * abs};
}

quad::Tolerance panel_tolerance() {
  quad::Tolerance tol;
  tol.abs = 1e-14;
  tol.rel = 1e-12;
  return tol;
}

// int_lo^hi rho(E) exp(-i E t) dE as a sum over half-period panels.
Complex panel_sum(const EnergyDistribution& dist, double t, double lo, double hi) {
  auto phase = [t](double e) -> Eigen::Vector2d {
    return Eigen::Vector2d(std::cos(e * t), -std::sin(e * t));
  };
  const double width = std::numbers::pi / t;
  Eigen::Vector2d acc = Eigen::Vector2d::Zero();
  for (double a = lo; a < hi; a += width) {
    const double b = std::min(hi, a + width);
    acc += integrate_weighted(dist, phase, a, b, panel_tolerance());
  }
  return {acc(0), acc(1)};
}

struct TailTerm {
  Complex derivative;
  double bound;  // monotone majorant of |derivative|, drives the stopping rule
};

// sum_k f^(k)(X) e^{-iXt} / (it)^{k+1}, stopped where the majorant of the
// terms is smallest.
template <typename Derivative>
Complex asymptotic_tail(Derivative&& derivative, double x, double t) {
  const Complex it(0.0, t);
  Complex denom = it;
  Complex acc = 0.0;
  double previous = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 200; ++k) {
    const TailTerm d = derivative(k);
    const double size = d.bound / std::pow(t, k + 1);
    if (size > previous) break;
    acc += d.derivative / denom;
    if (size < 1e-18 * std::abs(acc)) break;
    previous = size;
    denom *= it;
  }
  return acc * std::exp(Complex(0.0, -x * t));
}

Complex power_law_amplitude(const PowerLaw& k, const EnergyDistribution& dist, double t) {
  // Stop the panels where t (X + gamma) >= 40; the tail series then
  // converges to double precision.
  const double x = std::max(0.0, 40.0 / t - k.gamma);
  const double norm = (k.exponent - 1.0) / k.gamma;
  const double base = 1.0 + x / k.gamma;
  auto derivative = [&](int order) {
    double pochhammer = 1.0;
    for (int j = 0; j < order; ++j) pochhammer *= k.exponent + j;
    const double sign = order % 2 == 0 ? 1.0 : -1.0;
    const double size = norm * pochhammer * std::pow(k.gamma, -order) * std::pow(base, -k.exponent - order);
    return TailTerm{Complex(sign * size), size};
  };
  return panel_sum(dist, t, 0.0, x) + asymptotic_tail(derivative, x, t);
}

Complex breit_wigner_amplitude(const BreitWigner& k, double t) {
  // rho about e0 is even: A = e^{-i e0 t} * 2 Re int_0^inf rho0(x) e^{-ixt} dx,
  // with rho0(x) = (1 / 2 pi i) [(x - i g)^{-1} - (x + i g)^{-1}].
  const EnergyDistribution centred = EnergyDistribution::breit_wigner(k.gamma, 0.0);
  const double x = std::max(0.0, 40.0 / t - k.gamma);
  const Complex ig(0.0, k.gamma);
  auto derivative = [&](int order) {
    const double f = (order % 2 == 0 ? 1.0 : -1.0) * std::tgamma(order + 1.0);
    const Complex diff = std::pow(Complex(x) - ig, -order - 1) - std::pow(Complex(x) + ig, -order - 1);
    // the two poles can cancel at a given order; bound by one pole each
    const double bound = std::abs(f) * std::pow(std::abs(Complex(x) - ig), -order - 1) / std::numbers::pi;
    return TailTerm{f * diff / (2.0 * std::numbers::pi * Complex(0.0, 1.0)), bound};
  };
  const Complex half = panel_sum(centred, t, 0.0, x) + asymptotic_tail(derivative, x, t);
  return std::exp(Complex(0.0, -k.e0 * t)) * (2.0 * half.real());
}

}  // namespace

SurvivalSample exact_survival(const EnergyDistribution& dist, double t) {
  if (!(t >= 0.0)) throw Error(ErrorCode::InvalidInput, "survival needs t >= 0");
  if (t == 0.0) return {0.0, 1.0, 0.0, 1.0, 1.0};
  if (dist.is<GammaHalf>()) {
    const double g = dist.as<GammaHalf>().gamma;
    return from_amplitude(t, 1.0 / std::sqrt(Complex(1.0, g * t)));
  }
  if (dist.is<BreitWigner>()) {
    const auto& k = dist.as<BreitWigner>();
    return from_amplitude(t, std::exp(Complex(-k.gamma * t, -k.e0 * t)));
  }
  if (dist.is<Square>()) {
    const double half = 0.5 * dist.as<Square>().m * t;
    return from_amplitude(t, std::exp(Complex(0.0, -half)) * (std::sin(half) / half));
  }
  return survival_by_quadrature(dist, t);
}

SurvivalSample survival_by_quadrature(const EnergyDistribution& dist, double t) {
  if (!(t >= 0.0)) throw Error(ErrorCode::InvalidInput, "survival needs t >= 0");
  if (t == 0.0) return {0.0, 1.0, 0.0, 1.0, 1.0};
  if (dist.is<Discrete>()) {
    Complex acc = 0.0;
    for (const auto& a : dist.as<Discrete>().atoms) acc += a.weight * std::exp(Complex(0.0, -a.energy * t));
    return from_amplitude(t, acc);
  }
  if (dist.is<PowerLaw>()) return from_amplitude(t, power_law_amplitude(dist.as<PowerLaw>(), dist, t));
  if (dist.is<BreitWigner>()) return from_amplitude(t, breit_wigner_amplitude(dist.as<BreitWigner>(), t));
  if (dist.is<GammaHalf>()) {
    // exp(-40) is below double resolution of the weight.
    return from_amplitude(t, panel_sum(dist, t, 0.0, 40.0 * dist.as<GammaHalf>().gamma));
  }
  return from_amplitude(t, panel_sum(dist, t, dist.lower(), dist.upper()));
}

std::vector<SurvivalSample> exact_curve(const EnergyDistribution& dist,
                                        const std::vector<double>& grid) {
  std::vector<SurvivalSample> out;
  out.reserve(grid.size());
  for (double t : grid) out.push_back(exact_survival(dist, t));
  return out;
}

double autocorrelation(const EnergyDistribution& dist, double eps) {
  if (dist.is<Discrete>()) throw Error(ErrorCode::InvalidInput, "autocorrelation needs a density");
  if (!(eps > 0.0)) throw Error(ErrorCode::InvalidInput, "autocorrelation needs eps > 0");
  auto shifted = [&](double e) { return dist.density(e + eps); };
  quad::Tolerance tol;
  tol.rel = 1e-11;
  return 2.0 * integrate_weighted(dist, shifted, dist.lower(), dist.upper() - eps, tol);
}

}  // namespace survbound
