#include "survbound/cutoff_bounds.hpp"

#include <cmath>
#include <sstream>

#include "survbound/error.hpp"

namespace survbound {

double edge_energy(const EnergyDistribution& dist, double c) {
  return dist.symmetric_cutoff() ? dist.as<BreitWigner>().e0 + c : c;
}

double cutoff_floor(const EnergyDistribution& dist) {
  return dist.symmetric_cutoff() ? 0.0 : dist.lower();
}

double cutoff_ceiling(const EnergyDistribution& dist) {
  return dist.symmetric_cutoff() ? kInf : dist.upper();
}

CutoffBoundSpec build_cutoff_spec(const MomentVector& hbar, double c, double edge, int n) {
  if (n < 2 || n % 2 != 0) throw Error(ErrorCode::InvalidInput, "cut-off bounds need even n >= 2");
  hbar.require(n);
  CutoffBoundSpec spec;
  spec.order = n;
  spec.direction = direction_for_order(n);
  spec.cutoff = c;
  spec.alpha = hbar.alpha();
  spec.ebar = e_from_h(hbar, n);
  if (std::isfinite(edge)) spec.edge = b_from_h(hbar, edge, n);
  return spec;
}

CutoffBoundSpec build_cutoff_spec(const EnergyDistribution& dist, double c, int n) {
  check_order(n);
  if (!(c > cutoff_floor(dist)) && !dist.is<Discrete>()) {
    throw Error(ErrorCode::CutoffOutOfSupport, "cut-off must lie above the lower end of the support");
  }
  if (c >= cutoff_ceiling(dist) && std::isinf(c)) {
    const MomentVector h = raw_moments(dist, n);
    return build_cutoff_spec(h, c, kInf, n);
  }
  const MomentVector hbar = truncated_moments(dist, c, n);
  return build_cutoff_spec(hbar, c, edge_energy(dist, c), n);
}

BoundValue amplitude_bound(const CutoffBoundSpec& spec, double t) {
  const double a = spec.alpha;
  const double p = spec.ebar.degenerate ? 1.0 : p_bound(spec.ebar, spec.order, t);
  if (spec.direction == Direction::Lower) {
    if (p < 0.0) return {-(1.0 - a), false};
    return {a * std::sqrt(p) - (1.0 - a), true};
  }
  // p_n >= |Abar|^2 >= 0 for upper orders, so p < 0 is rounding; fall back
  // to the trivial bound.
  if (p < 0.0) return {1.0, false};
  return {a * std::sqrt(p) + (1.0 - a), true};
}

BoundCurve cutoff_curve(const CutoffBoundSpec& spec, const std::vector<double>& grid) {
  BoundCurve curve;
  curve.order = spec.order;
  curve.direction = spec.direction;
  curve.target = Target::AbsA;
  curve.cutoff_mode = std::isinf(spec.cutoff) ? CutoffMode::None : CutoffMode::Fixed;
  curve.cutoff = spec.cutoff;
  std::ostringstream label;
  label << "fixed_n" << spec.order << "_c";
  if (std::isinf(spec.cutoff)) {
    label << "inf";
  } else {
    label << spec.cutoff;
  }
  curve.label = label.str();
  for (double t : grid) {
    const BoundValue b = amplitude_bound(spec, t);
    curve.samples.push_back({t, clamp_for(Target::AbsA, b.value), b.value, b.valid});
  }
  return curve;
}

}  // namespace survbound
