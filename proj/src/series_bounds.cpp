#include "survbound/series_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "survbound/error.hpp"

namespace survbound {

const char* to_string(Direction d) { return d == Direction::Upper ? "upper" : "lower"; }

const char* to_string(Target t) {
  switch (t) {
    case Target::P: return "P";
    case Target::AbsA: return "absA";
    case Target::Re: return "Re";
    case Target::Im: return "Im";
  }
  return "?";
}

const char* to_string(CutoffMode m) {
  switch (m) {
    case CutoffMode::None: return "none";
    case CutoffMode::Fixed: return "fixed";
    case CutoffMode::Envelope: return "envelope";
  }
  return "?";
}

double p_bound(const CorrelationMoments& e, int n, double t) {
  if (n % 2 != 0 || n < 0) throw Error(ErrorCode::InvalidInput, "p_bound order must be even");
  if (e.order() < n) {
    throw Error(ErrorCode::InsufficientOrder,
                "correlation moments stop at order " + std::to_string(e.order()), n);
  }
  const double eta = t * t;
  double acc = 0.0;
  for (int m = n / 2; m >= 0; --m) acc = acc * eta + (m % 2 == 0 ? e.even(m) : -e.even(m));
  return acc;
}

BoundValue cos2_bound(double delta_e, double t) {
  const double x = delta_e * t;
  if (x > 0.5 * std::numbers::pi) return {0.0, false};
  const double c = std::cos(x);
  return {c * c, true};
}

RiBound ri_bound(const MomentVector& h, int n, double t, double support_lower) {
  if (n < 1) throw Error(ErrorCode::InvalidInput, "real/imaginary bounds start at order 1");
  h.require(n);
  const bool imaginary = (n % 2 == 1);
  if (imaginary && support_lower < 0.0) {
    throw Error(ErrorCode::NegativeSupport,
                "bounds on I(t) need E >= 0 (sin partial sums bound only for x >= 0)");
  }
  const MomentVector about_zero = h.origin() == 0.0 ? h : h.about(0.0);
  // R(t) = sum_even (-1)^{k/2} H_k t^k, I(t) = sum_odd (-1)^{(k-1)/2} H_k t^k.
  double acc = 0.0;
  double tk = imaginary ? t : 1.0;
  for (int k = imaginary ? 1 : 0; k <= n; k += 2) {
    const int sign_index = imaginary ? (k - 1) / 2 : k / 2;
    const double term = about_zero.scaled(k) * tk;
    acc += (sign_index % 2 == 0) ? term : -term;
    tk *= t * t;
  }
  return {imaginary ? Target::Im : Target::Re, direction_for_order(n), acc};
}

double clamp_for(Target target, double v) {
  if (target == Target::P || target == Target::AbsA) return std::clamp(v, 0.0, 1.0);
  return std::clamp(v, -1.0, 1.0);
}

std::vector<double> default_time_grid(double horizon, int points) {
  if (!(horizon > 0.0)) throw Error(ErrorCode::InvalidInput, "time horizon must be positive");
  if (points < 2) throw Error(ErrorCode::InvalidInput, "time grid needs >= 2 points");
  if (points < 16) return linear_time_grid(horizon, points);
  const int n_log = points / 4;
  const int n_lin = points - n_log;
  std::vector<double> grid;
  grid.reserve(points);
  grid.push_back(0.0);
  const double step = horizon / (n_lin - 1);
  const double lo = std::log(1e-4 * horizon);
  const double hi = std::log(0.9 * step);
  for (int i = 0; i < n_log; ++i) grid.push_back(std::exp(lo + (hi - lo) * i / (n_log - 1)));
  for (int i = 1; i < n_lin; ++i) grid.push_back(i == n_lin - 1 ? horizon : i * step);
  return grid;
}

std::vector<double> linear_time_grid(double horizon, int points) {
  if (!(horizon > 0.0)) throw Error(ErrorCode::InvalidInput, "time horizon must be positive");
  if (points < 2) throw Error(ErrorCode::InvalidInput, "time grid needs >= 2 points");
  std::vector<double> grid(points);
  for (int i = 0; i < points; ++i) grid[i] = horizon * i / (points - 1);
  return grid;
}

BoundCurve p_bound_curve(const CorrelationMoments& e, int n, const std::vector<double>& grid) {
  BoundCurve curve;
  curve.order = n;
  curve.direction = direction_for_order(n);
  curve.target = Target::P;
  curve.label = "series_n" + std::to_string(n);
  for (double t : grid) {
    const double raw = p_bound(e, n, t);
    curve.samples.push_back({t, clamp_for(Target::P, raw), raw, true});
  }
  return curve;
}

BoundCurve abs_series_curve(const CorrelationMoments& e, int n, const std::vector<double>& grid) {
  BoundCurve curve = p_bound_curve(e, n, grid);
  curve.target = Target::AbsA;
  for (auto& s : curve.samples) {
    const double p = s.raw_value;
    if (p < 0.0) {
      // sqrt of a negative lower bound carries no information.
      s.raw_value = curve.direction == Direction::Lower ? 0.0 : p;
      s.valid = curve.direction == Direction::Lower;
      s.value = 0.0;
    } else {
      s.raw_value = std::sqrt(p);
      s.value = clamp_for(Target::AbsA, s.raw_value);
    }
  }
  return curve;
}

BoundCurve cos2_curve(double delta_e, const std::vector<double>& grid, Target target) {
  BoundCurve curve;
  curve.order = 2;
  curve.direction = Direction::Lower;
  curve.target = target;
  curve.label = "cos2";
  for (double t : grid) {
    const BoundValue b = cos2_bound(delta_e, t);
    const double v = target == Target::AbsA ? std::sqrt(b.value) : b.value;
    curve.samples.push_back({t, v, v, b.valid});
  }
  return curve;
}

BoundCurve ri_curve(const MomentVector& h, int n, const std::vector<double>& grid,
                    double support_lower) {
  BoundCurve curve;
  curve.order = n;
  curve.direction = direction_for_order(n);
  curve.target = n % 2 == 1 ? Target::Im : Target::Re;
  curve.label = std::string(n % 2 == 1 ? "I" : "R") + "_n" + std::to_string(n);
  for (double t : grid) {
    const RiBound b = ri_bound(h, n, t, support_lower);
    curve.samples.push_back({t, clamp_for(curve.target, b.value), b.value, true});
  }
  return curve;
}

}  // namespace survbound
