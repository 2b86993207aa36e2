#include "survbound/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "survbound/error.hpp"
#include "survbound/numeric.hpp"

namespace survbound {

namespace {

void require_edge(const EdgeMoments& b, int n) {
  if (n < 2 || n % 2 != 0) throw Error(ErrorCode::InvalidInput, "envelope order must be even and >= 2");
  check_order(n);
  if (b.order() < n) {
    throw Error(ErrorCode::InsufficientOrder,
                "edge moments stop at order " + std::to_string(b.order()), n);
  }
  if (!(b.scaled(1) > 0.0)) {
    throw Error(ErrorCode::DegenerateEdge, "no weight below the cut-off edge (b_1 = 0)");
  }
}

// Edge moments in units of b_1: bh(k) = B_k / B_1^k.
Eigen::VectorXd unit_edge(const EdgeMoments& b, int n) {
  Eigen::VectorXd bh(n + 1);
  const double b1 = b.scaled(1);
  double p = 1.0;
  for (int k = 0; k <= n; ++k) {
    bh(k) = b.scaled(k) / p;
    p *= b1;
  }
  return bh;
}

// (p - q^2) / eta as a polynomial in u = (b_1 t)^2, ascending coefficients.
// With q = 1 + q' and Ebar_k = 2 B_k + S_k, S_k = sum_{j=1}^{k-1} (-1)^j B_j B_{k-j},
// the constant and linear parts cancel exactly:
//   p - q^2 = sum_m (-1)^m S_{2m} eta^m - q'^2.
Eigen::VectorXd condition_polynomial(const Eigen::VectorXd& bh, int n) {
  const int half = n / 2;
  auto qcoef = [&](int m) { return (m % 2 == 0 ? 1.0 : -1.0) * bh(2 * m); };
  Eigen::VectorXd poly(n);
  for (int m = 1; m <= n; ++m) {
    CompensatedSum<double> acc;
    if (m <= half) {
      const int k = 2 * m;
      for (int j = 1; j < k; ++j) {
        const double term = bh(j) * bh(k - j);
        acc.add(((j + m) % 2 == 0) ? term : -term);
      }
    }
    for (int i = std::max(1, m - half); i <= std::min(half, m - 1); ++i) {
      acc.add(-qcoef(i) * qcoef(m - i));
    }
    poly(m - 1) = acc.value();
  }
  Eigen::Index size = poly.size();
  while (size > 1 && poly(size - 1) == 0.0) --size;
  return poly.head(size);
}

double unit_edge_series(const Eigen::VectorXd& bh, int n, double u) {
  double acc = 0.0;
  for (int m = n / 2; m >= 1; --m) acc = (acc + (m % 2 == 0 ? bh(2 * m) : -bh(2 * m))) * u;
  return 1.0 + acc;
}

bool admissible(Direction d, double q) {
  constexpr double kZero = 1e-14;
  return d == Direction::Upper ? q > -kZero : q < kZero;
}

bool improves(Direction d, double candidate, double incumbent) {
  return d == Direction::Lower ? candidate > incumbent : candidate < incumbent;
}

}  // namespace

double edge_series(const EdgeMoments& b, int n, double t) {
  const double eta = t * t;
  double acc = 0.0;
  for (int m = n / 2; m >= 0; --m) acc = acc * eta + (m % 2 == 0 ? b.scaled(2 * m) : -b.scaled(2 * m));
  return acc;
}

double envelope_equation_residual(const EdgeMoments& b, const CorrelationMoments& ebar, int n,
                                  double t) {
  const double q = edge_series(b, n, t);
  return p_bound(ebar, n, t) - q * q;
}

double t_of_c_quadratic(const EdgeMoments& b) {
  if (b.order() < 2) throw Error(ErrorCode::InsufficientOrder, "quadratic envelope needs b_2", 2);
  if (!(b.scaled(2) > 0.0)) throw Error(ErrorCode::DegenerateEdge, "b_2 = 0 at the cut-off");
  // 2 b_1 / b_2 = B_1 / B_2
  return b.scaled(1) / b.scaled(2);
}

QuarticSolution solve_quartic_envelope(const EdgeMoments& b) {
  require_edge(b, 4);
  const double b1 = b.unscaled(1);
  const double b2 = b.unscaled(2);
  const double b3 = b.unscaled(3);
  const double b4 = b.unscaled(4);
  const double d1 = b1 * b3 - b2 * b2;
  if (!(d1 > 1e-12 * b2 * b2)) {
    throw Error(ErrorCode::DegenerateEdge,
                "b1 b3 - b2^2 = " + std::to_string(d1) + " leaves the quartic envelope undefined");
  }
  const double d3 = (16.0 * b2 * b2 * b2 - 24.0 * b1 * b2 * b3 + 9.0 * b1 * b1 * b4) / 16.0;
  const double root = std::sqrt(d1 * d1 * d1 + d3 * d3);
  // (root - d3)(root + d3) = d1^3; take whichever form avoids cancellation.
  const double d2 = d3 > 0.0 ? d1 / std::cbrt(root + d3) : std::cbrt(root - d3);
  const double t2 = 8.0 * (b2 - d2 + d1 / d2) / b4;
  if (!(t2 > 0.0)) throw Error(ErrorCode::NoPositiveRoot, "quartic closed form gave t^2 <= 0");
  const double t = std::sqrt(t2);

  const Eigen::VectorXd bh = unit_edge(b, 4);
  Eigen::VectorXd cubic(4);
  cubic << 1.0, -2.0 * bh(3), 2.0 * bh(2) * bh(4), -bh(4) * bh(4);
  const std::vector<double> roots = positive_real_roots(cubic);
  double best = std::numeric_limits<double>::quiet_NaN();
  for (double u : roots) {
    const double candidate = std::sqrt(u) / b.scaled(1);
    if (std::isnan(best) || std::abs(candidate - t) < std::abs(best - t)) best = candidate;
  }
  if (std::isnan(best) || std::abs(best - t) > 1e-8 * t) {
    throw Error(ErrorCode::RootMismatch, "quartic closed form t = " + std::to_string(t) +
                                             " has no matching cubic root");
  }
  return {t, best, d1, d2, d3};
}

double t_of_c_quartic(const EdgeMoments& b) { return solve_quartic_envelope(b).t; }

std::vector<double> t_of_c_numeric(const EdgeMoments& b, int n) {
  require_edge(b, n);
  const Eigen::VectorXd bh = unit_edge(b, n);
  std::vector<double> out;
  for (double u : positive_real_roots(condition_polynomial(bh, n))) {
    out.push_back(std::sqrt(u) / b.scaled(1));
  }
  if (out.empty()) throw Error(ErrorCode::NoPositiveRoot, "envelope condition has no positive root");
  return out;
}

std::optional<EnvelopeTime> envelope_time(const EdgeMoments& b, int n) {
  require_edge(b, n);
  const Direction dir = direction_for_order(n);
  const Eigen::VectorXd bh = unit_edge(b, n);
  std::optional<EnvelopeTime> first;
  int count = 0;
  for (double u : positive_real_roots(condition_polynomial(bh, n))) {
    const double q = unit_edge_series(bh, n, u);
    if (!admissible(dir, q)) continue;
    ++count;
    if (!first) first = EnvelopeTime{std::sqrt(u) / b.scaled(1), q, 0};
  }
  if (first) first->n_roots = count;
  return first;
}

std::vector<double> default_cutoff_grid(const EnergyDistribution& dist, int points) {
  if (points < 2) throw Error(ErrorCode::InvalidInput, "cut-off grid needs >= 2 points");
  if (dist.is<Discrete>()) {
    throw Error(ErrorCode::InvalidInput, "discrete spectra use a cut-off schedule, not a grid");
  }
  const double floor = cutoff_floor(dist);
  // Finite support ends the grid exactly at M so the tail is the bound
  // without cut-off.
  const double ceiling = cutoff_ceiling(dist);
  const double top = std::isfinite(ceiling) ? ceiling : cutoff_for_alpha(dist, 1.0 - 1e-6);
  const double lo = 1e-3 * dist.scale();
  const double hi = top - floor;
  if (!(hi > lo)) throw Error(ErrorCode::InvalidInput, "support too narrow for a cut-off grid");
  std::vector<double> grid(points);
  const double llo = std::log(lo);
  const double lhi = std::log(hi);
  for (int i = 0; i < points; ++i) {
    grid[i] = i == points - 1 ? top : floor + std::exp(llo + (lhi - llo) * i / (points - 1));
  }
  return grid;
}

EnvelopeResult sweep_envelope(const EnergyDistribution& dist, int n,
                              const std::vector<double>& c_grid) {
  if (dist.is<Discrete>()) {
    throw Error(ErrorCode::InvalidInput, "discrete spectra have no envelope; use discrete_schedule");
  }
  if (c_grid.empty()) throw Error(ErrorCode::InvalidInput, "empty cut-off grid");
  if (!std::is_sorted(c_grid.begin(), c_grid.end())) {
    throw Error(ErrorCode::InvalidInput, "cut-off grid must be increasing");
  }
  EnvelopeResult env{.order = n,
                     .direction = direction_for_order(n),
                     .points = {},
                     .multi_root_cutoffs = {},
                     .tail = {},
                     .tail_end = 0.0,
                     .distribution = dist,
                     .grid = c_grid,
                     .times = {},
                     .specs = {}};
  for (double c : c_grid) {
    CutoffBoundSpec spec = build_cutoff_spec(dist, c, n);
    std::optional<EnvelopeTime> et;
    if (spec.edge) {
      try {
        et = envelope_time(*spec.edge, n);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::DegenerateEdge) throw;
      }
    }
    if (et) {
      env.points.push_back({c, et->t, amplitude_bound(spec, et->t).value, spec.alpha, et->n_roots});
      if (et->n_roots > 1) env.multi_root_cutoffs.push_back(c);
    }
    env.times.push_back(et);
    env.specs.push_back(std::move(spec));
  }
  if (env.points.empty()) {
    throw Error(ErrorCode::EmptyEnvelope, "no cut-off in the grid gives an envelope time", n);
  }
  env.tail = env.specs.back();
  env.tail_end = env.times.back() ? env.times.back()->t : 0.0;
  std::stable_sort(env.points.begin(), env.points.end(),
                   [](const EnvelopePoint& a, const EnvelopePoint& b) { return a.t < b.t; });
  return env;
}

EnvelopeEvaluation envelope_value_at(const EnvelopeResult& env, double t) {
  const Direction dir = env.direction;
  EnvelopeEvaluation best{amplitude_bound(env.tail, t).value, env.tail.cutoff, true};
  auto consider = [&](const CutoffBoundSpec& spec) {
    const double v = amplitude_bound(spec, t).value;
    if (improves(dir, v, best.value)) best = {v, spec.cutoff, false};
  };
  for (const auto& spec : env.specs) consider(spec);

  // Refine the cut-off inside every grid interval where t(c) crosses t.
  const auto& times = env.times;
  for (std::size_t i = 0; i + 1 < times.size(); ++i) {
    if (!times[i] || !times[i + 1]) continue;
    const double ta = times[i]->t - t;
    const double tb = times[i + 1]->t - t;
    if (ta * tb > 0.0 || ta == 0.0 || tb == 0.0) continue;
    auto offset = [&](double c) {
      const CutoffBoundSpec spec = build_cutoff_spec(env.distribution, c, env.order);
      const auto et = envelope_time(*spec.edge, env.order);
      if (!et) throw Error(ErrorCode::NoPositiveRoot, "lost the envelope root while refining");
      return et->t - t;
    };
    try {
      // y(t, c) is stationary in c at t = t(c): a loose c tolerance suffices.
      const auto c = bracketed_root(offset, env.grid[i], env.grid[i + 1], 1e-9, 100);
      if (c) consider(build_cutoff_spec(env.distribution, *c, env.order));
    } catch (const Error&) {
      // The grid specs already considered remain valid bounds.
    }
  }
  return best;
}

BoundCurve envelope_curve(const EnvelopeResult& env, const std::vector<double>& grid) {
  BoundCurve curve;
  curve.order = env.order;
  curve.direction = env.direction;
  curve.target = Target::AbsA;
  curve.cutoff_mode = CutoffMode::Envelope;
  curve.label = "envelope_n" + std::to_string(env.order);
  for (double t : grid) {
    const double v = envelope_value_at(env, t).value;
    curve.samples.push_back({t, clamp_for(Target::AbsA, v), v, true});
  }
  return curve;
}

SquareEnvelopeConstants square_envelope_constants(int n) {
  if (n == kInfiniteOrder) return {2.0 * std::numbers::pi, 0.0, 0.0};
  check_order(n);
  EdgeMoments b{1.0, Eigen::VectorXd(n + 1)};
  for (int k = 0; k <= n; ++k) b.scaled(k) = 1.0 / factorial(k + 1);
  const auto et = envelope_time(b, n);
  if (!et) throw Error(ErrorCode::NoPositiveRoot, "no square-spectrum envelope root", n);
  return {et->t, std::abs(et->q), et->q};
}

double square_envelope_value(int n, double m, double t) {
  const SquareEnvelopeConstants k = square_envelope_constants(n);
  const double x = k.tau / (m * t);
  if (n == kInfiniteOrder || direction_for_order(n) == Direction::Upper) {
    return 1.0 - (1.0 - k.sigma) * x;
  }
  return (1.0 + k.sigma) * x - 1.0;
}

DiscreteSchedule discrete_schedule(const EnergyDistribution& dist, int n) {
  if (!dist.is<Discrete>()) throw Error(ErrorCode::InvalidInput, "schedule needs a discrete spectrum");
  const auto& atoms = dist.as<Discrete>().atoms;
  if (atoms.size() < 2) throw Error(ErrorCode::InvalidInput, "schedule needs at least two atoms");
  check_order(n);
  const std::size_t top = atoms.size() - 1;
  const double nan = std::numeric_limits<double>::quiet_NaN();

  DiscreteSchedule schedule;
  schedule.order = n;
  schedule.direction = direction_for_order(n);

  // Interval j keeps atoms 0..j for every c in [E_j, E_{j+1}); its window
  // starts at t_j(E_{j+1}) and ends where interval j-1 takes over.
  std::vector<ScheduleSegment> by_interval;
  double previous_start = kInf;
  for (std::size_t j = 0; j < top; ++j) {
    const double c_lo = atoms[j].energy;
    const double c_hi = atoms[j + 1].energy;
    const MomentVector hbar = truncated_moments(dist, c_lo, n);
    CutoffBoundSpec spec = build_cutoff_spec(hbar, c_lo, c_hi, n);
    double start = nan;
    try {
      if (const auto et = envelope_time(*spec.edge, n)) start = et->t;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DegenerateEdge) throw;
    }
    by_interval.push_back({c_lo, c_hi, std::move(spec), start, previous_start});
    previous_start = start;
  }
  const MomentVector h = truncated_moments(dist, atoms[top].energy, n);
  CutoffBoundSpec full = build_cutoff_spec(h, kInf, kInf, n);
  by_interval.push_back({atoms[top].energy, kInf, std::move(full), 0.0, previous_start});

  schedule.segments.assign(by_interval.rbegin(), by_interval.rend());
  return schedule;
}

BoundValue schedule_value_at(const DiscreteSchedule& schedule, double t) {
  std::optional<BoundValue> best;
  for (const auto& seg : schedule.segments) {
    if (!(t >= seg.t_begin && t < seg.t_end)) continue;
    const BoundValue v = amplitude_bound(seg.spec, t);
    if (!best || improves(schedule.direction, v.value, best->value)) best = v;
  }
  if (best) return *best;
  // Outside every window (a missing root): any segment still gives a bound.
  for (const auto& seg : schedule.segments) {
    const BoundValue v = amplitude_bound(seg.spec, t);
    if (!best || improves(schedule.direction, v.value, best->value)) best = v;
  }
  return *best;
}

BoundCurve schedule_curve(const DiscreteSchedule& schedule, const std::vector<double>& grid) {
  BoundCurve curve;
  curve.order = schedule.order;
  curve.direction = schedule.direction;
  curve.target = Target::AbsA;
  curve.cutoff_mode = CutoffMode::Envelope;
  curve.label = "schedule_n" + std::to_string(schedule.order);
  for (double t : grid) {
    const BoundValue v = schedule_value_at(schedule, t);
    curve.samples.push_back({t, clamp_for(Target::AbsA, v.value), v.value, v.valid});
  }
  return curve;
}

CompositeBound composite_bound(const EnergyDistribution& dist, const std::vector<int>& orders,
                               const std::vector<double>& grid) {
  CompositeBound out;
  out.t = grid;
  out.lower.assign(grid.size(), 0.0);
  out.upper.assign(grid.size(), 1.0);
  out.lower_source.assign(grid.size(), "trivial");
  out.upper_source.assign(grid.size(), "trivial");

  auto offer = [&](std::size_t i, Direction d, double v, const std::string& source) {
    if (d == Direction::Lower && v > out.lower[i]) {
      out.lower[i] = v;
      out.lower_source[i] = source;
    } else if (d == Direction::Upper && v < out.upper[i]) {
      out.upper[i] = v;
      out.upper_source[i] = source;
    }
  };

  int top_order = 2;
  for (int n : orders) {
    if (n < 2 || n % 2 != 0) throw Error(ErrorCode::InvalidInput, "orders must be even and >= 2");
    check_order(n);
    top_order = std::max(top_order, n);
  }

  // Series bounds without a cut-off, as far as the moments exist.
  if (!dist.is<BreitWigner>()) {
    const MomentVector h = raw_moments(dist, top_order);
    for (int n : orders) {
      if (h.order() < n) continue;
      const CorrelationMoments e = e_from_h(h, n);
      const Direction d = direction_for_order(n);
      const std::string source = "series_n" + std::to_string(n);
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const double p = p_bound(e, n, grid[i]);
        if (p >= 0.0) offer(i, d, std::sqrt(p), source);
      }
    }
    if (h.order() >= 2) {
      const CorrelationMoments e = e_from_h(h, 2);
      const double delta_e = std::sqrt(e.variance());
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const BoundValue b = cos2_bound(delta_e, grid[i]);
        if (b.valid) offer(i, Direction::Lower, std::sqrt(b.value), "cos2");
      }
    }
  }

  if (dist.is<Discrete>()) {
    if (dist.as<Discrete>().atoms.size() >= 2) {
      for (int n : orders) {
        const DiscreteSchedule s = discrete_schedule(dist, n);
        const std::string source = "schedule_n" + std::to_string(n);
        // Every interval's bound holds at every time, not only in its window.
        for (std::size_t i = 0; i < grid.size(); ++i) {
          for (const auto& seg : s.segments) {
            offer(i, s.direction, amplitude_bound(seg.spec, grid[i]).value, source);
          }
        }
      }
    }
    return out;
  }

  const std::vector<double> c_grid = default_cutoff_grid(dist);
  for (int n : orders) {
    std::optional<EnvelopeResult> env;
    try {
      env = sweep_envelope(dist, n, c_grid);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::EmptyEnvelope) continue;
      throw;
    }
    const std::string source = "envelope_n" + std::to_string(n);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      offer(i, env->direction, envelope_value_at(*env, grid[i]).value, source);
    }
  }
  return out;
}

}  // namespace survbound
