#pragma once

// Envelopes of the fixed-cut-off bounds as the cut-off varies. Setting
// d/dc y(t, c) = 0 reduces, in factorial-scaled edge moments B_k, to
//   sum_{even k} (-1)^{k/2} Ebar_k t^k = q(t)^2,
//   q(t) = sum_{even k} (-1)^{k/2} B_k t^k,
// whose positive root is the osculation time t(c). At that time sqrt(p_n)
// equals |q|; upper envelopes need q > 0 and lower envelopes q < 0.

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "survbound/cutoff_bounds.hpp"
#include "survbound/distribution.hpp"
#include "survbound/moments.hpp"
#include "survbound/series_bounds.hpp"

namespace survbound {

/// Stand-in order for the n -> infinity limit of the square-spectrum envelope.
inline constexpr int kInfiniteOrder = std::numeric_limits<int>::max();

/// p_n(t) - q(t)^2 in the scaled moments; zero at t = 0 and at t(c).
double envelope_equation_residual(const EdgeMoments& b, const CorrelationMoments& ebar, int n,
                                  double t);

/// q(t) = sum_{even k <= n} (-1)^{k/2} B_k t^k.
double edge_series(const EdgeMoments& b, int n, double t);

/// n = 2: t = 2 b_1 / b_2.
double t_of_c_quadratic(const EdgeMoments& b);

struct QuarticSolution {
  double t;          // from the closed form
  double t_numeric;  // matching root of the cubic in t^2
  double d1;
  double d2;
  double d3;
};

/// n = 4 closed form, cross-checked against the companion-matrix root of
/// B1^2 - 2 B1 B3 eta + 2 B2 B4 eta^2 - B4^2 eta^3 = 0 (eta = t^2).
QuarticSolution solve_quartic_envelope(const EdgeMoments& b);
double t_of_c_quartic(const EdgeMoments& b);

/// Every positive root of the envelope condition for order n, ascending.
std::vector<double> t_of_c_numeric(const EdgeMoments& b, int n);

struct EnvelopeTime {
  double t;
  double q;     // edge series at t; sqrt(p_n) = |q|
  int n_roots;  // positive roots of the condition with the right sign of q
};

/// Smallest positive root whose q has the sign required by the order's direction.
std::optional<EnvelopeTime> envelope_time(const EdgeMoments& b, int n);

struct EnvelopePoint {
  double c;
  double t;
  double value;  // amplitude_bound at (t, c), unclamped
  double alpha;
  int n_roots;
};

struct EnvelopeResult {
  int order = 2;
  Direction direction = Direction::Lower;
  /// Envelope points ordered by t.
  std::vector<EnvelopePoint> points;
  /// Cut-offs at which more than one admissible root appeared.
  std::vector<double> multi_root_cutoffs;
  /// Fixed bound at the largest cut-off of the grid (c = M for finite
  /// support); it is the bound to use for t below `tail_end`.
  CutoffBoundSpec tail;
  double tail_end = 0.0;

  // Sweep data kept for evaluating the envelope at arbitrary times.
  EnergyDistribution distribution;
  std::vector<double> grid;
  std::vector<std::optional<EnvelopeTime>> times;  // per grid cut-off
  std::vector<CutoffBoundSpec> specs;               // per grid cut-off
};

/// 256 cut-offs, logarithmic in c - L, from L + 1e-3 * scale up to M, or for
/// unbounded spectra up to the cut-off that keeps 1 - 1e-6 of the weight.
std::vector<double> default_cutoff_grid(const EnergyDistribution& dist, int points = 256);

/// Envelope over a grid of cut-offs (continuous distributions only).
EnvelopeResult sweep_envelope(const EnergyDistribution& dist, int n,
                              const std::vector<double>& c_grid);

struct EnvelopeEvaluation {
  double value;
  double cutoff;  // cut-off whose fixed bound supplied the value
  bool from_tail;
};

/// The best fixed-cut-off bound near the envelope at time t. The cut-off is
/// refined until t(c) = t, so the value is an exact member of the family and
/// therefore a rigorous bound.
EnvelopeEvaluation envelope_value_at(const EnvelopeResult& env, double t);

BoundCurve envelope_curve(const EnvelopeResult& env, const std::vector<double>& grid);

struct SquareEnvelopeConstants {
  double tau;
  double sigma;
  double q;  // signed edge series at tau
};

/// tau_n and sigma_n for rho = 1/M on [0, M]: t(c) = tau_n / c and the
/// envelope is 1 - (1 - sigma) tau / (M t) (upper) or (1 + sigma) tau / (M t) - 1.
SquareEnvelopeConstants square_envelope_constants(int n);

/// The closed envelope of the square spectrum; valid for t > tau_n / M.
double square_envelope_value(int n, double m, double t);

struct ScheduleSegment {
  double c_lo;  // cut-off interval [c_lo, c_hi); infinite c_hi for no cut-off
  double c_hi;
  CutoffBoundSpec spec;
  double t_begin;  // time window [t_begin, t_end)
  double t_end;
};

struct DiscreteSchedule {
  int order = 2;
  Direction direction = Direction::Lower;
  /// Ordered by t_begin; the last segment uses no cut-off.
  std::vector<ScheduleSegment> segments;
};

/// The bound is constant while c moves between two atoms; each interval is
/// used in the window between its t(c) at the two ends.
DiscreteSchedule discrete_schedule(const EnergyDistribution& dist, int n);

/// Bound of the segment whose window contains t (best of them if windows overlap).
BoundValue schedule_value_at(const DiscreteSchedule& schedule, double t);

BoundCurve schedule_curve(const DiscreteSchedule& schedule, const std::vector<double>& grid);

struct CompositeBound {
  std::vector<double> t;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<std::string> lower_source;
  std::vector<std::string> upper_source;
};

/// Pointwise best over every available bound on |A(t)|: series (via sqrt P),
/// cos^2, envelopes or discrete schedules with their tails, and the trivial
/// 0 and 1. Orders that cannot be used for this distribution are skipped.
CompositeBound composite_bound(const EnergyDistribution& dist, const std::vector<int>& orders,
                               const std::vector<double>& grid);

}  // namespace survbound
