#pragma once

// Alternating Taylor-series bounds without a cut-off: on P(t) from the
// autocorrelation moments, the cos^2 lower bound, and on the real and
// imaginary parts of the survival amplitude. Units: hbar = 1.

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "survbound/moments.hpp"

namespace survbound {

enum class Direction { Upper, Lower };
enum class Target { P, AbsA, Re, Im };
enum class CutoffMode { None, Fixed, Envelope };

const char* to_string(Direction d);
const char* to_string(Target t);
const char* to_string(CutoffMode m);

/// Partial sums ending in +x^n/n! bound from above, ending in -x^n/n! from below.
inline Direction direction_for_order(int n) {
  return (n % 4 == 0 || n % 4 == 1) ? Direction::Upper : Direction::Lower;
}

/// sum_{even k <= n} (-1)^{k/2} x^k / k!
template <typename Scalar>
Scalar cos_partial_sum(Scalar x, int n) {
  Scalar term(1);
  Scalar acc(1);
  const Scalar x2 = x * x;
  for (int k = 2; k <= n; k += 2) {
    term *= -x2 / Scalar((k - 1) * k);
    acc += term;
  }
  return acc;
}

/// p_n(t) = sum_{even k <= n} (-1)^{k/2} (e_k / k!) t^k, unclamped.
double p_bound(const CorrelationMoments& e, int n, double t);

struct BoundValue {
  double value;
  bool valid;
};

/// cos^2(Delta E t) inside its window Delta E t <= pi/2, 0 beyond.
BoundValue cos2_bound(double delta_e, double t);

struct RiBound {
  Target target;  // Re for even n, Im for odd n
  Direction direction;
  double value;
};

/// Order-n bound on R(t) (n even) or I(t) (n odd), where A = R - iI.
/// Bounds on I need a spectrum with nonnegative energies.
RiBound ri_bound(const MomentVector& h, int n, double t, double support_lower = 0.0);

struct BoundSample {
  double t;
  double value;
  double raw_value;
  bool valid;
};

struct BoundCurve {
  int order = 0;
  Direction direction = Direction::Lower;
  Target target = Target::P;
  CutoffMode cutoff_mode = CutoffMode::None;
  double cutoff = std::numeric_limits<double>::quiet_NaN();
  std::string label;
  std::vector<BoundSample> samples;
};

/// Clamp to [0, 1] for P and |A|, to [-1, 1] for Re and Im.
double clamp_for(Target target, double v);

/// 0 followed by a logarithmic run that resolves the early window, then an
/// even linear run up to the horizon; `points` values, strictly increasing.
std::vector<double> default_time_grid(double horizon, int points = 512);
/// Evenly spaced grid including both ends.
std::vector<double> linear_time_grid(double horizon, int points);

BoundCurve p_bound_curve(const CorrelationMoments& e, int n, const std::vector<double>& grid);
/// The same bound carried over to |A| = sqrt(P).
BoundCurve abs_series_curve(const CorrelationMoments& e, int n, const std::vector<double>& grid);
BoundCurve cos2_curve(double delta_e, const std::vector<double>& grid, Target target);
BoundCurve ri_curve(const MomentVector& h, int n, const std::vector<double>& grid,
                    double support_lower = 0.0);

}  // namespace survbound
