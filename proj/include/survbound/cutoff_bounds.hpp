#pragma once

// Bounds on |A(t)| from a fixed energy cut-off c. Splitting A = alpha*Abar +
// (1 - alpha)*B with |B| <= 1 gives alpha*|Abar| - (1 - alpha) <= |A| <=
// alpha*|Abar| + (1 - alpha), and the series bounds on |Abar|^2 use the
// moments of the part of rho below c.

#include <optional>
#include <vector>

#include "survbound/distribution.hpp"
#include "survbound/moments.hpp"
#include "survbound/series_bounds.hpp"

namespace survbound {

struct CutoffBoundSpec {
  int order = 2;
  Direction direction = Direction::Lower;
  double cutoff = kInf;
  double alpha = 1.0;
  CorrelationMoments ebar;
  /// Edge moments about the cut; absent when nothing is cut off at infinity.
  std::optional<EdgeMoments> edge;
};

/// Energy of the cut for a cut-off parameter (e0 + c for symmetric windows).
double edge_energy(const EnergyDistribution& dist, double c);

/// Lower limit of meaningful cut-off parameters (the support's lower end, or
/// zero half-width for symmetric windows).
double cutoff_floor(const EnergyDistribution& dist);
/// Upper limit: M, or infinity.
double cutoff_ceiling(const EnergyDistribution& dist);

/// Truncated moments -> e-bar (and edge moments) for cut-off c and order n.
/// c at or beyond the top of the support means no cut-off (alpha = 1).
CutoffBoundSpec build_cutoff_spec(const EnergyDistribution& dist, double c, int n);

/// Same, from precomputed truncated moments. `edge` is the cut energy.
CutoffBoundSpec build_cutoff_spec(const MomentVector& hbar, double c, double edge, int n);

/// Lower: alpha*sqrt(p_n) - (1 - alpha), invalid (value -(1 - alpha)) when
/// p_n < 0. Upper: alpha*sqrt(p_n) + (1 - alpha), invalid (value 1) when
/// rounding makes p_n negative. Unclamped.
BoundValue amplitude_bound(const CutoffBoundSpec& spec, double t);

BoundCurve cutoff_curve(const CutoffBoundSpec& spec, const std::vector<double>& grid);

}  // namespace survbound
