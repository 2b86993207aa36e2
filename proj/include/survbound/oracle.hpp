#pragma once

// Exact survival amplitude A(t) = int rho(E) exp(-i E t) dE = R(t) - i I(t)
// (hbar = 1), by closed form where one is known and by oscillatory
// quadrature otherwise.

#include <vector>

#include "survbound/distribution.hpp"

namespace survbound {

struct SurvivalSample {
  double t;
  double re;  // R(t) = int rho cos(E t)
  double im;  // I(t) = int rho sin(E t), so A = re - i im
  double abs;
  double p;
};

SurvivalSample exact_survival(const EnergyDistribution& dist, double t);

/// Always by quadrature: half-period panels up to a point where the rest can
/// be summed by repeated integration by parts (or is negligible).
SurvivalSample survival_by_quadrature(const EnergyDistribution& dist, double t);

std::vector<SurvivalSample> exact_curve(const EnergyDistribution& dist,
                                        const std::vector<double>& grid);

/// W(eps) = 2 int rho(E) rho(E + eps) dE, for eps > 0 (continuous kinds only).
double autocorrelation(const EnergyDistribution& dist, double eps);

}  // namespace survbound
