#pragma once

// Algebra connecting energy moments h_k, autocorrelation moments e_n and the
// cut-off edge moments b_n, all in factorial-scaled form (x_k / k!).

#include <Eigen/Core>

#include "survbound/distribution.hpp"
#include "survbound/moment_vector.hpp"
#include "survbound/numeric.hpp"

namespace survbound {

/// Even autocorrelation moments, even(m) = e_{2m} / (2m)!. For a truncated
/// distribution these are the e-bar moments of the renormalized part.
struct CorrelationMoments {
  Eigen::VectorXd even;
  /// Zero-width distribution: every moment beyond order 0 vanishes.
  bool degenerate = false;

  int order() const { return 2 * (static_cast<int>(even.size()) - 1); }
  double scaled(int k) const { return even(k / 2); }
  double unscaled(int k) const { return even(k / 2) * factorial(k); }
  /// (Delta E)^2 = e_2 / 2.
  double variance() const { return even.size() > 1 ? even(1) : 0.0; }
};

/// Edge moments b_k = (1/alpha) int_L^c rho(E) (c - E)^k dE, scaled by 1/k!.
struct EdgeMoments {
  double cutoff;
  Eigen::VectorXd scaled;
  // Unrounded copy from b_from_h. Far from the bulk the series in ebar_from_B
  // cancels by ~(c - <E>)^n / ebar_n, so it reads these when present.
  Eigen::Matrix<long double, Eigen::Dynamic, 1> extended = {};

  int order() const { return static_cast<int>(scaled.size()) - 1; }
  double unscaled(int k) const { return scaled(k) * factorial(k); }
};

/// sum_{j=0}^{k} (-1)^j x_j x_{k-j} for even k <= n, folded as
/// 2 sum_{j<k/2} (-1)^j x_j x_{k-j} + (-1)^{k/2} x_{k/2}^2. With x the scaled
/// moments of E (about any origin) or of (c - E), this is e_k / k!.
/// `largest` receives the largest term magnitude per order.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> correlation_series(
    const Eigen::MatrixBase<Derived>& x, int n,
    Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1>* largest = nullptr) {
  using Scalar = typename Derived::Scalar;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> out(n / 2 + 1);
  if (largest) largest->resize(n / 2 + 1);
  for (int m = 0; m <= n / 2; ++m) {
    const int k = 2 * m;
    CompensatedSum<Scalar> acc;
    for (int j = 0; j < m; ++j) {
      const Scalar term = Scalar(2) * x(j) * x(k - j);
      acc.add(j % 2 == 0 ? term : -term);
    }
    const Scalar mid = x(m) * x(m);
    acc.add(m % 2 == 0 ? mid : -mid);
    out(m) = acc.value();
    if (largest) (*largest)(m) = acc.largest_term();
  }
  return out;
}

/// e-moments from energy moments (shift invariant in the moment origin).
CorrelationMoments e_from_h(const MomentVector& h, int n);

/// e_k = int int rho(E) rho(E') (E - E')^k dE dE' by nested quadrature.
CorrelationMoments e_brute_force(const EnergyDistribution& dist, int n);

/// Edge moments from truncated moments; `edge` is the energy of the cut
/// (c for one-sided cut-offs, e0 + c for a symmetric window).
EdgeMoments b_from_h(const MomentVector& hbar, double edge, int n);

/// Edge moments by direct quadrature of the defining integral.
EdgeMoments edge_moments_direct(const TruncationView& view, int n);

/// e-bar from edge moments: ebar_n / n! = sum_k (-1)^k B_k B_{n-k}.
CorrelationMoments ebar_from_B(const EdgeMoments& b, int n);

}  // namespace survbound
