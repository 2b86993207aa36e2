#pragma once

#include <Eigen/Core>

#include <optional>

namespace survbound {

/// Highest moment order the library handles.
inline constexpr int kMaxOrder = 16;

/// Fixed-capacity vector of factorial-scaled moments (no heap allocation).
using MomentArray = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxOrder + 1, 1>;

/// Throws OrderTooLarge for n > kMaxOrder, InvalidInput for n < 0.
void check_order(int n);

/// Energy moments of a unit-weight density in factorial-scaled form,
/// scaled(k) = (1/alpha) * int rho(E) (E - origin)^k / k! dE, taken about a
/// reference energy `origin`. Moments about an origin inside the support keep
/// the moment algebra well conditioned; raw(k) re-expands about zero.
class MomentVector {
 public:
  MomentVector(double origin, Eigen::VectorXd scaled, double alpha = 1.0,
               std::optional<int> divergent_at = {});

  /// From raw moments h_0..h_n about zero (h_0 must be 1).
  static MomentVector from_raw(const Eigen::VectorXd& h);

  int order() const { return static_cast<int>(scaled_.size()) - 1; }
  double origin() const { return origin_; }
  double alpha() const { return alpha_; }
  const Eigen::VectorXd& scaled() const { return scaled_; }
  double scaled(int k) const { return scaled_(k); }

  /// First order at which the moment integral diverges, if any was hit.
  std::optional<int> divergent_at() const { return divergent_at_; }

  /// Throws MomentDivergent{k} or InsufficientOrder unless orders 0..n exist.
  void require(int n) const;

  /// Same moments taken about another origin.
  MomentVector about(double new_origin) const;

  /// Unscaled moment about zero, h_k = <E^k>.
  double raw(int k) const;

 private:
  double origin_;
  Eigen::VectorXd scaled_;
  double alpha_;
  std::optional<int> divergent_at_;
};

}  // namespace survbound
