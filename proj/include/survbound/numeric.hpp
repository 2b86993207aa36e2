#pragma once

// Small numerical helpers shared by the moment algebra and the envelope code.

#include <Eigen/Core>

#include <cmath>
#include <functional>
#include <optional>
#include <vector>

namespace survbound {

/// Neumaier-compensated accumulator.
template <typename Scalar>
class CompensatedSum {
 public:
  void add(Scalar x) {
    const Scalar t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
    largest_ = std::max(largest_, Scalar(std::abs(x)));
  }
  Scalar value() const { return sum_ + carry_; }
  /// Largest magnitude among the added terms, for cancellation guards.
  Scalar largest_term() const { return largest_; }

 private:
  Scalar sum_{0};
  Scalar carry_{0};
  Scalar largest_{0};
};

/// Horner evaluation of sum_k coeffs[k] x^k.
template <typename Derived>
typename Derived::Scalar polyval(const Eigen::MatrixBase<Derived>& coeffs,
                                 typename Derived::Scalar x) {
  typename Derived::Scalar acc(0);
  for (Eigen::Index k = coeffs.size() - 1; k >= 0; --k) acc = acc * x + coeffs(k);
  return acc;
}

inline double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

/// Positive real roots of sum_k coeffs[k] x^k (ascending coefficients), from
/// the companion-matrix eigenvalues, polished by Newton steps, sorted and
/// de-duplicated.
std::vector<double> positive_real_roots(const Eigen::VectorXd& coeffs);

/// Root of a continuous f on [lo, hi] with f(lo), f(hi) of opposite sign
/// (Illinois variant of regula falsi).
std::optional<double> bracketed_root(const std::function<double(double)>& f, double lo,
                                     double hi, double rel_tol = 1e-14, int max_iter = 200);

}  // namespace survbound
