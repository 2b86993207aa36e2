#include "survbound/moment_vector.hpp"

#include <cmath>
#include <string>

#include "survbound/error.hpp"
#include "survbound/numeric.hpp"

namespace survbound {

void check_order(int n) {
  if (n < 0) throw Error(ErrorCode::InvalidInput, "negative moment order");
  if (n > kMaxOrder) {
    throw Error(ErrorCode::OrderTooLarge,
                "order " + std::to_string(n) + " exceeds " + std::to_string(kMaxOrder), n);
  }
}

MomentVector::MomentVector(double origin, Eigen::VectorXd scaled, double alpha,
                           std::optional<int> divergent_at)
    : origin_(origin), scaled_(std::move(scaled)), alpha_(alpha), divergent_at_(divergent_at) {
  if (scaled_.size() == 0) throw Error(ErrorCode::InvalidInput, "empty moment vector");
  if (scaled_.size() - 1 > kMaxOrder) check_order(static_cast<int>(scaled_.size()) - 1);
}

MomentVector MomentVector::from_raw(const Eigen::VectorXd& h) {
  Eigen::VectorXd scaled(h.size());
  for (Eigen::Index k = 0; k < h.size(); ++k) scaled(k) = h(k) / factorial(static_cast<int>(k));
  return MomentVector(0.0, scaled);
}

void MomentVector::require(int n) const {
  if (n <= order()) return;
  if (divergent_at_ && *divergent_at_ <= n) {
    throw Error(ErrorCode::MomentDivergent,
                "energy moment h_" + std::to_string(*divergent_at_) + " does not exist",
                *divergent_at_);
  }
  throw Error(ErrorCode::InsufficientOrder,
              "need moments through order " + std::to_string(n) + ", have " +
                  std::to_string(order()),
              n);
}

MomentVector MomentVector::about(double new_origin) const {
  // (E - o') = (E - o) + d, so M'_k = sum_j M_j d^{k-j} / (k-j)!
  const double d = origin_ - new_origin;
  Eigen::VectorXd shifted(scaled_.size());
  for (int k = 0; k <= order(); ++k) {
    CompensatedSum<double> acc;
    double p = 1.0;  // d^{k-j} / (k-j)!
    for (int j = k; j >= 0; --j) {
      acc.add(scaled_(j) * p);
      p *= d / (k - j + 1);
    }
    shifted(k) = acc.value();
  }
  return MomentVector(new_origin, shifted, alpha_, divergent_at_);
}

double MomentVector::raw(int k) const {
  require(k);
  const double s = origin_ == 0.0 ? scaled_(k) : about(0.0).scaled(k);
  return s * factorial(k);
}

}  // namespace survbound
