#include "survbound/moments.hpp"

#include <cmath>
#include <string>

#include "survbound/error.hpp"

namespace survbound {

namespace {

constexpr double kGuard = 1e-12;

void check_even_order(int n) {
  check_order(n);
  if (n % 2 != 0) throw Error(ErrorCode::InvalidInput, "correlation order must be even");
}

CorrelationMoments finish(const Eigen::VectorXd& values, const Eigen::VectorXd& largest) {
  CorrelationMoments out{values, false};
  if (values.size() > 1 && std::abs(values(1)) <= kGuard * largest(1)) {
    out.even.tail(values.size() - 1).setZero();
    out.degenerate = true;
    return out;
  }
  for (Eigen::Index m = 1; m < values.size(); ++m) {
    if (values(m) <= kGuard * largest(m)) {
      throw Error(ErrorCode::NonPositiveCorrelationMoment,
                  "e_" + std::to_string(2 * m) + "/" + std::to_string(2 * m) +
                      "! = " + std::to_string(values(m)),
                  static_cast<int>(2 * m));
    }
  }
  return out;
}

}  // namespace

CorrelationMoments e_from_h(const MomentVector& h, int n) {
  check_even_order(n);
  h.require(n);
  Eigen::VectorXd largest;
  const Eigen::VectorXd values = correlation_series(h.scaled().head(n + 1), n, &largest);
  return finish(values, largest);
}

CorrelationMoments ebar_from_B(const EdgeMoments& b, int n) {
  check_even_order(n);
  if (b.order() < n) {
    throw Error(ErrorCode::InsufficientOrder, "edge moments stop before order " + std::to_string(n),
                n);
  }
  if (b.extended.size() > n) {
    Eigen::Matrix<long double, Eigen::Dynamic, 1> largest;
    const auto values = correlation_series(b.extended.head(n + 1), n, &largest);
    return finish(values.cast<double>(), largest.cast<double>());
  }
  Eigen::VectorXd largest;
  const Eigen::VectorXd values = correlation_series(b.scaled.head(n + 1), n, &largest);
  return finish(values, largest);
}

EdgeMoments b_from_h(const MomentVector& hbar, double edge, int n) {
  check_order(n);
  hbar.require(n);
  // (c - E) = (c - o) - (E - o): B_k = sum_j (c - o)^{k-j} / (k-j)! (-1)^j M_j
  const long double d = static_cast<long double>(edge) - hbar.origin();
  Eigen::Matrix<long double, Eigen::Dynamic, 1> b(n + 1);
  for (int k = 0; k <= n; ++k) {
    CompensatedSum<long double> acc;
    long double p = 1.0L;
    for (int j = k; j >= 0; --j) {
      const long double term = p * hbar.scaled(j);
      acc.add(j % 2 == 0 ? term : -term);
      p *= d / (k - j + 1);
    }
    long double v = acc.value();
    const long double guard = kGuard * acc.largest_term();
    if (v < -guard) {
      throw Error(ErrorCode::NonPositiveEdgeMoment,
                  "b_" + std::to_string(k) + " = " + std::to_string(double(v) * factorial(k)), k);
    }
    if (v <= guard) v = 0.0L;
    b(k) = v;
  }
  return {edge, b.cast<double>(), b};
}

EdgeMoments edge_moments_direct(const TruncationView& view, int n) {
  check_order(n);
  const double edge = view.upper;
  const double unit = view.upper - view.lower;
  quad::Tolerance tol;
  tol.abs = 1e-300;
  tol.rel = 1e-13;
  auto integrand = [&](double e) -> MomentArray {
    MomentArray out(n + 1);
    out(0) = 1.0;
    const double x = (edge - e) / unit;
    for (int k = 1; k <= n; ++k) out(k) = out(k - 1) * x / k;
    return out;
  };
  MomentArray raw = integrate_weighted(view.base, integrand, view.lower, view.upper, tol);
  Eigen::VectorXd b(n + 1);
  double p = 1.0;
  for (int k = 0; k <= n; ++k) {
    b(k) = raw(k) / raw(0) * p;
    p *= unit;
  }
  return {edge, b};
}

CorrelationMoments e_brute_force(const EnergyDistribution& dist, int n) {
  check_even_order(n);
  const int terms = n / 2 + 1;
  const double unit = dist.scale();
  quad::Tolerance inner_tol;
  inner_tol.abs = 1e-300;
  inner_tol.rel = 1e-12;
  quad::Tolerance outer_tol;
  outer_tol.abs = 1e-300;
  outer_tol.rel = 1e-10;

  auto pair_terms = [&](double e, double e2) -> MomentArray {
    MomentArray out(terms);
    const double x = (e - e2) / unit;
    const double x2 = x * x;
    out(0) = 1.0;
    for (int m = 1; m < terms; ++m) out(m) = out(m - 1) * x2 / ((2.0 * m - 1.0) * 2.0 * m);
    return out;
  };
  auto inner = [&](double e) -> MomentArray {
    return integrate_weighted(
        dist, [&](double e2) -> MomentArray { return pair_terms(e, e2); }, dist.lower(),
        dist.upper(), inner_tol);
  };

  MomentArray total;
  try {
    total = integrate_weighted(dist, inner, dist.lower(), dist.upper(), outer_tol);
  } catch (const Error& err) {
    if (err.code() == ErrorCode::QuadratureFailure) {
      throw Error(ErrorCode::QuadratureFailure,
                  "double integral for " + dist.name() + " missed 1e-8: " + err.what());
    }
    throw;
  }
  Eigen::VectorXd even(terms);
  double p = 1.0;
  for (int m = 0; m < terms; ++m) {
    even(m) = total(m) * p;
    p *= unit * unit;
  }
  return {even, even.size() > 1 && even(1) == 0.0};
}

}  // namespace survbound
