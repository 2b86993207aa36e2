#include "survbound/numeric.hpp"

#include <unsupported/Eigen/Polynomials>

#include <algorithm>
#include <cmath>
#include <limits>

namespace survbound {

std::vector<double> positive_real_roots(const Eigen::VectorXd& coeffs) {
  Eigen::Index deg = coeffs.size() - 1;
  const double big = coeffs.cwiseAbs().maxCoeff();
  while (deg > 0 && std::abs(coeffs(deg)) <= 1e-300 + 1e-15 * big) --deg;
  if (deg < 1) return {};
  const Eigen::VectorXd p = coeffs.head(deg + 1);

  std::vector<double> candidates;
  if (deg == 1) {
    candidates.push_back(-p(0) / p(1));
  } else {
    Eigen::PolynomialSolver<double, Eigen::Dynamic> solver(p);
    for (const auto& z : solver.roots()) {
      if (std::abs(z.imag()) <= 1e-7 * std::max(1.0, std::abs(z))) candidates.push_back(z.real());
    }
  }

  Eigen::VectorXd dp(deg);
  for (Eigen::Index k = 1; k <= deg; ++k) dp(k - 1) = k * p(k);

  std::vector<double> roots;
  for (double x : candidates) {
    if (!(x > 0.0)) continue;
    for (int it = 0; it < 8; ++it) {
      const double d = polyval(dp, x);
      if (d == 0.0) break;
      const double step = polyval(p, x) / d;
      const double next = x - step;
      if (!(next > 0.0)) break;
      x = next;
      if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(x)) break;
    }
    roots.push_back(x);
  }
  std::sort(roots.begin(), roots.end());
  std::vector<double> unique;
  for (double r : roots) {
    if (unique.empty() || std::abs(r - unique.back()) > 1e-10 * std::max(r, 1e-300)) {
      unique.push_back(r);
    }
  }
  return unique;
}

std::optional<double> bracketed_root(const std::function<double(double)>& f, double lo, double hi,
                                     double rel_tol, int max_iter) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (std::signbit(flo) == std::signbit(fhi) || std::isnan(flo) || std::isnan(fhi)) {
    return std::nullopt;
  }
  int side = 0;
  double x = lo;
  for (int it = 0; it < max_iter; ++it) {
    x = (lo * fhi - hi * flo) / (fhi - flo);
    if (!(x > std::min(lo, hi) && x < std::max(lo, hi))) x = 0.5 * (lo + hi);
    const double fx = f(x);
    if (fx == 0.0 || std::abs(hi - lo) <= rel_tol * std::max(std::abs(lo), std::abs(hi))) break;
    if (std::signbit(fx) == std::signbit(fhi)) {
      hi = x;
      fhi = fx;
      if (side == -1) flo *= 0.5;
      side = -1;
    } else {
      lo = x;
      flo = fx;
      if (side == 1) fhi *= 0.5;
      side = 1;
    }
  }
  return x;
}

}  // namespace survbound
