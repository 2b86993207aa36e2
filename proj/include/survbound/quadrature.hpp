#pragma once

// Globally adaptive 21-point Gauss-Kronrod quadrature for scalar, complex and
// short Eigen-vector valued integrands. Vector integrands are refined until
// every component meets its own tolerance, so moments of very different
// magnitude can share one pass over the integrand.

#include <Eigen/Core>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <type_traits>
#include <vector>

#include "survbound/error.hpp"

namespace survbound::quad {

/// Error bookkeeping array; integrands have at most this many components.
using ErrorArray = Eigen::Array<double, Eigen::Dynamic, 1, 0, 32, 1>;

struct Tolerance {
  double abs = -1.0;  // < 0 selects default_abs_tolerance()
  double rel = 1e-12;
  int max_intervals = 4000;
};

/// Process-wide default absolute tolerance (1e-11 unless overridden, e.g. by
/// the CLI from SURVBOUND_TOL). Set it before starting any computation.
double default_abs_tolerance();
void set_default_abs_tolerance(double tol);

template <typename T>
struct Result {
  T value;
  double error;  // largest component error estimate
  int intervals;
};

namespace detail {

inline constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};

inline constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600525394254, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};

// Gauss weights for the odd-indexed Kronrod nodes 1, 3, 5, 7, 9.
inline constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

inline ErrorArray magnitudes(double v) { return ErrorArray::Constant(1, std::abs(v)); }
inline ErrorArray magnitudes(const std::complex<double>& v) {
  return ErrorArray::Constant(1, std::abs(v));
}
template <typename Derived>
ErrorArray magnitudes(const Eigen::MatrixBase<Derived>& v) {
  return v.array().abs();
}

template <typename T>
struct Panel {
  double a;
  double b;
  T value;
  ErrorArray error;
};

template <typename T, typename F>
Panel<T> kronrod_panel(F& f, double a, double b) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  const T fc = f(mid);
  T kronrod = fc * kWgk[10];
  T gauss = fc * 0.0;
  for (std::size_t i = 0; i < 10; ++i) {
    const double dx = half * kXgk[i];
    const T f1 = f(mid - dx);
    const T f2 = f(mid + dx);
    kronrod += (f1 + f2) * kWgk[i];
    if (i % 2 == 1) gauss += (f1 + f2) * kWg[i / 2];
  }
  T value = kronrod * half;
  ErrorArray err = magnitudes((kronrod - gauss) * half);
  return {a, b, std::move(value), std::move(err)};
}

}  // namespace detail

/// Integrate f over the finite interval [a, b].
template <typename F>
auto integrate(F&& f, double a, double b, Tolerance tol = {})
    -> Result<std::decay_t<decltype(f(a))>> {
  using T = std::decay_t<decltype(f(a))>;
  const double abs_tol = tol.abs < 0.0 ? default_abs_tolerance() : tol.abs;

  std::vector<detail::Panel<T>> panels;
  panels.push_back(detail::kronrod_panel<T>(f, a, b));
  if (a == b) return {panels.front().value * 0.0, 0.0, 1};

  std::vector<char> frozen(1, 0);
  for (;;) {
    T total = panels.front().value;
    ErrorArray err = panels.front().error;
    for (std::size_t i = 1; i < panels.size(); ++i) {
      total += panels[i].value;
      err += panels[i].error;
    }
    const ErrorArray target =
        (detail::magnitudes(total) * tol.rel).max(ErrorArray::Constant(err.size(), abs_tol));
    const bool converged = (err <= target).all();
    if (converged || static_cast<int>(panels.size()) >= tol.max_intervals) {
      if (!converged && !(err <= 100.0 * target).all()) {
        throw Error(ErrorCode::QuadratureFailure,
                    "adaptive Gauss-Kronrod reached " + std::to_string(panels.size()) +
                        " intervals with error " + std::to_string(err.maxCoeff()));
      }
      return {total, err.maxCoeff(), static_cast<int>(panels.size())};
    }

    std::size_t worst = panels.size();
    double worst_ratio = -1.0;
    const ErrorArray safe_target = target.max(std::numeric_limits<double>::min());
    for (std::size_t i = 0; i < panels.size(); ++i) {
      if (frozen[i]) continue;
      const double ratio = (panels[i].error / safe_target).maxCoeff();
      if (ratio > worst_ratio) {
        worst_ratio = ratio;
        worst = i;
      }
    }
    if (worst == panels.size()) {
      // Every panel is at the resolution limit of double precision.
      if (!(err <= 100.0 * target).all()) {
        throw Error(ErrorCode::QuadratureFailure,
                    "adaptive Gauss-Kronrod stalled at error " + std::to_string(err.maxCoeff()));
      }
      return {total, err.maxCoeff(), static_cast<int>(panels.size())};
    }

    const double lo = panels[worst].a;
    const double hi = panels[worst].b;
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi) ||
        (hi - lo) < 64.0 * std::numeric_limits<double>::epsilon() * std::abs(mid)) {
      frozen[worst] = 1;
      continue;
    }
    panels[worst] = detail::kronrod_panel<T>(f, lo, mid);
    panels.push_back(detail::kronrod_panel<T>(f, mid, hi));
    frozen.push_back(0);
  }
}

/// Integrate f over [a, inf) with the map x = a + scale * u / (1 - u).
template <typename F>
auto integrate_to_infinity(F&& f, double a, double scale, Tolerance tol = {})
    -> Result<std::decay_t<decltype(f(a))>> {
  using T = std::decay_t<decltype(f(a))>;
  auto mapped = [&](double u) -> T {
    const double w = 1.0 - u;
    return f(a + scale * u / w) * (scale / (w * w));
  };
  return integrate(mapped, 0.0, 1.0, tol);
}

/// Integrate f over (-inf, b].
template <typename F>
auto integrate_from_minus_infinity(F&& f, double b, double scale, Tolerance tol = {})
    -> Result<std::decay_t<decltype(f(b))>> {
  using T = std::decay_t<decltype(f(b))>;
  auto mapped = [&](double u) -> T {
    const double w = 1.0 - u;
    return f(b - scale * u / w) * (scale / (w * w));
  };
  return integrate(mapped, 0.0, 1.0, tol);
}

}  // namespace survbound::quad
