#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "survbound/error.hpp"
#include "survbound/numeric.hpp"
#include "survbound/quadrature.hpp"

using namespace survbound;

TEST_CASE("gauss_kronrod_exact_for_polynomials") {
  auto r = quad::integrate([](double x) { return x * x * x - 2.0 * x; }, -1.0, 2.0);
  CHECK(r.value == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(r.intervals == 1);
}

TEST_CASE("gauss_kronrod_smooth_and_peaked") {
  auto e = quad::integrate([](double x) { return std::exp(x); }, 0.0, 1.0);
  CHECK(std::abs(e.value - (std::numbers::e - 1.0)) < 1e-14);
  // Narrow Lorentzian: the adaptive split has to find the peak.
  auto l = quad::integrate([](double x) { return 1e-4 / (x * x + 1e-8); }, -1.0, 1.0);
  CHECK(std::abs(l.value - 2.0 * std::atan(1e4)) < 1e-9);
}

TEST_CASE("gauss_kronrod_vector_components_meet_their_own_tolerance") {
  auto f = [](double x) -> Eigen::Vector2d { return Eigen::Vector2d(std::sin(x), 1e-20 * x); };
  quad::Tolerance tol;
  tol.abs = 1e-300;
  tol.rel = 1e-12;
  auto r = quad::integrate(f, 0.0, std::numbers::pi, tol);
  CHECK(std::abs(r.value(0) - 2.0) < 1e-12);
  CHECK(std::abs(r.value(1) - 0.5e-20 * std::numbers::pi * std::numbers::pi) < 1e-32);
}

TEST_CASE("gauss_kronrod_complex") {
  auto r = quad::integrate([](double x) { return std::exp(std::complex<double>(0.0, x)); }, 0.0,
                           std::numbers::pi);
  CHECK(std::abs(r.value - std::complex<double>(0.0, 2.0)) < 1e-13);
}

TEST_CASE("infinite_ranges") {
  auto r = quad::integrate_to_infinity([](double x) { return std::exp(-x); }, 0.0, 1.0);
  CHECK(std::abs(r.value - 1.0) < 1e-12);
  auto l = quad::integrate_from_minus_infinity([](double x) { return 1.0 / (1.0 + x * x); }, 0.0, 1.0);
  CHECK(std::abs(l.value - 0.5 * std::numbers::pi) < 1e-11);
}

TEST_CASE("quadrature_failure_is_reported") {
  quad::Tolerance tol;
  tol.max_intervals = 20;
  CHECK_THROWS_AS(quad::integrate([](double x) { return 1.0 / x; }, 0.0, 1.0, tol), Error);
  try {
    quad::integrate([](double x) { return 1.0 / x; }, 0.0, 1.0, tol);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::QuadratureFailure);
  }
}

TEST_CASE("compensated_sum") {
  CompensatedSum<double> s;
  s.add(1e16);
  s.add(1.0);
  s.add(-1e16);
  CHECK(s.value() == 1.0);
  CHECK(s.largest_term() == 1e16);
}

TEST_CASE("polynomial_roots") {
  // (x - 1)(x - 2)(x + 3) = x^3 - 7x + 6
  Eigen::VectorXd c(4);
  c << 6.0, -7.0, 0.0, 1.0;
  const auto roots = positive_real_roots(c);
  REQUIRE(roots.size() == 2);
  CHECK(std::abs(roots[0] - 1.0) < 1e-14);
  CHECK(std::abs(roots[1] - 2.0) < 1e-14);
  CHECK(polyval(c, 2.0) == 0.0);

  Eigen::VectorXd none(3);
  none << 1.0, 0.0, 1.0;
  CHECK(positive_real_roots(none).empty());
}

TEST_CASE("bracketed_root") {
  const auto r = bracketed_root([](double x) { return std::cos(x); }, 0.0, 2.0);
  REQUIRE(r);
  CHECK(std::abs(*r - 0.5 * std::numbers::pi) < 1e-14);
  CHECK_FALSE(bracketed_root([](double x) { return x * x + 1.0; }, -1.0, 1.0));
}
