#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "survbound/error.hpp"
#include "survbound/moments.hpp"
#include "survbound/oracle.hpp"
#include "survbound/series_bounds.hpp"

using namespace survbound;

TEST_CASE("cos_partial_sums") {
  for (int n = 0; n <= 16; n += 2) CHECK(cos_partial_sum(0.0, n) == 1.0);
  CHECK(cos_partial_sum(std::numbers::pi, 2) == doctest::Approx(1.0 - std::numbers::pi * std::numbers::pi / 2));
  CHECK(cos_partial_sum(std::numbers::pi, 2) <= -1.0);
  CHECK(cos_partial_sum(1.0, 4) == doctest::Approx(1.0 - 0.5 + 1.0 / 24.0).epsilon(1e-15));
  CHECK(cos_partial_sum(1.0, 4) >= std::cos(1.0));
  CHECK(cos_partial_sum(1.0L, 2) == doctest::Approx(0.5));
  for (double x = 0.0; x < 8.0; x += 0.37) {
    for (int n = 2; n <= 16; n += 2) {
      if (direction_for_order(n) == Direction::Upper) {
        CHECK(cos_partial_sum(x, n) >= std::cos(x) - 1e-15);
      } else {
        CHECK(cos_partial_sum(x, n) <= std::cos(x) + 1e-15);
      }
    }
  }
}

TEST_CASE("direction_by_order") {
  CHECK(direction_for_order(1) == Direction::Upper);
  CHECK(direction_for_order(2) == Direction::Lower);
  CHECK(direction_for_order(3) == Direction::Lower);
  CHECK(direction_for_order(4) == Direction::Upper);
  CHECK(direction_for_order(6) == Direction::Lower);
}

TEST_CASE("p_bound_examples") {
  const CorrelationMoments e = e_from_h(raw_moments(fixtures::gamma_half(), 8), 8);
  for (int n = 2; n <= 8; n += 2) CHECK(p_bound(e, n, 0.0) == 1.0);
  CHECK(p_bound(e, 2, 1.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(p_bound(e, 4, 1.0) == doctest::Approx(0.875).epsilon(1e-15));
  CHECK(exact_survival(fixtures::gamma_half(), 1.0).p >= 0.5);
  CHECK_THROWS_AS(p_bound(e, 10, 1.0), Error);
}

TEST_CASE("cos2_bound") {
  CHECK(cos2_bound(0.7, 0.0).value == 1.0);
  const BoundValue edge = cos2_bound(1.0, 0.5 * std::numbers::pi);
  CHECK(edge.value == doctest::Approx(0.0));
  CHECK(edge.valid);
  CHECK_FALSE(cos2_bound(1.0, 2.0).valid);
  CHECK(cos2_bound(1.0, 2.0).value == 0.0);
  const double de = std::sqrt(0.5);
  CHECK(cos2_bound(de, 1.0).value == doctest::Approx(std::pow(std::cos(de), 2)));
  CHECK(cos2_bound(de, 1.0).value <= exact_survival(fixtures::gamma_half(), 1.0).p);

  // cos^2 x >= 1 - x^2: the quadratic series bound is never better in the window.
  const CorrelationMoments e = e_from_h(raw_moments(fixtures::gamma_half(), 2), 2);
  for (double t = 0.0; t * de <= 0.5 * std::numbers::pi; t += 0.01) {
    CHECK(cos2_bound(de, t).value >= p_bound(e, 2, t) - 1e-15);
  }
}

TEST_CASE("real_imaginary_examples") {
  const MomentVector h = raw_moments(fixtures::gamma_half(), 4);
  CHECK(ri_bound(h, 2, 0.0).value == 1.0);
  CHECK(ri_bound(h, 1, 0.0).value == 0.0);
  const SurvivalSample s = exact_survival(fixtures::gamma_half(), 1.0);
  const RiBound i1 = ri_bound(h, 1, 1.0);
  CHECK(i1.target == Target::Im);
  CHECK(i1.direction == Direction::Upper);
  CHECK(i1.value == doctest::Approx(0.5));
  CHECK(s.im <= i1.value);
  const RiBound r2 = ri_bound(h, 2, 1.0);
  CHECK(r2.value == doctest::Approx(0.625));
  CHECK(s.re >= r2.value);

  const auto symmetric = EnergyDistribution::discrete({{-1.0, 0.5}, {1.0, 0.5}});
  try {
    ri_bound(raw_moments(symmetric, 3), 3, 1.0, symmetric.lower());
    FAIL("expected NegativeSupport");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NegativeSupport);
  }
}

TEST_CASE("series_directions_against_oracle") {
  for (const auto& dist : {fixtures::gamma_half(), fixtures::square(), fixtures::three_atoms(),
                           fixtures::tabulated_step_ramp()}) {
    const MomentVector h = raw_moments(dist, 16);
    for (double t : default_time_grid(6.0, 200)) {
      const SurvivalSample s = exact_survival(dist, t);
      for (int n = 2; n <= 16; n += 2) {
        const double p = p_bound(e_from_h(h, n), n, t);
        if (direction_for_order(n) == Direction::Lower) {
          CHECK(p <= s.p + 1e-9);
        } else {
          CHECK(p >= s.p - 1e-9);
        }
      }
      for (int n = 1; n <= 8; ++n) {
        const RiBound b = ri_bound(h, n, t);
        const double exact = b.target == Target::Re ? s.re : s.im;
        if (b.direction == Direction::Lower) {
          CHECK(b.value <= exact + 1e-9);
        } else {
          CHECK(b.value >= exact - 1e-9);
        }
      }
    }
  }
}

TEST_CASE("series_nesting_at_small_t") {
  for (const auto& dist : {fixtures::gamma_half(), fixtures::square()}) {
    const MomentVector h = raw_moments(dist, 8);
    const double limit = 0.1 / std::sqrt(e_from_h(h, 2).variance());
    for (double t : {0.25 * limit, 0.5 * limit, limit}) {
      const double exact = exact_survival(dist, t).p;
      double previous = INFINITY;
      for (int n = 2; n <= 8; n += 2) {
        const double gap = std::abs(p_bound(e_from_h(h, n), n, t) - exact);
        CHECK(gap < previous);
        previous = gap;
      }
    }
  }
}

TEST_CASE("curves_clamp_and_keep_raw_values") {
  const CorrelationMoments e = e_from_h(raw_moments(fixtures::gamma_half(), 8), 8);
  const auto grid = default_time_grid(3.0);
  CHECK(grid.size() == 512);
  CHECK(grid.front() == 0.0);
  CHECK(grid.back() == 3.0);
  for (std::size_t i = 1; i < grid.size(); ++i) CHECK(grid[i] > grid[i - 1]);
  for (int n = 2; n <= 8; n += 2) {
    const BoundCurve c = p_bound_curve(e, n, grid);
    CHECK(c.samples.front().value == 1.0);
    for (const auto& s : c.samples) {
      CHECK(s.value >= 0.0);
      CHECK(s.value <= 1.0);
      CHECK(s.value == clamp_for(Target::P, s.raw_value));
    }
  }
  const BoundCurve r = ri_curve(raw_moments(fixtures::gamma_half(), 4), 3, grid);
  for (const auto& s : r.samples) CHECK(s.value >= -1.0);
  CHECK(r.target == Target::Im);
}
