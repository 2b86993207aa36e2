#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "survbound/distribution.hpp"
#include "survbound/error.hpp"

using namespace survbound;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::InvalidInput;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST_CASE("factories_validate") {
  CHECK(code_of([] { EnergyDistribution::gamma_half(-1.0); }) == ErrorCode::InvalidInput);
  CHECK(code_of([] { EnergyDistribution::power_law(1.0, 1.0); }) == ErrorCode::NonNormalizable);
  CHECK(code_of([] { EnergyDistribution::discrete({{0.0, 0.5}, {1.0, 0.4}}); }) ==
        ErrorCode::NonNormalizable);
  CHECK(code_of([] { EnergyDistribution::discrete({{0.0, 1.5}, {1.0, -0.5}}); }) ==
        ErrorCode::NegativeDensity);
  CHECK(code_of([] { EnergyDistribution::tabulated({{0.0, 1.0}, {0.0, 1.0}}); }) ==
        ErrorCode::InvalidInput);
  CHECK(code_of([] { EnergyDistribution::tabulated({{0.0, 2.5}, {1.0, -0.5}}); }) ==
        ErrorCode::NegativeDensity);
}

TEST_CASE("normalize_rescales") {
  const Normalized u = normalize(RawUniform{2.0, 1.0});
  CHECK(u.total_weight == 2.0);
  CHECK(u.distribution.density(1.0) == doctest::Approx(0.5));

  const Normalized d = normalize(Discrete{{{1.0, 2.0}, {0.0, 6.0}}});
  CHECK(d.total_weight == 8.0);
  CHECK(d.distribution.as<Discrete>().atoms.front().energy == 0.0);
  CHECK(d.distribution.as<Discrete>().atoms.front().weight == 0.75);
}

TEST_CASE("closed_form_moments_match_quadrature") {
  for (const auto& dist : {fixtures::gamma_half(), EnergyDistribution::gamma_half(2.5),
                           EnergyDistribution::square(3.0), fixtures::tabulated_power()}) {
    const int n = 8;
    const MomentVector a = raw_moments(dist, n);
    const MomentVector b = quadrature_moments(dist, n);
    for (int k = 0; k <= n; ++k) CHECK(rel(a.raw(k), b.raw(k)) < 1e-8);
  }
  const MomentVector a = raw_moments(fixtures::power_law(), 2);
  const MomentVector b = quadrature_moments(fixtures::power_law(), 2);
  for (int k = 0; k <= 2; ++k) CHECK(rel(a.raw(k), b.raw(k)) < 1e-8);
}

TEST_CASE("gamma_half_moments") {
  // h_k = gamma^k (2k-1)!! / 2^k
  const MomentVector h = raw_moments(EnergyDistribution::gamma_half(2.0), 4);
  CHECK(rel(h.raw(1), 1.0) < 1e-15);
  CHECK(rel(h.raw(2), 3.0) < 1e-15);
  CHECK(rel(h.raw(4), 105.0) < 1e-14);
}

TEST_CASE("power_law_moment_divergence") {
  const MomentVector h = raw_moments(fixtures::power_law(), 6);
  CHECK(h.order() == 2);
  REQUIRE(h.divergent_at());
  CHECK(*h.divergent_at() == 3);
  try {
    h.require(4);
    FAIL("expected MomentDivergent");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MomentDivergent);
    REQUIRE(e.index());
    CHECK(*e.index() == 3);
  }
  // h_1 = gamma/(p - 2), h_2 = 2 gamma^2/((p - 2)(p - 3))
  CHECK(rel(h.raw(1), 2.0 / 3.0) < 1e-15);
  CHECK(rel(h.raw(2), 8.0 / 3.0) < 1e-15);
}

TEST_CASE("breit_wigner_has_no_raw_moments") {
  const MomentVector h = raw_moments(fixtures::breit_wigner(), 2);
  CHECK(code_of([&] { h.require(1); }) == ErrorCode::MomentDivergent);
}

TEST_CASE("alpha_closed_forms") {
  const auto pl = fixtures::power_law();
  for (double c : {0.5, 1.0, 2.0, 5.0}) {
    CHECK(std::abs(alpha_at(pl, c) - (1.0 - std::pow(1.0 + c, -2.5))) < 1e-15);
    const double simpson = oracle::simpson([&](double e) { return pl.density(e); }, 0.0, c);
    CHECK(std::abs(alpha_at(pl, c) - simpson) < 1e-12);
  }
  CHECK(std::abs(alpha_at(pl, 3.0) - 31.0 / 32.0) < 1e-15);

  const auto bw = fixtures::breit_wigner();
  const double lorentz = oracle::simpson([&](double e) { return bw.density(e); }, -5.0, 5.0);
  CHECK(std::abs(alpha_at(bw, 5.0) - 2.0 / std::numbers::pi * std::atan(5.0)) < 1e-15);
  CHECK(std::abs(alpha_at(bw, 5.0) - lorentz) < 1e-12);

  const auto g = fixtures::gamma_half();
  CHECK(std::abs(alpha_at(g, 2.0) - std::erf(std::sqrt(2.0))) < 1e-15);

  const auto tab = fixtures::tabulated_step_ramp();
  CHECK(std::abs(alpha_at(tab, 4.2) - 1.0) < 1e-15);
  CHECK(alpha_at(tab, 2.0) == doctest::Approx(alpha_at(tab, 1.5)).epsilon(1e-12));

  CHECK(code_of([&] { alpha_at(fixtures::square(), 1.5); }) == ErrorCode::CutoffOutOfSupport);
  CHECK(code_of([&] { alpha_at(g, 0.0); }) == ErrorCode::CutoffOutOfSupport);
}

TEST_CASE("cutoff_for_alpha_inverts_alpha") {
  for (const auto& dist : {fixtures::power_law(), fixtures::gamma_half(), fixtures::breit_wigner()}) {
    for (double a : {0.1, 0.5, 0.9, 1.0 - 1e-6}) {
      CHECK(std::abs(alpha_at(dist, cutoff_for_alpha(dist, a)) - a) < 1e-12);
    }
  }
}

TEST_CASE("truncated_at_top_equals_raw") {
  for (const auto& dist : {fixtures::square(), fixtures::tabulated_power(),
                           fixtures::tabulated_step_ramp(), fixtures::three_atoms()}) {
    const MomentVector a = truncated_moments(dist, dist.upper(), 8);
    const MomentVector b = raw_moments(dist, 8);
    CHECK(a.alpha() == 1.0);
    for (int k = 0; k <= 8; ++k) CHECK(rel(a.raw(k), b.raw(k)) < 1e-8);
  }
}

TEST_CASE("truncated_moments_against_simpson") {
  const auto pl = fixtures::power_law();
  const double c = 3.0;
  const MomentVector h = truncated_moments(pl, c, 6);
  CHECK(h.alpha() == doctest::Approx(31.0 / 32.0).epsilon(1e-15));
  for (int k = 1; k <= 6; ++k) {
    const double ref =
        oracle::simpson([&](double e) { return std::pow(e, k) * pl.density(e); }, 0.0, c) / h.alpha();
    CHECK(rel(h.raw(k), ref) < 1e-10);
  }
  // Symmetric window: odd central moments vanish.
  const MomentVector w = truncated_moments(fixtures::breit_wigner(), 2.0, 4);
  CHECK(w.origin() == 0.0);
  CHECK(w.scaled(1) == 0.0);
  CHECK(w.scaled(3) == 0.0);
  // <x^2> over [-2, 2] of the Lorentzian: (2 - atan 2)/atan 2
  CHECK(rel(w.raw(2), (2.0 - std::atan(2.0)) / std::atan(2.0)) < 1e-12);
}

TEST_CASE("shift_covariance_of_moments") {
  for (const auto& base : {fixtures::tabulated_power(), fixtures::tabulated_step_ramp()}) {
    const MomentVector h = raw_moments(base, 2);
    for (double s : {-1.0, 0.3, 10.0}) {
      const MomentVector hs = raw_moments(base.shifted(s), 2);
      CHECK(std::abs(hs.raw(1) - (h.raw(1) + s)) < 1e-8 * std::max(1.0, std::abs(s)));
      const double var = h.raw(2) - h.raw(1) * h.raw(1);
      const double var_s = hs.raw(2) - hs.raw(1) * hs.raw(1);
      CHECK(rel(var_s, var) < 1e-8);
    }
  }
}

TEST_CASE("moment_vector_reexpansion") {
  const MomentVector h = raw_moments(fixtures::gamma_half(), 6);
  const MomentVector moved = h.about(1.7).about(0.0);
  for (int k = 0; k <= 6; ++k) CHECK(rel(moved.scaled(k), h.scaled(k)) < 1e-13);
  CHECK(code_of([] { check_order(17); }) == ErrorCode::OrderTooLarge);
  CHECK(code_of([] { check_order(-1); }) == ErrorCode::InvalidInput);
}

TEST_CASE("discrete_weights") {
  const auto d = fixtures::three_atoms();
  CHECK(alpha_at(d, 0.0) == doctest::Approx(0.7));
  CHECK(alpha_at(d, 0.49) == doctest::Approx(0.7));
  CHECK(alpha_at(d, 0.5) == doctest::Approx(0.9));
  const MomentVector h = truncated_moments(d, 0.7, 2);
  CHECK(rel(h.raw(1), 0.1 / 0.9) < 1e-15);
  CHECK(rel(h.raw(2), 0.05 / 0.9) < 1e-15);
}
