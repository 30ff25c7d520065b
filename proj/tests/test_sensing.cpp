#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mzi/error.hpp"
#include "mzi/sensing.hpp"

using namespace mzi;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("Sagnac phase") {
  const GyroscopeModel g;
  CHECK(sagnac_phase(g, 0.0) == 0.0);
  CHECK(sagnac_phase(g, kEarthRotation) == doctest::Approx(1.974e-3).epsilon(1e-3));
  CHECK(sagnac_phase(g, -1e-4) < 0.0);
  // exact linearity
  const double a = sagnac_phase(g, 2e-4), b = sagnac_phase(g, 6e-4);
  CHECK(std::abs(b - 3.0 * a) < 1e-15);
  GyroscopeModel bad;
  bad.area = 0.0;
  CHECK_THROWS_AS(sagnac_phase(bad, 1.0), Error);
}

TEST_CASE("gyro parameter map") {
  const GyroscopeModel g;
  const SystemParams base = default_gyro_base();
  CHECK(gyro_params(g, 0.0, base).phi == doctest::Approx(0.85 * kPi));
  const SystemParams p = gyro_params(g, kEarthRotation, base);
  CHECK(p.phi == doctest::Approx(0.85 * kPi + 1.974e-3).epsilon(1e-6));
  CHECK(p.delta == base.delta);
  CHECK(p.u == base.u);
  CHECK(p.eps == base.eps);
}

TEST_CASE("thermal detuning") {
  ThermometerModel t;
  CHECK(thermal_detuning(t, 0.0) == 0.0);
  CHECK(thermal_detuning(t, 1.0) == doctest::Approx(-1.475).epsilon(1e-3));
  const double a = thermal_detuning(t, 0.1);
  t.d0 *= 2.0;
  CHECK(thermal_detuning(t, 0.1) == doctest::Approx(2.0 * a).epsilon(1e-14));
  const ThermometerModel ref;
  CHECK(std::abs(thermal_detuning(ref, 0.3) - 3.0 * thermal_detuning(ref, 0.1)) < 1e-14);
  ThermometerModel bad;
  bad.d0 = 2e-3;
  CHECK_THROWS_AS(thermal_detuning(bad, 0.1), Error);
}

TEST_CASE("thermometer parameter map") {
  const ThermometerModel t;
  const SystemParams base = default_thermo_base();
  CHECK(thermo_params(t, 0.0, base).delta == doctest::Approx(-0.56));
  CHECK(thermo_params(t, 0.05, base).delta < -0.56);
  CHECK(thermo_params(t, 0.05, base).phi == base.phi);
  CHECK(base.phi == doctest::Approx(0.824 * kPi));
}

TEST_CASE("gyroscope response at rest and at the Earth rate") {
  const double grid[] = {0.0, kEarthRotation};
  const auto g2 = response_curve(GyroscopeModel{}, grid, default_gyro_base(), Observable::G2);
  REQUIRE(g2.size() == 2);
  CHECK(g2[0].value == doctest::Approx(2.79).epsilon(0.1 / 2.79));
  CHECK(g2[1].value == doctest::Approx(2.97).epsilon(0.1 / 2.97));
  CHECK(g2[0].measurand == 0.0);
  CHECK_FALSE(g2[0].error.has_value());

  const double one[] = {1e-5};
  CHECK(response_curve(GyroscopeModel{}, one, default_gyro_base(), Observable::Intensity).size() == 1);
  CHECK_THROWS_AS(response_curve(GyroscopeModel{}, std::span<const double>{}, default_gyro_base(),
                                 Observable::G2),
                  Error);
}

TEST_CASE("failed points are annotated") {
  SystemParams base = default_gyro_base();
  base.eps = 0.0;
  const double grid[] = {0.0};
  const auto r = response_curve(GyroscopeModel{}, grid, base, Observable::G2);
  REQUIRE(r.size() == 1);
  CHECK(std::isnan(r[0].value));
  REQUIRE(r[0].error.has_value());
  CHECK(*r[0].error == ErrorCode::UndefinedCorrelation);
}

TEST_CASE("finite differences agree with the sampled response") {
  const ThermometerModel t;
  const SystemParams base = default_thermo_base();
  const double h = 1e-3;
  for (double x : {-0.2, 0.05, 0.25}) {
    const double grid[] = {x - h, x + h};
    const auto r = response_curve(t, grid, base, Observable::G2);
    const double slope = (r[1].value - r[0].value) / (2 * h);
    const double eta = sensitivity(t, x, base, Observable::G2);
    CHECK(eta == doctest::Approx(slope).epsilon(0.05));
  }
}

TEST_CASE("sensitivity vanishes at an interior extremum") {
  const ThermometerModel t;
  const SystemParams base = default_thermo_base();
  std::vector<double> grid;
  for (int i = 0; i <= 200; ++i)
    grid.push_back(-0.3 + 0.6 * i / 200.0);
  const auto r = response_curve(t, grid, base, Observable::Intensity);
  // The intensity dip sits inside the window.
  const auto it = std::min_element(r.begin(), r.end(),
                                   [](const auto& a, const auto& b) { return a.value < b.value; });
  REQUIRE(it != r.begin());
  REQUIRE(it + 1 != r.end());
  double lo = (it - 1)->measurand, hi = (it + 1)->measurand;
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  auto f = [&](double x) {
    const double g[] = {x};
    return response_curve(t, g, base, Observable::Intensity)[0].value;
  };
  for (int k = 0; k < 60; ++k) {
    const double a = hi - gr * (hi - lo), b = lo + gr * (hi - lo);
    if (f(a) < f(b))
      hi = b;
    else
      lo = a;
  }
  const double peak = sensitivity(t, 0.5 * (lo + hi), base, Observable::Intensity);
  const auto max_eta = peak_sensitivity(t, -0.3, 0.3, 121, base, Observable::Intensity);
  CHECK(std::abs(peak) < 0.01 * std::abs(max_eta.eta));
}

TEST_CASE("thermometer peak sensitivity and chain rule") {
  const ThermometerModel t;
  const SystemParams base = default_thermo_base();
  const auto peak = peak_sensitivity(t, -0.3, 0.3, 601, base, Observable::G2);
  CHECK(std::abs(peak.eta) == doctest::Approx(28.0).epsilon(0.15));

  // max |dg2/d delta| from a direct detuning sweep.
  const double d_lo = thermo_params(t, 0.3, base).delta, d_hi = thermo_params(t, -0.3, base).delta;
  double best = 0.0;
  const int n = 3001;
  const double h = (d_hi - d_lo) / (n - 1);
  auto g2_at = [&](double delta) {
    SystemParams p = base;
    p.delta = delta;
    const SteadySolution sol = SteadySolution::solve(p);
    return evaluate_observable(sol, Observable::G2);
  };
  double prev = g2_at(d_lo);
  for (int i = 1; i < n; ++i) {
    const double cur = g2_at(d_lo + i * h);
    best = std::max(best, std::abs(cur - prev) / h);
    prev = cur;
  }
  const double chain = std::abs(t.detuning_per_degree()) * best;
  CHECK(std::abs(peak.eta) == doctest::Approx(chain).epsilon(0.15));
}

TEST_CASE("step validation") {
  const GyroscopeModel g;
  const SystemParams base = default_gyro_base();
  CHECK(default_step(g) == 1e-6);
  CHECK(default_step(ThermometerModel{}) == 1e-4);
  try {
    sensitivity(g, 1.0, base, Observable::G2, {}, 1e-20);
    FAIL("expected invalid step");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidStep);
  }
  CHECK_THROWS_AS(sensitivity(g, 0.0, base, Observable::G2, {}, 0.0), Error);
  CHECK_THROWS_AS(sensitivity(g, 0.0, base, Observable::G2, {}, -1e-6), Error);
}

TEST_CASE("full Sagnac period range") {
  const GyroscopeModel g;
  const auto [lo, hi] = full_period_omega_range(g);
  CHECK(lo == -hi);
  CHECK(sagnac_phase(g, hi) - sagnac_phase(g, lo) == doctest::Approx(2.0 * kPi));
}
