#include <doctest.h>

#include <numbers>
#include <random>

#include "mzi/error.hpp"
#include "mzi/interferometer.hpp"
#include "mzi/oracle.hpp"

using namespace mzi;

namespace {

constexpr double kPi = std::numbers::pi;

SystemParams random_params(std::mt19937& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  SystemParams p;
  p.delta1 = u(rng) - 0.5;
  p.delta = 4.0 * u(rng) - 2.0;
  p.u = 0.2 * u(rng);
  p.eps = 0.02 + 0.15 * u(rng);
  p.kappa1 = 0.6 + u(rng);
  p.kappa2 = 0.6 + u(rng);
  p.phi = 2.0 * kPi * u(rng);
  return p;
}

} // namespace

TEST_CASE("output operator") {
  const FockSpace s(3);
  SystemParams p;
  const Matrix a1 = annihilator(s, 1), a2 = annihilator(s, 2);
  CHECK((output_operator(s, p).op - (a1 + a2) / std::sqrt(2.0)).norm() < 1e-15);
  p.phi = kPi;
  CHECK((output_operator(s, p).op - (a1 - a2) / std::sqrt(2.0)).norm() < 1e-14);
  SystemParams q;
  CHECK((output_operator(s, q, Port::Complement).op - output_operator(s, p).op).norm() < 1e-15);

  p.kappa1 = 1.7;
  Vector ket = Vector::Zero(s.dim());
  ket(s.index(1, 0)) = 1.0;
  const Vector out = output_operator(s, p).op * ket;
  CHECK(std::abs(out(s.index(0, 0)) - std::sqrt(1.7 / 2.0)) < 1e-15);
}

TEST_CASE("output operator lowers total photon number by one") {
  const FockSpace s(3);
  SystemParams p;
  p.phi = 1.1;
  const Matrix a = output_operator(s, p).op;
  for (int i = 0; i < s.dim(); ++i)
    for (int j = 0; j < s.dim(); ++j) {
      const auto [i1, i2] = s.occupation(i);
      const auto [j1, j2] = s.occupation(j);
      if (i1 + i2 != j1 + j2 - 1)
        CHECK(a(i, j) == cplx(0.0));
    }
}

TEST_CASE("intensity examples") {
  SystemParams p;
  p.eps = 0.0;
  const SteadySolution vac = SteadySolution::solve(p);
  CHECK(output_intensity(vac.state(), output_operator(vac.space(), p)) == doctest::Approx(0.0));

  p.eps = 0.1;
  p.phi = kPi;
  const SteadySolution sol = SteadySolution::solve(p);
  CHECK(std::abs(output_intensity(sol.state(), output_operator(sol.space(), p))) < 1e-10);
}

TEST_CASE("coherent limit g2") {
  SystemParams p;
  p.phi = 0.3;
  const SteadySolution sol = SteadySolution::solve(p);
  CHECK(std::abs(g2_zero(sol.state(), output_operator(sol.space(), p)) - 1.0) < 1e-8);
}

TEST_CASE("antibunching and its nearby bunching peak") {
  SystemParams p;
  p.delta = -0.47;
  p.u = 0.02;
  p.phi = 0.824 * kPi;
  const SteadySolution sol = SteadySolution::solve(p);
  CHECK(g2_zero(sol.state(), output_operator(sol.space(), p)) < 0.1);
  p.phi = 0.824 * kPi + kPi / 20.0;
  CHECK(g2_zero(sol.state(), output_operator(sol.space(), p)) > 1.0);
}

TEST_CASE("direct evaluation matches the expansions") {
  std::mt19937 rng(1234);
  for (int trial = 0; trial < 20; ++trial) {
    const SystemParams p = random_params(rng);
    const SteadySolution sol = SteadySolution::solve(p);
    for (Port port : {Port::Main, Port::Complement}) {
      const OutputField f = output_operator(sol.space(), p, port);
      const double n = output_intensity(sol.state(), f);
      const double g = g2_zero(sol.state(), f);
      CHECK(std::abs(n - oracle::intensity_expansion(sol.state(), p, port)) < 1e-12);
      CHECK(std::abs(g - oracle::g2_expansion(sol.state(), p, port)) / g < 1e-10);
      CHECK(g >= 0.0);
    }
  }
}

TEST_CASE("port complementarity") {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 5; ++trial) {
    SystemParams p = random_params(rng);
    const SteadySolution sol = SteadySolution::solve(p);
    const OutputField comp = output_operator(sol.space(), p, Port::Complement);
    SystemParams shifted = p;
    shifted.phi += kPi;
    const OutputField main = output_operator(sol.space(), shifted, Port::Main);
    CHECK(output_intensity(sol.state(), comp) ==
          doctest::Approx(output_intensity(sol.state(), main)).epsilon(1e-12));
    CHECK(g2_zero(sol.state(), comp) == doctest::Approx(g2_zero(sol.state(), main)).epsilon(1e-10));
  }
}

TEST_CASE("coherent closed form") {
  std::mt19937 rng(8);
  for (int trial = 0; trial < 5; ++trial) {
    SystemParams p = random_params(rng);
    p.u = 0.0;
    const SteadySolution sol = SteadySolution::solve(p, {7});
    for (Port port : {Port::Main, Port::Complement})
      CHECK(std::abs(output_intensity(sol.state(), output_operator(sol.space(), p, port)) -
                     oracle::coherent_intensity(p, port)) < 1e-8);
  }
}

TEST_CASE("vanishing intensity") {
  SystemParams p;
  p.eps = 0.0;
  const SteadySolution sol = SteadySolution::solve(p);
  try {
    g2_zero(sol.state(), output_operator(sol.space(), p));
    FAIL("expected undefined correlation");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UndefinedCorrelation);
  }
}
