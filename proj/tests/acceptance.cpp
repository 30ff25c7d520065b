// Acceptance criteria 1-12. One line per criterion; exit status is the
// number of failed criteria.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "mzi/analytic.hpp"
#include "mzi/config.hpp"
#include "mzi/dynamics.hpp"
#include "mzi/error.hpp"
#include "mzi/interferometer.hpp"
#include "mzi/oracle.hpp"
#include "mzi/sensing.hpp"
#include "mzi/sweep.hpp"

using namespace mzi;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool passed;
  std::string detail;
};

std::string num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

SystemParams working_point() {
  SystemParams p;
  p.delta = -0.47;
  p.u = 0.02;
  p.eps = 0.1;
  p.phi = 0.824 * kPi;
  return p;
}

double g2_at(const SteadySolution& sol, const SystemParams& p) {
  return g2_zero(sol.state(), output_operator(sol.space(), p));
}

// Distance between global max and min of a sampled curve after parabolic
// refinement of both extrema; period > 0 wraps the axis.
double extremum_separation(const std::vector<double>& xs, const std::vector<double>& ys,
                           double period) {
  const std::size_t n = ys.size();
  const double h = xs[1] - xs[0];
  auto vertex = [&](std::size_t i) {
    if (period <= 0.0 && (i == 0 || i + 1 == n))
      return xs[i];
    const double y0 = ys[(i + n - 1) % n], y1 = ys[i], y2 = ys[(i + 1) % n];
    const double c = y0 - 2.0 * y1 + y2;
    return c == 0.0 ? xs[i] : xs[i] + 0.5 * h * (y0 - y2) / c;
  };
  const auto lo = static_cast<std::size_t>(std::min_element(ys.begin(), ys.end()) - ys.begin());
  const auto hi = static_cast<std::size_t>(std::max_element(ys.begin(), ys.end()) - ys.begin());
  double d = std::abs(vertex(hi) - vertex(lo));
  if (period > 0.0)
    d = std::min(d, period - d);
  return d;
}

Outcome c1_optimal_detuning() {
  const auto [lo, hi] = optimal_detuning(0.02);
  const bool ok = std::abs(lo + 0.4685) <= 0.005 && std::abs(hi - 0.4685) <= 0.005;
  return {ok, "delta_opt = " + num(lo) + ", " + num(hi) + " (target +-0.4685 +- 0.005)"};
}

Outcome c2_optimal_phase() {
  const double phi = optimal_phase(0.02, -0.4685) / kPi;
  return {phi >= 0.822 && phi <= 0.828, "phi_opt/pi = " + num(phi) + " (window [0.822, 0.828])"};
}

Outcome c3_blockade_depth() {
  SystemParams p = working_point();
  p.delta = -0.4685;
  p.phi = optimal_phase(0.02, p.delta);
  const Optimum best = refine_numeric_optimum(p, p.delta, p.phi, SolverOptions{5});

  double bench = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 400; ++i) {
    SystemParams q = p;
    q.delta1 = -2.0 + 4.0 * i / 400.0;
    bench = std::min(bench, oracle::single_cavity_g2(SteadySolution::solve(q).state()));
  }
  const bool ok = best.value < 0.1 && bench >= 10.0 * best.value;
  return {ok, "g2 = " + num(best.value) + " at (" + num(best.delta) + ", " + num(best.phi / kPi) +
                  " pi); single Kerr cavity best g2 = " + num(bench) + ", ratio " +
                  num(bench / best.value) + " (need g2 < 0.1, ratio >= 10)"};
}

Outcome c4_analytic_numeric() {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> ud(0.0, 0.1), dd(-2.0, 2.0), pd(0.0, 2.0 * kPi);
  double worst = 0.0;
  int non_monotone = 0;
  for (int s = 0; s < 20; ++s) {
    SystemParams p;
    p.u = ud(rng);
    p.delta = dd(rng);
    p.phi = pd(rng);
    double previous = std::numeric_limits<double>::infinity();
    for (double eps : {0.1, 0.05, 0.02, 0.01}) {
      p.eps = eps;
      const SteadySolution sol = solve_adequate(p);
      const double a = analytic_g2(amplitudes(p), p);
      const double gap = std::abs(g2_at(sol, p) - a) / a;
      if (!(gap < previous))
        ++non_monotone;
      previous = gap;
    }
    worst = std::max(worst, previous);
  }
  return {worst < 0.05 && non_monotone == 0,
          "max gap at eps=0.01 = " + num(worst) + " (< 0.05), non-monotone sets = " +
              std::to_string(non_monotone)};
}

Outcome c5_g2_tau() {
  const SystemParams p = working_point();
  const auto taus = uniform_taus(10.0, 200);
  bool ok = true;
  std::string detail;
  for (SolverKind kind : {SolverKind::Product, SolverKind::Full}) {
    const SteadySolution sol = SteadySolution::solve(p, {5, kind});
    const auto g = g2_tau(sol, output_operator(sol.space(), p), taus);
    double min_step = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k < g.values.size(); ++k)
      min_step = std::min(min_step, g.values[k] - g.values[k - 1]);
    const double tail = std::abs(g.values.back() - 1.0);
    ok = ok && g.values.front() < 0.1 && tail < 1e-3 && min_step >= -1e-4;
    detail += std::string(kind == SolverKind::Product ? "product" : "full") +
              ": g2(0) = " + num(g.values.front()) + ", |g2(10)-1| = " + num(tail) +
              ", min step = " + num(min_step) + "; ";
  }
  return {ok, detail + "(g2(0) < 0.1, tail < 1e-3, step >= -1e-4)"};
}

Outcome c6_coherent_limit() {
  // Truncation error of the coherences is ~|alpha|^(n_max+1); a near-dark
  // port magnifies it, so this oracle runs at n_max = 8.
  constexpr int kNmax = 8;
  double g2_dev = 0.0, n_dev = 0.0, g2_dev_n5 = 0.0;
  for (double delta : {-0.47, 0.0, 0.6}) {
    for (double phi : {0.0, 0.5 * kPi, 0.824 * kPi, 1.3 * kPi}) {
      SystemParams p = working_point();
      p.u = 0.0;
      p.delta = delta;
      p.phi = phi;
      const SteadySolution sol = SteadySolution::solve(p, {kNmax});
      const OutputField f = output_operator(sol.space(), p);
      n_dev = std::max(n_dev, std::abs(output_intensity(sol.state(), f) - oracle::coherent_intensity(p)));
      for (double v : g2_tau(sol, f, uniform_taus(10.0, 200)).values)
        g2_dev = std::max(g2_dev, std::abs(v - 1.0));
      const SteadySolution coarse = SteadySolution::solve(p, {5});
      g2_dev_n5 = std::max(g2_dev_n5, std::abs(g2_at(coarse, p) - 1.0));
    }
  }
  return {g2_dev < 1e-6 && n_dev < 1e-8,
          "max |g2(tau)-1| = " + num(g2_dev) + " (< 1e-6), max |N_out - closed form| = " +
              num(n_dev) + " (< 1e-8) at n_max=8; at n_max=5 |g2(0)-1| reaches " + num(g2_dev_n5)};
}

Outcome c7_gyroscope() {
  const double grid[] = {0.0, kEarthRotation};
  const auto r = response_curve(GyroscopeModel{}, grid, default_gyro_base(), Observable::G2);
  const bool ok = std::abs(r[0].value - 2.79) <= 0.10 && std::abs(r[1].value - 2.97) <= 0.10;
  return {ok, "g2(Omega=0) = " + num(r[0].value) + " (2.79 +- 0.10), g2(Omega_earth) = " +
                  num(r[1].value) + " (2.97 +- 0.10)"};
}

Outcome c8_gyro_ratio() {
  const GyroscopeModel g;
  const auto [lo, hi] = full_period_omega_range(g);
  const auto eg = peak_sensitivity(g, lo, hi, 2001, default_gyro_base(), Observable::G2);
  const auto en = peak_sensitivity(g, lo, hi, 401, default_gyro_base(), Observable::Intensity);
  const double ratio = std::log10(std::abs(eg.eta) / std::abs(en.eta));
  // Same ratio on the narrow +-5e-4 rad/s window, reported for reference only.
  const auto ng = peak_sensitivity(g, -5e-4, 5e-4, 401, default_gyro_base(), Observable::G2);
  const auto nn = peak_sensitivity(g, -5e-4, 5e-4, 101, default_gyro_base(), Observable::Intensity);
  const double narrow = std::log10(std::abs(ng.eta) / std::abs(nn.eta));
  return {ratio >= 3.3 && ratio <= 4.7,
          "log10 ratio = " + num(ratio) + " (window [3.3, 4.7]); max|eta_g| = " +
              num(std::abs(eg.eta)) + " s/rad, max|eta_n| = " + num(std::abs(en.eta)) +
              " s/rad over one Sagnac period Omega in [" + num(lo) + ", " + num(hi) +
              "]; on Omega in [-5e-4, 5e-4] the ratio is 10^" + num(narrow)};
}

Outcome c9_thermometer() {
  const ThermometerModel t;
  const auto eg = peak_sensitivity(t, -0.3, 0.3, 601, default_thermo_base(), Observable::G2);
  const auto en = peak_sensitivity(t, -0.3, 0.3, 121, default_thermo_base(), Observable::Intensity);
  const double peak = std::abs(eg.eta);
  const double ratio = peak / std::abs(en.eta);
  const bool ok = std::abs(peak - 28.0) <= 0.15 * 28.0 && ratio >= 1.5e3 && ratio <= 6.0e3;
  return {ok, "max|eta_g,T| = " + num(peak) + "/degC at dT = " + num(eg.measurand) +
                  " (28 +- 15%), ratio = " + num(ratio) + " (3e3 within x2)"};
}

Outcome c10_interval_contrast() {
  SweepSpec spec;
  spec.fixed = working_point();
  spec.observables = {"n_out", "g2_zero"};
  auto columns = [](const std::vector<ResultRecord>& rec) {
    std::vector<double> x, n, g;
    for (const auto& r : rec) {
      x.push_back(r.coordinates[0].second);
      n.push_back(r.observables[0].second);
      g.push_back(r.observables[1].second);
    }
    return std::tuple{x, n, g};
  };
  spec.axis1 = Axis{"phi", 0.0, 2.0 * kPi * 399.0 / 400.0, 400};
  auto [px, pn, pg] = columns(run_sweep(spec));
  const double sg = extremum_separation(px, pg, 2.0 * kPi) / kPi;
  const double sn = extremum_separation(px, pn, 2.0 * kPi) / kPi;

  spec.axis1 = Axis{"delta", -3.0, 3.0, 401};
  auto [dx, dn, dg] = columns(run_sweep(spec));
  const double dgs = extremum_separation(dx, dg, 0.0);
  const double dns = extremum_separation(dx, dn, 0.0);

  const bool ok = std::abs(sg - 0.05) <= 0.3 * 0.05 && std::abs(sn - 1.0) <= 0.1 &&
                  std::abs(dgs - 0.18) <= 0.3 * 0.18 && std::abs(dns - 2.4) <= 0.2 * 2.4;
  return {ok, "phi: g2 " + num(sg) + " pi (0.05 pi +- 30%), N_out " + num(sn) +
                  " pi (1 pi +- 10%); delta: g2 " + num(dgs) + " (0.18 +- 30%), N_out " + num(dns) +
                  " (2.4 +- 20%)"};
}

Outcome c12_oracle_equivalence() {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int s = 0; s < 20; ++s) {
    SystemParams p;
    p.delta1 = u(rng) - 0.5;
    p.delta = 4.0 * u(rng) - 2.0;
    p.u = 0.2 * u(rng);
    p.eps = 0.02 + 0.1 * u(rng);
    p.kappa1 = 0.7 + 0.6 * u(rng);
    p.kappa2 = 0.7 + 0.6 * u(rng);
    p.phi = 2.0 * kPi * u(rng);
    const SteadySolution sol = solve_adequate(p);
    const double direct = g2_at(sol, p);
    worst = std::max(worst, std::abs(direct - oracle::g2_expansion(sol.state(), p)) / direct);
  }
  return {worst < 1e-10, "max relative difference = " + num(worst) + " (< 1e-10)"};
}

Outcome c11_structure() {
  const SolveStatistics s = solve_statistics();
  const bool ok = s.solves > 0 && s.residual < 1e-10 && s.trace_error < 1e-10 &&
                  s.hermiticity_error < 1e-10 && s.min_eigenvalue > -1e-8 &&
                  s.boundary_population < 1e-8;
  return {ok, std::to_string(s.solves) + " solves; worst residual " + num(s.residual) +
                  ", trace " + num(s.trace_error) + ", hermiticity " + num(s.hermiticity_error) +
                  ", min eigenvalue " + num(s.min_eigenvalue) + ", boundary " +
                  num(s.boundary_population)};
}

} // namespace

int main() {
  reset_solve_statistics();
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"optimal detuning", c1_optimal_detuning},
      {"optimal phase", c2_optimal_phase},
      {"blockade depth", c3_blockade_depth},
      {"analytic-numeric convergence", c4_analytic_numeric},
      {"g2(tau) behaviour", c5_g2_tau},
      {"coherent limit", c6_coherent_limit},
      {"gyroscope g2", c7_gyroscope},
      {"gyroscope sensitivity ratio", c8_gyro_ratio},
      {"thermometer", c9_thermometer},
      {"interval contrast", c10_interval_contrast},
      {"structural invariants", c11_structure},
      {"oracle equivalence", c12_oracle_equivalence},
  };
  // Structural invariants are read last so they cover every other solve.
  std::vector<Outcome> results(criteria.size());
  auto run = [&](std::size_t i) {
    try {
      results[i] = criteria[i].second();
    } catch (const Error& e) {
      results[i] = {false, std::string("error ") + to_string(e.code()) + ": " + e.what()};
    }
  };
  for (std::size_t i = 0; i < criteria.size(); ++i)
    if (i != 10)
      run(i);
  run(10);

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    std::printf("criterion %2zu %-30s %s  %s\n", i + 1, criteria[i].first,
                results[i].passed ? "PASS" : "FAIL", results[i].detail.c_str());
    failed += results[i].passed ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed;
}
