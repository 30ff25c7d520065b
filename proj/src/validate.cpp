#include "mzi/validate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>

#include "mzi/analytic.hpp"
#include "mzi/dynamics.hpp"
#include "mzi/error.hpp"
#include "mzi/interferometer.hpp"
#include "mzi/oracle.hpp"
#include "mzi/sensing.hpp"
#include "mzi/sweep.hpp"

namespace mzi {
namespace {

constexpr double kPi = std::numbers::pi;

// Worst structural diagnostics seen over every solve the suite performs.
struct Worst {
  double residual = 0.0;
  double trace = 0.0;
  double hermiticity = 0.0;
  double min_eigenvalue = 0.0;
  double boundary = 0.0;
  int solves = 0;

  void add(const SteadyDiagnostics& d) {
    residual = std::max(residual, d.residual);
    trace = std::max(trace, d.trace_error);
    hermiticity = std::max(hermiticity, d.hermiticity_error);
    min_eigenvalue = std::min(min_eigenvalue, d.min_eigenvalue);
    boundary = std::max(boundary, d.boundary_population);
    ++solves;
  }
};

class Suite {
public:
  explicit Suite(const ValidationOptions& opts) : opts_(opts) {
    solver_.n_max = opts.n_max;
    solver_.dissipator_scale = opts.dissipator_scale;
  }

  std::vector<Check> run() {
    guarded("optimal_conditions", [&] { optimal_conditions(); });
    guarded("blockade_depth", [&] { blockade_depth(); });
    guarded("analytic_numeric", [&] { analytic_numeric(); });
    guarded("g2_tau", [&] { correlation_in_time(); });
    guarded("coherent_limit", [&] { coherent_limit(); });
    guarded("oracle_equivalence", [&] { oracle_equivalence(); });
    guarded("truncation", [&] { truncation(); });
    guarded("gyroscope", [&] { gyroscope(); });
    guarded("thermometer", [&] { thermometer(); });
    guarded("interval_contrast", [&] { interval_contrast(); });
    guarded("extremum_maps", [&] { extremum_maps(); });
    structure();
    return std::move(checks_);
  }

private:
  void guarded(const std::string& group, const std::function<void()>& body) {
    try {
      body();
    } catch (const Error& e) {
      checks_.push_back({group + ".error", false, 0.0, 0.0, 0.0, e.what()});
    }
  }

  void within(const std::string& name, double measured, double expected, double tol,
              std::string detail = {}) {
    const bool ok = std::isfinite(measured) && std::abs(measured - expected) <= tol;
    checks_.push_back({name, ok, measured, expected, tol, std::move(detail)});
  }

  void below(const std::string& name, double measured, double bound, std::string detail = {}) {
    checks_.push_back({name, std::isfinite(measured) && measured < bound, measured, 0.0, bound,
                       std::move(detail)});
  }

  // Same truncation policy as the sweeps: one re-run with n_max + 2 when the
  // boundary population is too high.
  SteadySolution solve(const SystemParams& p, std::optional<int> n_max = std::nullopt) {
    SolverOptions o = solver_;
    if (n_max)
      o.n_max = *n_max;
    SteadySolution sol = solve_adequate(p, o);
    worst_.add(sol.diagnostics());
    return sol;
  }

  static SystemParams working_point() {
    SystemParams p;
    p.delta = -0.47;
    p.u = 0.02;
    p.eps = 0.1;
    p.phi = 0.824 * kPi;
    return p;
  }

  void optimal_conditions() {
    const auto [lo, hi] = optimal_detuning(0.02);
    within("optimal_detuning.minus", lo, -0.4685, 0.005);
    within("optimal_detuning.plus", hi, 0.4685, 0.005);
    within("optimal_phase.minus_over_pi", optimal_phase(0.02, lo) / kPi, 0.825, 0.003);
    within("optimal_phase.plus_over_pi", optimal_phase(0.02, hi) / kPi, 1.104, 0.003);
  }

  void blockade_depth() {
    SystemParams p = working_point();
    p.delta = optimal_detuning(0.02).first;
    p.phi = optimal_phase(0.02, p.delta);
    const Optimum best = refine_numeric_optimum(p, p.delta, p.phi, solver_);
    below("blockade.g2_refined", best.value, 0.1,
          "delta=" + format_double(best.delta) + " phi/pi=" + format_double(best.phi / kPi));

    // Single Kerr cavity benchmark: best g2 of cavity 1 alone over its detuning.
    double bench = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 80; ++i) {
      SystemParams q = p;
      q.delta1 = -2.0 + 4.0 * i / 80.0;
      bench = std::min(bench, oracle::single_cavity_g2(solve(q).state()));
    }
    checks_.push_back({"blockade.single_cavity_ratio", bench / best.value >= 10.0,
                       bench / best.value, 10.0, 0.0, "single-cavity g2=" + format_double(bench)});
  }

  void analytic_numeric() {
    std::mt19937_64 rng(20240607);
    std::uniform_real_distribution<double> u_dist(0.0, 0.1), d_dist(-2.0, 2.0),
        phi_dist(0.0, 2.0 * kPi);
    const double eps_values[] = {0.1, 0.05, 0.02, 0.01};
    double worst_gap = 0.0;
    int non_monotone = 0;
    for (int s = 0; s < 20; ++s) {
      SystemParams p;
      p.u = u_dist(rng);
      p.delta = d_dist(rng);
      p.phi = phi_dist(rng);
      double previous = std::numeric_limits<double>::infinity();
      for (double eps : eps_values) {
        p.eps = eps;
        const SteadySolution sol = solve(p);
        const double numeric = g2_zero(sol.state(), output_operator(sol.space(), p));
        const double analytic = analytic_g2(amplitudes(p), p);
        const double gap = std::abs(numeric - analytic) / analytic;
        if (!(gap < previous))
          ++non_monotone;
        previous = gap;
        if (eps == 0.01)
          worst_gap = std::max(worst_gap, gap);
      }
    }
    below("analytic_numeric.max_gap_eps_0.01", worst_gap, 0.05);
    within("analytic_numeric.non_monotone_sets", non_monotone, 0.0, 0.0);
  }

  void correlation_in_time() {
    const SystemParams p = working_point();
    const SteadySolution sol = solve(p);
    const OutputField f = output_operator(sol.space(), p);
    const CorrelationSeries g = g2_tau(sol, f, uniform_taus(10.0, 200));
    const double direct = g2_zero(sol.state(), f);
    below("g2_tau.zero_delay", g.values.front(), 0.1);
    below("g2_tau.matches_g2_zero", std::abs(g.values.front() - direct) / direct, 1e-6);
    below("g2_tau.long_delay", std::abs(g.values.back() - 1.0), 1e-3);
    double worst_drop = 0.0;
    for (std::size_t k = 2; k < g.values.size(); ++k)
      worst_drop = std::max(worst_drop, g.values[k - 1] - g.values[k]);
    below("g2_tau.monotone_drop", worst_drop, 1e-4);
  }

  // Coherences of the truncated coherent state are off by ~|alpha|^(n_max+1),
  // which near a dark port shows up in g2 at the 1e-6 level for n_max = 5.
  static constexpr int kCoherentNmax = 8;

  void coherent_limit() {
    double g2_dev = 0.0;
    double n_dev = 0.0;
    for (double delta : {0.0, -0.47, 0.8}) {
      for (double phi : {0.0, 0.824 * kPi, 1.5}) {
        SystemParams p = working_point();
        p.u = 0.0;
        p.delta = delta;
        p.phi = phi;
        const SteadySolution sol = solve(p, std::max(solver_.n_max, kCoherentNmax));
        const OutputField f = output_operator(sol.space(), p);
        if (output_intensity(sol.state(), f) < 1e-8)
          continue;
        const auto g = g2_tau(sol, f, uniform_taus(10.0, 50));
        for (double v : g.values)
          g2_dev = std::max(g2_dev, std::abs(v - 1.0));
        n_dev = std::max(n_dev,
                         std::abs(output_intensity(sol.state(), f) - oracle::coherent_intensity(p)));
      }
    }
    below("coherent.g2_tau_deviation", g2_dev, 1e-6,
          "n_max=" + std::to_string(std::max(solver_.n_max, kCoherentNmax)));
    below("coherent.intensity_deviation", n_dev, 1e-8);
  }

  void oracle_equivalence() {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double worst = 0.0;
    double worst_n = 0.0;
    for (int s = 0; s < 20; ++s) {
      SystemParams p;
      p.delta1 = -0.5 + unit(rng);
      p.delta = -2.0 + 4.0 * unit(rng);
      p.u = 0.2 * unit(rng);
      p.eps = 0.02 + 0.2 * unit(rng);
      p.kappa1 = 0.5 + unit(rng);
      p.kappa2 = 0.5 + unit(rng);
      p.phi = 2.0 * kPi * unit(rng);
      const SteadySolution sol = solve(p);
      const OutputField f = output_operator(sol.space(), p);
      const double direct = g2_zero(sol.state(), f);
      worst = std::max(worst, std::abs(direct - oracle::g2_expansion(sol.state(), p)) / direct);
      const double n = output_intensity(sol.state(), f);
      worst_n = std::max(worst_n, std::abs(n - oracle::intensity_expansion(sol.state(), p)));
    }
    below("oracle.g2_expansion_relative", worst, 1e-10);
    below("oracle.intensity_expansion", worst_n, 1e-12);
  }

  void truncation() {
    const SteadySolution sol = SteadySolution::solve(working_point(), solver_);
    below("truncation.boundary_population", sol.diagnostics().boundary_population,
          StructureTolerances::boundary_population,
          "n_max=" + std::to_string(sol.space().n_max()));
  }

  void gyroscope() {
    const GyroscopeModel gyro;
    const SystemParams base = default_gyro_base();
    SensingOptions so;
    so.solver = solver_;
    so.threads = opts_.threads;
    const double grid[] = {0.0, kEarthRotation};
    const auto g2 = response_curve(gyro, grid, base, Observable::G2, so);
    for (const auto& pt : g2)
      worst_.add(pt.diagnostics);
    within("gyro.g2_at_rest", g2[0].value, 2.79, 0.10);
    within("gyro.g2_at_earth_rate", g2[1].value, 2.97, 0.10);

    const auto [lo, hi] = full_period_omega_range(gyro);
    const auto eta_g = peak_sensitivity(gyro, lo, hi, 2001, base, Observable::G2, so);
    const auto eta_n = peak_sensitivity(gyro, lo, hi, 401, base, Observable::Intensity, so);
    const double ratio = std::log10(std::abs(eta_g.eta) / std::abs(eta_n.eta));
    within("gyro.log10_sensitivity_ratio", ratio, 4.0, 0.7,
           "eta_g=" + format_double(eta_g.eta) + " eta_n=" + format_double(eta_n.eta));
  }

  void thermometer() {
    const ThermometerModel thermo;
    const SystemParams base = default_thermo_base();
    SensingOptions so;
    so.solver = solver_;
    so.threads = opts_.threads;
    const auto eta_g = peak_sensitivity(thermo, -0.3, 0.3, 601, base, Observable::G2, so);
    const auto eta_n = peak_sensitivity(thermo, -0.3, 0.3, 121, base, Observable::Intensity, so);
    within("thermo.peak_eta_g", std::abs(eta_g.eta), 28.0, 0.15 * 28.0,
           "at dT=" + format_double(eta_g.measurand));
    const double ratio = std::abs(eta_g.eta) / std::abs(eta_n.eta);
    checks_.push_back({"thermo.sensitivity_ratio", ratio >= 1.5e3 && ratio <= 6.0e3, ratio, 3.0e3,
                       2.0, "factor-of-two band"});
  }

  // Distance between the global maximum and minimum of a sampled curve,
  // with parabolic refinement of each extremum.
  static double separation(const std::vector<double>& xs, const std::vector<double>& ys,
                           double period) {
    const std::size_t n = ys.size();
    auto refine = [&](std::size_t i) {
      const bool periodic = period > 0.0;
      if (!periodic && (i == 0 || i + 1 == n))
        return xs[i];
      const double y0 = ys[(i + n - 1) % n], y1 = ys[i], y2 = ys[(i + 1) % n];
      const double denom = y0 - 2.0 * y1 + y2;
      const double h = xs[1] - xs[0];
      return denom == 0.0 ? xs[i] : xs[i] + 0.5 * h * (y0 - y2) / denom;
    };
    const auto lo = std::min_element(ys.begin(), ys.end()) - ys.begin();
    const auto hi = std::max_element(ys.begin(), ys.end()) - ys.begin();
    double d = std::abs(refine(static_cast<std::size_t>(hi)) - refine(static_cast<std::size_t>(lo)));
    if (period > 0.0)
      d = std::min(d, period - d);
    return d;
  }

  std::vector<ResultRecord> sweep(const SweepSpec& spec) {
    auto records = run_sweep(spec);
    for (const auto& r : records) {
      if (r.status != "ok")
        fail(ErrorCode::SolverFailure, "sweep point failed: " + r.status);
      worst_.add(r.diagnostics);
    }
    return records;
  }

  static double column(const ResultRecord& r, const std::string& name) {
    for (const auto& [k, v] : r.observables)
      if (k == name)
        return v;
    for (const auto& [k, v] : r.coordinates)
      if (k == name)
        return v;
    return std::numeric_limits<double>::quiet_NaN();
  }

  void interval_contrast() {
    SweepSpec spec;
    spec.fixed = working_point();
    spec.solver = solver_;
    spec.threads = opts_.threads;
    spec.observables = {"n_out", "g2_zero"};

    // Periodic phi grid without the duplicated endpoint.
    spec.axis1 = Axis{"phi", 0.0, 2.0 * kPi * 399.0 / 400.0, 400};
    auto rec = sweep(spec);
    std::vector<double> xs, g, n;
    for (const auto& r : rec) {
      xs.push_back(column(r, "phi"));
      g.push_back(column(r, "g2_zero"));
      n.push_back(column(r, "n_out"));
    }
    const double dphi_g = separation(xs, g, 2.0 * kPi) / kPi;
    const double dphi_n = separation(xs, n, 2.0 * kPi) / kPi;
    within("interval.phi_g2_over_pi", dphi_g, 0.05, 0.3 * 0.05);
    within("interval.phi_n_out_over_pi", dphi_n, 1.0, 0.1);

    spec.fixed.phi = 0.824 * kPi;
    spec.axis1 = Axis{"delta", -3.0, 3.0, 401};
    rec = sweep(spec);
    xs.clear();
    g.clear();
    n.clear();
    for (const auto& r : rec) {
      xs.push_back(column(r, "delta"));
      g.push_back(column(r, "g2_zero"));
      n.push_back(column(r, "n_out"));
    }
    within("interval.delta_g2", separation(xs, g, 0.0), 0.18, 0.3 * 0.18);
    within("interval.delta_n_out", separation(xs, n, 0.0), 2.4, 0.2 * 2.4);
  }

  void extremum_maps() {
    SweepSpec spec;
    spec.fixed = working_point();
    spec.solver = solver_;
    spec.threads = opts_.threads;
    spec.observables = {"g2_zero"};
    spec.axis1 = Axis{"delta", -1.0, 1.0, 101};
    spec.axis2 = Axis{"phi", 0.0, 2.0 * kPi, 201};
    const auto rec = sweep(spec);
    // Lowest log10 g2 separately on each detuning half plane.
    const ResultRecord* best[2] = {nullptr, nullptr};
    for (const auto& r : rec) {
      const double d = column(r, "delta");
      if (d == 0.0)
        continue;
      const int side = d < 0.0 ? 0 : 1;
      if (!best[side] || column(r, "log10_g2") < column(*best[side], "log10_g2"))
        best[side] = &r;
    }
    within("map_delta_phi.minus.delta", column(*best[0], "delta"), -0.47, 0.03);
    within("map_delta_phi.minus.phi_over_pi", column(*best[0], "phi") / kPi, 0.824, 0.01);
    within("map_delta_phi.plus.delta", column(*best[1], "delta"), 0.47, 0.03);
    within("map_delta_phi.plus.phi_over_pi", column(*best[1], "phi") / kPi, 1.104, 0.01);

    SweepSpec uspec = spec;
    uspec.axis1 = Axis{"u", 0.002, 0.1, 50};
    uspec.axis2 = Axis{"delta", -1.0, 0.0, 101};
    const auto urec = sweep(uspec);
    const auto umin = std::min_element(urec.begin(), urec.end(), [&](const auto& a, const auto& b) {
      return column(a, "log10_g2") < column(b, "log10_g2");
    });
    within("map_u_delta.u_at_minimum", column(*umin, "u"), 0.02, 0.01,
           "delta=" + format_double(column(*umin, "delta")));
  }

  void structure() {
    const std::string detail = std::to_string(worst_.solves) + " solves";
    below("structure.residual", worst_.residual, StructureTolerances::residual, detail);
    below("structure.trace_error", worst_.trace, StructureTolerances::trace, detail);
    below("structure.hermiticity", worst_.hermiticity, StructureTolerances::hermiticity, detail);
    checks_.push_back({"structure.min_eigenvalue",
                       worst_.min_eigenvalue > StructureTolerances::min_eigenvalue,
                       worst_.min_eigenvalue, 0.0, StructureTolerances::min_eigenvalue, detail});
    below("structure.boundary_population", worst_.boundary,
          StructureTolerances::boundary_population, detail);
  }

  ValidationOptions opts_;
  SolverOptions solver_;
  Worst worst_;
  std::vector<Check> checks_;
};

} // namespace

std::vector<Check> validate(const ValidationOptions& opts) {
  if (opts.n_max < 1)
    fail(ErrorCode::InvalidArgument, "n_max must be >= 1");
  return Suite(opts).run();
}

bool all_passed(const std::vector<Check>& checks) {
  return !checks.empty() &&
         std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

void write_report(const std::vector<Check>& checks, std::ostream& out) {
  out << "name,status,measured,expected,tolerance\n";
  for (const auto& c : checks)
    out << c.name << ',' << (c.passed ? "pass" : "fail") << ',' << format_double(c.measured)
        << ',' << format_double(c.expected) << ',' << format_double(c.tolerance) << '\n';
}

} // namespace mzi
