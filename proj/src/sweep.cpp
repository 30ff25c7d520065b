#include "mzi/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "mzi/error.hpp"
#include "mzi/interferometer.hpp"
#include "mzi/parallel.hpp"
#include "mzi/sensing.hpp"

namespace mzi {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

// Observable columns in emission order; log10_g2 always follows g2_zero.
std::vector<std::string> observable_columns(const SweepSpec& spec, bool tau_axis) {
  std::vector<std::string> cols;
  for (const auto& o : spec.observables) {
    if (o == "log10_g2" || o == "g2_tau")
      continue;
    cols.push_back(o);
    if (o == "g2_zero")
      cols.emplace_back("log10_g2");
  }
  if (contains(spec.observables, "log10_g2") && !contains(cols, "log10_g2"))
    cols.emplace_back("log10_g2");
  if (tau_axis)
    cols.emplace_back("g2_tau");
  return cols;
}

struct Point {
  std::vector<std::pair<std::string, double>> coords;
};

struct Resolved {
  SystemParams params;       // all coordinates applied
  SystemParams sensor_base;  // coordinates applied except the sensor axis
  std::optional<SensorModel> sensor;
  double measurand = 0.0;
};

Resolved resolve(const SweepSpec& spec, const Point& pt) {
  Resolved r;
  r.params = spec.fixed;
  // Plain parameters first so a sensor axis composes with them.
  for (const auto& [name, v] : pt.coords) {
    if (name == "delta") r.params.delta = v;
    else if (name == "phi") r.params.phi = v;
    else if (name == "u") r.params.u = v;
    else if (name == "eps") r.params.eps = v;
  }
  r.sensor_base = r.params;
  for (const auto& [name, v] : pt.coords) {
    if (name == "omega") {
      r.sensor = SensorModel{spec.gyro};
      r.measurand = v;
      r.params = gyro_params(spec.gyro, v, r.params);
    } else if (name == "delta_t") {
      r.sensor = SensorModel{spec.thermo};
      r.measurand = v;
      r.params = thermo_params(spec.thermo, v, r.params);
    }
  }
  return r;
}

double safe(const std::function<double()>& f, std::string& status) {
  try {
    return f();
  } catch (const Error& e) {
    if (status == "ok" || status == "truncation-rerun")
      status = to_string(e.code());
    return kNaN;
  }
}

std::vector<ResultRecord> evaluate_point(const SweepSpec& spec, const Point& pt,
                                         const std::vector<std::string>& columns,
                                         const std::vector<double>* taus) {
  ResultRecord base;
  base.coordinates = pt.coords;
  std::optional<SteadySolution> sol;
  Resolved res;
  try {
    res = resolve(spec, pt);
    sol = solve_adequate(res.params, spec.solver, &base.truncation_rerun);
    base.diagnostics = sol->diagnostics();
    if (base.truncation_rerun)
      base.status = base.diagnostics.boundary_population > StructureTolerances::boundary_population
                        ? "truncation-marginal"
                        : "truncation-rerun";
  } catch (const Error& e) {
    base.status = to_string(e.code());
  }

  std::optional<OutputField> field;
  if (sol)
    field = output_operator(sol->space(), sol->params(), spec.port);

  SensingOptions sense;
  sense.solver = spec.solver;
  sense.port = spec.port;

  double g2 = kNaN;
  for (const auto& col : columns) {
    if (col == "g2_tau")
      continue;
    double v = kNaN;
    if (sol) {
      const Matrix a1 = col == "n1" || col == "n2" ? annihilator(sol->space(), col == "n1" ? 1 : 2)
                                                   : Matrix();
      if (col == "n_out")
        v = output_intensity(sol->state(), *field);
      else if (col == "g2_zero")
        v = g2 = safe([&] { return g2_zero(sol->state(), *field); }, base.status);
      else if (col == "log10_g2")
        v = std::isnan(g2) ? kNaN : std::log10(g2);
      else if (col == "n1" || col == "n2")
        v = sol->state().expectation(a1.adjoint() * a1).real();
      else if (col == "eta_n" || col == "eta_g") {
        if (!res.sensor)
          v = kNaN;
        else
          v = safe(
              [&] {
                return sensitivity(*res.sensor, res.measurand, res.sensor_base,
                                   col == "eta_n" ? Observable::Intensity : Observable::G2, sense);
              },
              base.status);
      }
    }
    base.observables.emplace_back(col, v);
  }

  if (!taus)
    return {base};

  std::vector<ResultRecord> out;
  std::vector<double> series(taus->size(), kNaN);
  if (sol)
    safe(
        [&] {
          series = g2_tau(*sol, *field, *taus).values;
          return 0.0;
        },
        base.status);
  for (std::size_t k = 0; k < taus->size(); ++k) {
    ResultRecord r = base;
    r.coordinates.emplace_back("tau", (*taus)[k]);
    r.observables.emplace_back("g2_tau", series[k]);
    out.push_back(std::move(r));
  }
  return out;
}

} // namespace

std::vector<ResultRecord> run_sweep(const SweepSpec& spec) {
  spec.validate();
  const bool tau_axis =
      (spec.axis2 && spec.axis2->name == "tau") || (!spec.axis2 && spec.axis1 && spec.axis1->name == "tau");

  std::vector<const Axis*> outer;
  if (spec.axis1 && spec.axis1->name != "tau")
    outer.push_back(&*spec.axis1);
  if (spec.axis2 && spec.axis2->name != "tau")
    outer.push_back(&*spec.axis2);
  std::optional<std::vector<double>> taus;
  if (tau_axis)
    taus = (spec.axis2 ? *spec.axis2 : *spec.axis1).values();

  std::vector<Point> points(1);
  for (const Axis* axis : outer) {
    std::vector<Point> next;
    const auto values = axis->values();
    next.reserve(points.size() * values.size());
    for (const Point& p : points)
      for (double v : values) {
        Point q = p;
        q.coords.emplace_back(axis->name, v);
        next.push_back(std::move(q));
      }
    points = std::move(next);
  }

  const auto columns = observable_columns(spec, tau_axis);
  std::vector<std::vector<ResultRecord>> chunks(points.size());
  parallel_for(points.size(), spec.threads, [&](std::size_t i) {
    chunks[i] = evaluate_point(spec, points[i], columns, taus ? &*taus : nullptr);
  });

  std::vector<ResultRecord> records;
  for (auto& c : chunks)
    for (auto& r : c)
      records.push_back(std::move(r));
  return records;
}

std::vector<ResultRecord> run_g2_tau(const SweepSpec& spec) {
  SweepSpec s = spec;
  const bool has_tau = (s.axis1 && s.axis1->name == "tau") || (s.axis2 && s.axis2->name == "tau");
  if (!has_tau) {
    Axis tau{"tau", 0.0, s.tau_max, s.tau_count};
    if (s.axis1 && !s.axis2)
      s.axis2 = tau;
    else if (!s.axis1)
      s.axis1 = tau;
    else
      fail(ErrorCode::InvalidArgument, "g2tau supports at most one axis besides tau");
  }
  if (!contains(s.observables, "g2_tau"))
    s.observables.emplace_back("g2_tau");
  return run_sweep(s);
}

std::vector<ResultRecord> run_gyro(const SweepSpec& spec) {
  SweepSpec s = spec;
  const auto range = s.omega_range.value_or(full_period_omega_range(s.gyro));
  s.axis1 = Axis{"omega", range.first, range.second, s.omega_count};
  s.axis2.reset();
  s.observables = {"n_out", "g2_zero", "eta_n", "eta_g"};
  return run_sweep(s);
}

std::vector<ResultRecord> run_thermo(const SweepSpec& spec) {
  SweepSpec s = spec;
  s.axis1 = Axis{"delta_t", s.delta_t_range.first, s.delta_t_range.second, s.delta_t_count};
  s.axis2.reset();
  s.observables = {"n_out", "g2_zero", "eta_n", "eta_g"};
  return run_sweep(s);
}

Optimum refine_numeric_optimum(const SystemParams& base, double delta0, double phi0,
                               const SolverOptions& solver, Port port) {
  std::optional<double> cached_delta;
  std::optional<SteadySolution> cached;
  auto objective = [&](double delta, double phi) {
    try {
      if (!cached_delta || *cached_delta != delta) {
        SystemParams p = base;
        p.delta = delta;
        cached = SteadySolution::solve(p, solver);
        cached_delta = delta;
      }
      SystemParams p = cached->params();
      p.phi = phi;
      const double g2 = g2_zero(cached->state(), output_operator(cached->space(), p, port));
      return g2 > 0.0 ? std::log10(g2) : -std::numeric_limits<double>::infinity();
    } catch (const Error&) {
      cached_delta.reset();
      return std::numeric_limits<double>::infinity();
    }
  };
  GridRefinement grid;
  grid.points = 9;
  grid.levels = 30;
  Optimum best = minimize_grid_2d(objective, delta0, phi0, 0.05, 0.05, grid);
  best.value = std::pow(10.0, best.value);
  return best;
}

std::vector<ResultRecord> run_optimal(const SweepSpec& spec) {
  spec.validate();
  std::vector<double> us{spec.fixed.u};
  if (spec.axis1) {
    if (spec.axis1->name != "u" || spec.axis2)
      fail(ErrorCode::InvalidArgument, "optimal accepts only a single 'u' axis");
    us = spec.axis1->values();
  }

  std::vector<ResultRecord> records(us.size() * 2);
  parallel_for(records.size(), spec.threads, [&](std::size_t i) {
    const double u = us[i / 2];
    const int branch = i % 2 == 0 ? -1 : 1;
    ResultRecord& r = records[i];
    r.coordinates = {{"u", u}, {"branch", static_cast<double>(branch)}};
    const char* names[] = {"delta_asymptotic", "phi_asymptotic", "g2_analytic_asymptotic",
                           "g2_numeric_asymptotic", "delta_analytic", "phi_analytic",
                           "g2_analytic", "delta_numeric", "phi_numeric", "g2_numeric"};
    double vals[10];
    std::fill(std::begin(vals), std::end(vals), kNaN);
    try {
      SystemParams p = spec.fixed;
      p.u = u;
      const auto [lo, hi] = optimal_detuning(u / p.kappa1);
      p.delta = (branch < 0 ? lo : hi) * p.kappa1;
      p.phi = optimal_phase(u / p.kappa1, p.delta / p.kappa1);
      vals[0] = p.delta;
      vals[1] = p.phi;
      vals[2] = analytic_g2(amplitudes(p), p);
      const SteadySolution sol = SteadySolution::solve(p, spec.solver);
      r.diagnostics = sol.diagnostics();
      vals[3] = g2_zero(sol.state(), output_operator(sol.space(), p, spec.port));

      const Optimum an = refine_analytic_optimum(p, branch);
      vals[4] = an.delta;
      vals[5] = an.phi;
      vals[6] = an.value;
      const Optimum num = refine_numeric_optimum(p, an.delta, an.phi, spec.solver, spec.port);
      vals[7] = num.delta;
      vals[8] = num.phi;
      vals[9] = num.value;
    } catch (const Error& e) {
      r.status = to_string(e.code());
    }
    for (int k = 0; k < 10; ++k)
      r.observables.emplace_back(names[k], vals[k]);
  });
  return records;
}

} // namespace mzi
