#include "mzi/sensing.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "mzi/parallel.hpp"

namespace mzi {
namespace {

void require_finite(std::initializer_list<double> values, const char* what) {
  for (double v : values)
    if (!std::isfinite(v))
      fail(ErrorCode::InvalidArgument, std::string(what) + " parameters must be finite");
}

double observe(const SensorModel& model, double x, const SystemParams& base, Observable obs,
               const SensingOptions& opts) {
  const SteadySolution sol = solve_adequate(sensor_params(model, x, base), opts.solver);
  return evaluate_observable(sol, obs, opts.port);
}

} // namespace

void GyroscopeModel::validate() const {
  require_finite({area, lambda0, phi0}, "gyroscope");
  if (!(area > 0.0) || !(lambda0 > 0.0))
    fail(ErrorCode::InvalidArgument, "gyroscope area and wavelength must be positive");
}

double GyroscopeModel::phase_per_rate() const {
  validate();
  return 4.0 * std::numbers::pi * area / (lambda0 * kSpeedOfLight);
}

void ThermometerModel::validate() const {
  require_finite({d0, cavity_len, alpha, beta, n0, omega2_over_kappa, delta0}, "thermometer");
  if (!(d0 > 0.0) || !(cavity_len > 0.0) || !(d0 < cavity_len))
    fail(ErrorCode::InvalidArgument, "thermometer needs 0 < d0 < cavity_len");
  if (!(n0 > 1.0))
    fail(ErrorCode::InvalidArgument, "thermometer refractive index must exceed 1");
  if (!(omega2_over_kappa > 0.0))
    fail(ErrorCode::InvalidArgument, "omega2_over_kappa must be positive");
}

double ThermometerModel::detuning_per_degree() const {
  validate();
  const double fill = d0 / cavity_len;
  return -omega2_over_kappa * (n0 * fill * beta + (n0 - 1.0) * fill * alpha);
}

double sagnac_phase(const GyroscopeModel& g, double omega) { return g.phase_per_rate() * omega; }

SystemParams gyro_params(const GyroscopeModel& g, double omega, const SystemParams& base) {
  SystemParams p = base;
  p.phi = g.phi0 + sagnac_phase(g, omega);
  return p;
}

double thermal_detuning(const ThermometerModel& t, double delta_t) {
  return t.detuning_per_degree() * delta_t;
}

SystemParams thermo_params(const ThermometerModel& t, double delta_t, const SystemParams& base) {
  SystemParams p = base;
  p.delta = t.delta0 + thermal_detuning(t, delta_t);
  return p;
}

SystemParams sensor_params(const SensorModel& model, double measurand, const SystemParams& base) {
  if (!std::isfinite(measurand))
    fail(ErrorCode::InvalidArgument, "measurand must be finite");
  return std::visit(
      [&](const auto& m) {
        if constexpr (std::is_same_v<std::decay_t<decltype(m)>, GyroscopeModel>)
          return gyro_params(m, measurand, base);
        else
          return thermo_params(m, measurand, base);
      },
      model);
}

SystemParams default_gyro_base() {
  SystemParams p;
  p.delta = -0.47;
  p.u = 0.02;
  p.eps = 0.1;
  p.phi = GyroscopeModel{}.phi0;
  return p;
}

SystemParams default_thermo_base() {
  SystemParams p;
  p.delta = ThermometerModel{}.delta0;
  p.u = 0.02;
  p.eps = 0.1;
  p.phi = 0.824 * std::numbers::pi;
  return p;
}

std::pair<double, double> full_period_omega_range(const GyroscopeModel& g) {
  const double half = std::numbers::pi / g.phase_per_rate();
  return {-half, half};
}

double evaluate_observable(const SteadySolution& sol, Observable obs, Port port) {
  const OutputField f = output_operator(sol.space(), sol.params(), port);
  return obs == Observable::Intensity ? output_intensity(sol.state(), f)
                                      : g2_zero(sol.state(), f);
}

std::vector<ResponsePoint> response_curve(const SensorModel& model, std::span<const double> grid,
                                          const SystemParams& base, Observable obs,
                                          const SensingOptions& opts) {
  if (grid.empty())
    fail(ErrorCode::InvalidArgument, "response grid is empty");
  std::vector<ResponsePoint> out(grid.size());
  parallel_for(grid.size(), opts.threads, [&](std::size_t i) {
    ResponsePoint& pt = out[i];
    pt.measurand = grid[i];
    try {
      const SteadySolution sol = solve_adequate(sensor_params(model, grid[i], base), opts.solver);
      pt.diagnostics = sol.diagnostics();
      pt.value = evaluate_observable(sol, obs, opts.port);
    } catch (const Error& e) {
      pt.value = std::numeric_limits<double>::quiet_NaN();
      pt.error = e.code();
      pt.message = e.what();
    }
  });
  return out;
}

double default_step(const SensorModel& model) {
  return std::holds_alternative<GyroscopeModel>(model) ? 1e-6 : 1e-4;
}

double sensitivity(const SensorModel& model, double measurand, const SystemParams& base,
                   Observable obs, const SensingOptions& opts, std::optional<double> step) {
  const double h = step.value_or(default_step(model));
  if (!std::isfinite(measurand))
    fail(ErrorCode::InvalidArgument, "measurand must be finite");
  if (!(h > 0.0) || !std::isfinite(h))
    fail(ErrorCode::InvalidStep, "finite-difference step must be positive and finite");
  // The half step must survive the addition to the measurand with six
  // significant digits, otherwise the difference quotient is noise.
  const double half = h / 2.0;
  const double realized = (measurand + half) - measurand;
  if (std::abs(realized - half) > 1e-6 * half)
    fail(ErrorCode::InvalidStep, "finite-difference step underflows the measurand resolution");

  auto f = [&](double x) { return observe(model, x, base, obs, opts); };
  const double d_full = (f(measurand + h) - f(measurand - h)) / (2.0 * h);
  const double d_half = (f(measurand + half) - f(measurand - half)) / (2.0 * half);
  return (4.0 * d_half - d_full) / 3.0;
}

PeakSensitivity peak_sensitivity(const SensorModel& model, double lo, double hi, int grid_points,
                                 const SystemParams& base, Observable obs,
                                 const SensingOptions& opts) {
  if (!(hi > lo) || grid_points < 3)
    fail(ErrorCode::InvalidArgument, "peak search needs lo < hi and >= 3 grid points");
  const auto n = static_cast<std::size_t>(grid_points);
  std::vector<double> xs(n), etas(n);
  for (std::size_t i = 0; i < n; ++i)
    xs[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  parallel_for(n, opts.threads,
               [&](std::size_t i) { etas[i] = sensitivity(model, xs[i], base, obs, opts); });

  std::size_t best = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (std::abs(etas[i]) > std::abs(etas[best]))
      best = i;
  PeakSensitivity peak{xs[best], etas[best]};

  // Golden-section search for max |eta| on the cells around the grid maximum.
  double a = xs[best == 0 ? 0 : best - 1];
  double b = xs[best + 1 == n ? n - 1 : best + 1];
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  auto score = [&](double x) { return sensitivity(model, x, base, obs, opts); };
  double c = b - ratio * (b - a);
  double d = a + ratio * (b - a);
  double fc = score(c);
  double fd = score(d);
  for (int it = 0; it < 40 && (b - a) > 1e-9 * std::max(1.0, std::abs(a)); ++it) {
    if (std::abs(fc) > std::abs(fd)) {
      b = d;
      d = c;
      fd = fc;
      c = b - ratio * (b - a);
      fc = score(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + ratio * (b - a);
      fd = score(d);
    }
  }
  for (const auto& [x, eta] : {std::pair{c, fc}, std::pair{d, fd}})
    if (std::abs(eta) > std::abs(peak.eta))
      peak = {x, eta};
  return peak;
}

} // namespace mzi
