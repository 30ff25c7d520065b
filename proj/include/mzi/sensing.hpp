#pragma once

#include <functional>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "mzi/dynamics.hpp"
#include "mzi/error.hpp"
#include "mzi/fock.hpp"
#include "mzi/interferometer.hpp"

namespace mzi {

inline constexpr double kSpeedOfLight = 299792458.0; // m/s
inline constexpr double kEarthRotation = 7.3e-5;    // rad/s

/// Rotating interferometer: the enclosed area adds a Sagnac phase to phi0.
struct GyroscopeModel {
  double area = 1.0e3;       ///< m^2
  double lambda0 = 1550e-9;  ///< m
  double phi0 = 0.85 * std::numbers::pi;

  void validate() const;
  /// d(phase)/d(Omega) in s.
  double phase_per_rate() const;
};

/// Dielectric layer inside cavity 2; temperature shifts its resonance
/// through thermal expansion and the thermo-optic effect.
struct ThermometerModel {
  double d0 = 0.01e-3;        ///< layer thickness, m
  double cavity_len = 1.0e-3; ///< m
  double alpha = 5.5e-7;      ///< 1/degC
  double beta = 1.0e-5;       ///< 1/degC
  double n0 = 1.45;
  double omega2_over_kappa = 1.0e7;
  double delta0 = -0.56; ///< (omega2 - omega1) / kappa at the reference temperature

  void validate() const;
  /// d(delta_th)/d(Delta T) in kappa per degC.
  double detuning_per_degree() const;
};

using SensorModel = std::variant<GyroscopeModel, ThermometerModel>;

double sagnac_phase(const GyroscopeModel& g, double omega);
SystemParams gyro_params(const GyroscopeModel& g, double omega, const SystemParams& base);

double thermal_detuning(const ThermometerModel& t, double delta_t);
SystemParams thermo_params(const ThermometerModel& t, double delta_t, const SystemParams& base);

/// Dispatches to gyro_params or thermo_params.
SystemParams sensor_params(const SensorModel& model, double measurand, const SystemParams& base);

/// Base parameters each sensor is operated at (antibunching working point with
/// the sensor's own phase or detuning).
SystemParams default_gyro_base();
SystemParams default_thermo_base();

/// Symmetric measurand range covering one full 2 pi period of the Sagnac phase.
std::pair<double, double> full_period_omega_range(const GyroscopeModel& g);

enum class Observable { Intensity, G2 };

double evaluate_observable(const SteadySolution& sol, Observable obs, Port port = Port::Main);

struct ResponsePoint {
  double measurand = 0.0;
  double value = 0.0; ///< NaN when the point failed
  SteadyDiagnostics diagnostics;
  std::optional<ErrorCode> error;
  std::string message;
};

struct SensingOptions {
  SolverOptions solver;
  Port port = Port::Main;
  int threads = 1;
};

/// One steady-state solve per grid point; failures are annotated per point.
std::vector<ResponsePoint> response_curve(const SensorModel& model, std::span<const double> grid,
                                          const SystemParams& base, Observable obs,
                                          const SensingOptions& opts = {});

/// Default central-difference step: 1e-6 rad/s for Omega, 1e-4 degC for Delta T.
double default_step(const SensorModel& model);

/// d(observable)/d(measurand): central differences at h and h/2 combined by
/// one Richardson step. InvalidStep when the step vanishes against the
/// measurand's floating point resolution.
double sensitivity(const SensorModel& model, double measurand, const SystemParams& base,
                   Observable obs, const SensingOptions& opts = {},
                   std::optional<double> step = std::nullopt);

struct PeakSensitivity {
  double measurand = 0.0;
  double eta = 0.0; ///< signed value at the peak of |eta|
};

/// Max |eta| over [lo, hi]: grid scan then golden-section refinement on the
/// bracketing cell.
PeakSensitivity peak_sensitivity(const SensorModel& model, double lo, double hi, int grid_points,
                                 const SystemParams& base, Observable obs,
                                 const SensingOptions& opts = {});

} // namespace mzi
