#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mzi/dynamics.hpp"
#include "mzi/fock.hpp"
#include "mzi/interferometer.hpp"
#include "mzi/sensing.hpp"

namespace mzi {

struct Axis {
  std::string name; ///< delta, phi, u, eps, omega, delta_t or tau
  double min = 0.0;
  double max = 0.0;
  int count = 2;

  std::vector<double> values() const;
};

/// Everything a sweep needs. Defaults are the antibunching working point:
/// eps = 0.1, delta1 = 0, kappa1 = kappa2 = 1, delta = -0.47, u = 0.02,
/// phi = 0.824 pi.
struct SweepSpec {
  SystemParams fixed = default_system();
  std::optional<Axis> axis1;
  std::optional<Axis> axis2;
  std::vector<std::string> observables{"n_out", "g2_zero"};
  SolverOptions solver;
  Port port = Port::Main;
  int threads = 1;

  double tau_max = 10.0;
  int tau_count = 200;

  GyroscopeModel gyro;
  ThermometerModel thermo;
  /// Measurand windows for `gyro`/`thermo` runs. Unset omega range means one
  /// full Sagnac period.
  std::optional<std::pair<double, double>> omega_range;
  int omega_count = 401;
  std::pair<double, double> delta_t_range{-0.3, 0.3};
  int delta_t_count = 401;

  static SystemParams default_system();

  /// Throws InvalidArgument naming the offending field.
  void validate() const;
};

/// Observable names accepted in SweepSpec::observables:
/// n_out, g2_zero, log10_g2, n1, n2, g2_tau, eta_n, eta_g.
const std::vector<std::string>& known_observables();

/// Axis names accepted in SweepSpec::axis1/axis2.
const std::vector<std::string>& known_axes();

/// Parses the key=value configuration format:
///
///   # comment
///   [system]   delta1 delta u eps kappa1 kappa2 phi nmax solver port
///   [sweep]    axis1 axis2 observables tau_max tau_count threads
///   [gyro]     area lambda0 phi0 omega_min omega_max omega_count
///   [thermo]   d0 cavity_len alpha beta n0 omega2_over_kappa delta0
///              dt_min dt_max dt_count
///
/// Numbers may carry a trailing "pi" (0.824pi). Axes are written
/// "name, min, max, count". Errors are ParseError with the line number.
SweepSpec parse_config(std::string_view text);

/// Reads and parses a file; IoError if it cannot be read.
SweepSpec load_config(const std::string& path);

/// Applies one section/key/value assignment (used for command-line
/// overrides). Same validation as the file parser.
void set_config_value(SweepSpec& spec, std::string_view section, std::string_view key,
                      std::string_view value);

/// Parses "0.824pi", "pi", "-1e-3".
double parse_number(std::string_view text);

} // namespace mzi
