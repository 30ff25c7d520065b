#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "mzi/analytic.hpp"
#include "mzi/config.hpp"
#include "mzi/dynamics.hpp"

namespace mzi {

struct ResultRecord {
  std::vector<std::pair<std::string, double>> coordinates;
  std::vector<std::pair<std::string, double>> observables; ///< NaN where unavailable
  SteadyDiagnostics diagnostics;
  bool truncation_rerun = false;
  std::string status = "ok";
};

/// Row-major sweep over axis1 (outer) and axis2 (inner). Steady states whose
/// boundary population exceeds 1e-8 are re-solved once with n_max + 2.
/// Failing points are recorded with a status and the run continues.
std::vector<ResultRecord> run_sweep(const SweepSpec& spec);

/// g2(tau) series at the fixed point; axis "tau" if given, else
/// uniform [0, tau_max] with tau_count points.
std::vector<ResultRecord> run_g2_tau(const SweepSpec& spec);

/// Gyroscope response: n_out, g2_zero, eta_n, eta_g over Omega.
std::vector<ResultRecord> run_gyro(const SweepSpec& spec);

/// Thermometer response: n_out, g2_zero, eta_n, eta_g over Delta T.
std::vector<ResultRecord> run_thermo(const SweepSpec& spec);

/// Blockade optimum for each branch: closed-form point, analytic refinement
/// and numeric refinement. Sweeps u when axis1 is "u".
std::vector<ResultRecord> run_optimal(const SweepSpec& spec);

/// Minimizes the numerically computed g2(0) over (delta, phi) starting from
/// (delta0, phi0) with a coordinate-refined grid. Steady states are reused
/// along the phi direction because phi does not enter the generator.
Optimum refine_numeric_optimum(const SystemParams& base, double delta0, double phi0,
                               const SolverOptions& solver = {}, Port port = Port::Main);

/// CSV with coordinate, observable and diagnostic columns, 17 significant
/// digits. Column order comes from the first record.
void write_csv(const std::vector<ResultRecord>& records, std::ostream& out);
void emit_csv(const std::vector<ResultRecord>& records, const std::string& path);

std::string format_double(double v);

} // namespace mzi
