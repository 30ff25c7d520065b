#pragma once

#include <functional>
#include <utility>

#include "mzi/fock.hpp"

namespace mzi {

/// Two-photon truncated weak-drive amplitudes, c00 = 1.
struct WeakDriveAmplitudes {
  cplx c00{1.0, 0.0};
  cplx c10, c01;
  cplx c20, c11, c02;
};

/// Closed forms valid for delta1 = 0 and kappa1 = kappa2. Other regimes
/// throw UnsupportedRegime.
WeakDriveAmplitudes amplitudes(const SystemParams& p);

/// Residual of the five steady-state amplitude equations for the given
/// amplitudes (max modulus). Holds for any regime.
double amplitude_equation_residual(const WeakDriveAmplitudes& c, const SystemParams& p);

double analytic_intensity(const WeakDriveAmplitudes& c, const SystemParams& p);

/// 2 |c20 + sqrt2 e^{i phi} c11 + e^{2 i phi} c02|^2 / |c10 + e^{i phi} c01|^4.
double analytic_g2(const WeakDriveAmplitudes& c, const SystemParams& p);

/// Two-photon output amplitude; it vanishes at the blockade point.
cplx blockade_residual(const WeakDriveAmplitudes& c, const SystemParams& p);

/// Weak-nonlinearity optimum detuning pair (negative, positive), 0 < u < 1/2.
std::pair<double, double> optimal_detuning(double u_over_kappa);

/// Weak-nonlinearity optimum phase, wrapped into [0, 2 pi).
double optimal_phase(double u_over_kappa, double delta_over_kappa);

struct Optimum {
  double delta = 0.0;
  double phi = 0.0;
  double value = 0.0;
  int evaluations = 0;
};

struct GridRefinement {
  int points = 11;     ///< per axis, per level
  int levels = 40;
  double shrink = 0.5; ///< window contraction per level
};

/// Coordinate-refined grid minimizer: evaluate an n x n grid on the current
/// window, recentre on the best point, contract, repeat.
Optimum minimize_grid_2d(const std::function<double(double, double)>& f, double delta0,
                         double phi0, double delta_half_width, double phi_half_width,
                         const GridRefinement& opts = {});

/// Minimizes analytic_g2 near the asymptotic optimum of one branch
/// (branch < 0 for negative detuning).
Optimum refine_analytic_optimum(const SystemParams& base, int branch);

} // namespace mzi
