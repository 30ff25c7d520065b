#include "mzi/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "mzi/error.hpp"

namespace mzi {
namespace {

constexpr cplx kI{0.0, 1.0};
const double kSqrt2 = std::numbers::sqrt2;

void require_closed_form_regime(const SystemParams& p) {
  p.validate();
  if (p.delta1 != 0.0)
    fail(ErrorCode::UnsupportedRegime, "weak-drive closed forms assume delta1 = 0");
  if (p.kappa1 != p.kappa2)
    fail(ErrorCode::UnsupportedRegime, "weak-drive closed forms assume kappa1 = kappa2");
}

} // namespace

WeakDriveAmplitudes amplitudes(const SystemParams& p) {
  require_closed_form_regime(p);
  const double k = p.kappa1;
  const double e = p.eps;
  const cplx d = cplx(p.delta, -k); // delta - i kappa

  WeakDriveAmplitudes c;
  c.c10 = e / k;
  c.c01 = -kI * e / d;
  c.c20 = (-kI / cplx(p.u, -k)) * (e * e / (kSqrt2 * k));
  c.c02 = -(1.0 / kSqrt2) * (e * e) / (d * d);
  c.c11 = -kI * (e * e) / (k * d);
  return c;
}

double amplitude_equation_residual(const WeakDriveAmplitudes& c, const SystemParams& p) {
  const double d1 = p.delta1;
  const double d2 = p.delta2();
  const double e = p.eps;
  const cplx eq[] = {
      cplx(d1, -p.kappa1) * c.c10 + kI * e * c.c00,
      cplx(d2, -p.kappa2) * c.c01 + kI * e * c.c00,
      cplx(2.0 * d1 + 2.0 * p.u, -2.0 * p.kappa1) * c.c20 + kI * kSqrt2 * e * c.c10,
      cplx(2.0 * d2, -2.0 * p.kappa2) * c.c02 + kI * kSqrt2 * e * c.c01,
      cplx(d1 + d2, -p.kappa1 - p.kappa2) * c.c11 + kI * e * c.c10 + kI * e * c.c01,
  };
  double worst = 0.0;
  for (const cplx& r : eq)
    worst = std::max(worst, std::abs(r));
  return worst;
}

double analytic_intensity(const WeakDriveAmplitudes& c, const SystemParams& p) {
  // Scaled by kappa so it compares directly with Tr[A^dag A rho].
  return p.kappa1 * 0.5 * std::norm(c.c10 + std::polar(1.0, p.phi) * c.c01);
}

cplx blockade_residual(const WeakDriveAmplitudes& c, const SystemParams& p) {
  const cplx e = std::polar(1.0, p.phi);
  return c.c20 + kSqrt2 * e * c.c11 + e * e * c.c02;
}

double analytic_g2(const WeakDriveAmplitudes& c, const SystemParams& p) {
  const double single = std::norm(c.c10 + std::polar(1.0, p.phi) * c.c01);
  const double denom = single * single;
  if (!(denom > 1e-14))
    fail(ErrorCode::UndefinedCorrelation, "single-photon output amplitude vanishes");
  return 2.0 * std::norm(blockade_residual(c, p)) / denom;
}

std::pair<double, double> optimal_detuning(double u) {
  if (!(u > 0.0 && u < 0.5))
    fail(ErrorCode::InvalidArgument, "optimal detuning requires 0 < U/kappa < 1/2");
  const double r = std::sqrt(2.0 * u);
  const double d = std::sqrt((r - u) / (1.0 - r + u));
  return {-d, d};
}

double optimal_phase(double u, double delta) {
  if (!(u >= 0.0) || !std::isfinite(u) || !std::isfinite(delta))
    fail(ErrorCode::InvalidArgument, "optimal phase requires finite U/kappa >= 0");
  const cplx z = -cplx(1.0, delta) * (1.0 - std::polar(std::sqrt(u), std::numbers::pi / 4.0));
  double phi = std::arg(z);
  if (phi < 0.0)
    phi += 2.0 * std::numbers::pi;
  return phi;
}

Optimum minimize_grid_2d(const std::function<double(double, double)>& f, double delta0,
                         double phi0, double delta_half_width, double phi_half_width,
                         const GridRefinement& opts) {
  if (opts.points < 3 || opts.levels < 1 || !(opts.shrink > 0.0 && opts.shrink < 1.0))
    fail(ErrorCode::InvalidArgument, "grid refinement needs >= 3 points, >= 1 level, shrink in (0,1)");
  Optimum best{delta0, phi0, f(delta0, phi0), 1};
  double hd = delta_half_width;
  double hp = phi_half_width;
  for (int level = 0; level < opts.levels; ++level) {
    const double cd = best.delta;
    const double cp = best.phi;
    for (int i = 0; i < opts.points; ++i) {
      const double d = cd - hd + 2.0 * hd * i / (opts.points - 1);
      for (int j = 0; j < opts.points; ++j) {
        const double ph = cp - hp + 2.0 * hp * j / (opts.points - 1);
        const double v = f(d, ph);
        ++best.evaluations;
        if (v < best.value) {
          best.delta = d;
          best.phi = ph;
          best.value = v;
        }
      }
    }
    hd *= opts.shrink;
    hp *= opts.shrink;
  }
  return best;
}

Optimum refine_analytic_optimum(const SystemParams& base, int branch) {
  require_closed_form_regime(base);
  const auto [lo, hi] = optimal_detuning(base.u / base.kappa1);
  const double d0 = (branch < 0 ? lo : hi) * base.kappa1;
  const double phi0 = optimal_phase(base.u / base.kappa1, d0 / base.kappa1);
  auto objective = [&](double delta, double phi) {
    SystemParams p = base;
    p.delta = delta;
    p.phi = phi;
    try {
      return analytic_g2(amplitudes(p), p);
    } catch (const Error&) {
      return std::numeric_limits<double>::infinity();
    }
  };
  return minimize_grid_2d(objective, d0, phi0, 0.1 * base.kappa1, 0.1);
}

} // namespace mzi
