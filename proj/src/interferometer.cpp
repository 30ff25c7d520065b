#include "mzi/interferometer.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "mzi/error.hpp"

namespace mzi {

OutputField output_operator(const FockSpace& space, const SystemParams& p, Port port) {
  p.validate();
  const double phase = port == Port::Main ? p.phi : p.phi + std::numbers::pi;
  OutputField f;
  f.port = port;
  f.c1 = std::sqrt(p.kappa1 / 2.0);
  f.c2 = std::polar(std::sqrt(p.kappa2 / 2.0), phase);
  f.op = f.c1 * annihilator(space, 1) + f.c2 * annihilator(space, 2);
  return f;
}

double output_intensity(const DensityMatrix& rho, const OutputField& f) {
  return rho.expectation(f.op.adjoint() * f.op).real();
}

double g2_zero(const DensityMatrix& rho, const OutputField& f) {
  const Matrix ad = f.op.adjoint();
  const double n = rho.expectation(ad * f.op).real();
  if (!(n >= kMinIntensity))
    fail(ErrorCode::UndefinedCorrelation,
         "output intensity " + std::to_string(n) + " too small for g2(0)");
  return rho.expectation(ad * ad * f.op * f.op).real() / (n * n);
}

CorrelationSeries g2_tau(const SteadySolution& sol, const OutputField& f,
                         std::span<const double> taus) {
  if (f.op.rows() != sol.space().dim())
    fail(ErrorCode::InvalidArgument, "output field and solution live on different spaces");
  return sol.g2_tau(f.c1, f.c2, taus);
}

} // namespace mzi
