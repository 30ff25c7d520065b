#include "mzi/oracle.hpp"

#include <cmath>
#include <numbers>

#include "mzi/error.hpp"

namespace mzi::oracle {
namespace {

double port_phase(const SystemParams& p, Port port) {
  return port == Port::Main ? p.phi : p.phi + std::numbers::pi;
}

} // namespace

double intensity_expansion(const DensityMatrix& rho, const SystemParams& p, Port port) {
  const FockSpace& s = rho.space();
  const Matrix a1 = annihilator(s, 1);
  const Matrix a2 = annihilator(s, 2);
  const double phi = port_phase(p, port);
  const double n1 = rho.expectation(a1.adjoint() * a1).real();
  const double n2 = rho.expectation(a2.adjoint() * a2).real();
  const cplx cross = rho.expectation(a1.adjoint() * a2);
  const double twice = p.kappa1 * n1 + p.kappa2 * n2 +
                       2.0 * std::sqrt(p.kappa1 * p.kappa2) * (std::polar(1.0, phi) * cross).real();
  return 0.5 * twice;
}

double g2_expansion(const DensityMatrix& rho, const SystemParams& p, Port port) {
  const FockSpace& s = rho.space();
  const Matrix a[2] = {annihilator(s, 1), annihilator(s, 2)};
  const double kappa[2] = {p.kappa1, p.kappa2};
  const double phi = port_phase(p, port);

  cplx sum{0.0, 0.0};
  for (int j = 0; j < 2; ++j)
    for (int k = 0; k < 2; ++k)
      for (int l = 0; l < 2; ++l)
        for (int m = 0; m < 2; ++m) {
          const int n = (l + 1) + (m + 1) - (j + 1) - (k + 1);
          const double weight = std::sqrt(kappa[j] * kappa[k] * kappa[l] * kappa[m]);
          const cplx moment = rho.expectation(a[j].adjoint() * a[k].adjoint() * a[l] * a[m]);
          sum += std::polar(weight, n * phi) * moment;
        }
  const double n_out = intensity_expansion(rho, p, port);
  if (!(n_out >= kMinIntensity))
    fail(ErrorCode::UndefinedCorrelation, "vanishing output intensity");
  return sum.real() / (4.0 * n_out * n_out);
}

double coherent_intensity(const SystemParams& p, Port port) {
  const cplx alpha1 = p.eps / cplx(p.kappa1, p.delta1);
  const cplx alpha2 = p.eps / cplx(p.kappa2, p.delta2());
  const cplx field = std::sqrt(p.kappa1) * alpha1 +
                     std::polar(std::sqrt(p.kappa2), port_phase(p, port)) * alpha2;
  return 0.5 * std::norm(field);
}

double single_cavity_g2(const DensityMatrix& rho) {
  const Matrix a1 = annihilator(rho.space(), 1);
  const Matrix ad = a1.adjoint();
  const double n = rho.expectation(ad * a1).real();
  if (!(n >= kMinIntensity))
    fail(ErrorCode::UndefinedCorrelation, "cavity 1 is empty");
  return rho.expectation(ad * ad * a1 * a1).real() / (n * n);
}

} // namespace mzi::oracle
