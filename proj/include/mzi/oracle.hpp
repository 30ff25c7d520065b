#pragma once

#include "mzi/dynamics.hpp"
#include "mzi/interferometer.hpp"

// Independent evaluation routes used by the validation suite and tests.
// Nothing on the production path calls into this namespace.
namespace mzi::oracle {

/// 2 N_out = k1 <n1> + k2 <n2> + 2 sqrt(k1 k2) Re(e^{i phi} <a1^dag a2>).
double intensity_expansion(const DensityMatrix& rho, const SystemParams& p,
                           Port port = Port::Main);

/// g2(0) as the sum over j,k,l,m of e^{i n phi} sqrt(kj kk kl km)
/// <aj^dag ak^dag al am> / (4 N_out^2) with n = l + m - j - k.
double g2_expansion(const DensityMatrix& rho, const SystemParams& p, Port port = Port::Main);

/// Output intensity of two driven linear cavities (coherent states
/// alpha_i = eps / (kappa_i + i Delta_i)).
double coherent_intensity(const SystemParams& p, Port port = Port::Main);

/// g2(0) of the field leaking from cavity 1 alone.
double single_cavity_g2(const DensityMatrix& rho);

} // namespace mzi::oracle
