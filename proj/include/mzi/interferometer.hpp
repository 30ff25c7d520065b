#pragma once

#include <span>

#include "mzi/dynamics.hpp"
#include "mzi/fock.hpp"

namespace mzi {

enum class Port {
  Main,       ///< (sqrt(k1) a1 + e^{i phi} sqrt(k2) a2) / sqrt(2)
  Complement, ///< same with phi -> phi + pi
};

struct OutputField {
  Matrix op; ///< units sqrt(kappa)
  Port port = Port::Main;
  cplx c1;   ///< coefficient of a1
  cplx c2;   ///< coefficient of a2
};

OutputField output_operator(const FockSpace& space, const SystemParams& p, Port port = Port::Main);

/// N_out = Tr[A^dag A rho], in units of kappa.
double output_intensity(const DensityMatrix& rho, const OutputField& f);

/// Tr[A^dag A^dag A A rho] / N_out^2. UndefinedCorrelation when N_out < 1e-14.
double g2_zero(const DensityMatrix& rho, const OutputField& f);

CorrelationSeries g2_tau(const SteadySolution& sol, const OutputField& f,
                         std::span<const double> taus);

} // namespace mzi
