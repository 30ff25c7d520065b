#include "mzi/fock.hpp"

#include <cmath>
#include <string>

#include "mzi/error.hpp"

namespace mzi {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
  case ErrorCode::InvalidArgument: return "invalid-argument";
  case ErrorCode::SolverFailure: return "solver-failure";
  case ErrorCode::IntegrationFailure: return "integration-failure";
  case ErrorCode::UndefinedCorrelation: return "undefined-correlation";
  case ErrorCode::UnsupportedRegime: return "unsupported-regime";
  case ErrorCode::InvalidStep: return "invalid-step";
  case ErrorCode::ParseError: return "parse-error";
  case ErrorCode::IoError: return "io-error";
  }
  return "unknown";
}

FockSpace::FockSpace(int n_max) : n_max_(n_max) {
  if (n_max < 1)
    fail(ErrorCode::InvalidArgument, "n_max must be >= 1, got " + std::to_string(n_max));
}

int FockSpace::index(int n1, int n2) const {
  if (n1 < 0 || n1 > n_max_ || n2 < 0 || n2 > n_max_)
    fail(ErrorCode::InvalidArgument, "occupation (" + std::to_string(n1) + ", " +
                                         std::to_string(n2) + ") outside the truncated space");
  return n1 * levels() + n2;
}

std::pair<int, int> FockSpace::occupation(int k) const {
  if (k < 0 || k >= dim())
    fail(ErrorCode::InvalidArgument, "basis index " + std::to_string(k) + " out of range");
  return {k / levels(), k % levels()};
}

FockSpace build_space(int n_max) { return FockSpace(n_max); }

void SystemParams::validate() const {
  for (double v : {delta1, delta, u, eps, kappa1, kappa2, phi})
    if (!std::isfinite(v))
      fail(ErrorCode::InvalidArgument, "system parameters must be finite");
  if (kappa1 <= 0.0 || kappa2 <= 0.0)
    fail(ErrorCode::InvalidArgument, "decay rates kappa1, kappa2 must be positive");
  if (u < 0.0)
    fail(ErrorCode::InvalidArgument, "Kerr strength u must be >= 0");
  if (eps < 0.0)
    fail(ErrorCode::InvalidArgument, "drive amplitude eps must be >= 0");
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Matrix single_mode_annihilator(int n_max) {
  if (n_max < 1)
    fail(ErrorCode::InvalidArgument, "n_max must be >= 1");
  Matrix a = Matrix::Zero(n_max + 1, n_max + 1);
  for (int n = 1; n <= n_max; ++n)
    a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

Matrix annihilator(const FockSpace& space, int mode) {
  const Matrix a = single_mode_annihilator(space.n_max());
  const Matrix id = Matrix::Identity(space.levels(), space.levels());
  switch (mode) {
  case 1: return kron(a, id);
  case 2: return kron(id, a);
  default: fail(ErrorCode::InvalidArgument, "mode must be 1 or 2, got " + std::to_string(mode));
  }
}

Matrix cavity_hamiltonian(int n_max, double detuning, double u, double eps) {
  const Matrix a = single_mode_annihilator(n_max);
  const Matrix ad = a.adjoint();
  const cplx i{0.0, 1.0};
  return detuning * (ad * a) + u * (ad * ad * a * a) + i * eps * (ad - a);
}

Matrix build_hamiltonian(const FockSpace& space, const SystemParams& p) {
  p.validate();
  const Matrix id = Matrix::Identity(space.levels(), space.levels());
  const Matrix h1 = cavity_hamiltonian(space.n_max(), p.delta1, p.u, p.eps);
  const Matrix h2 = cavity_hamiltonian(space.n_max(), p.delta2(), 0.0, p.eps);
  return kron(h1, id) + kron(id, h2);
}

} // namespace mzi
