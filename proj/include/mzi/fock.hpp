#pragma once

#include <complex>
#include <utility>

#include <Eigen/Dense>

namespace mzi {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Truncated two-mode Fock basis |n1, n2> with 0 <= n1, n2 <= n_max.
///
/// Basis ordering is fixed: k = n1 * (n_max + 1) + n2, so mode 1 is the slow
/// index and two-mode operators are Kronecker products kron(X1, X2).
class FockSpace {
public:
  explicit FockSpace(int n_max);

  int n_max() const noexcept { return n_max_; }
  int levels() const noexcept { return n_max_ + 1; }
  int dim() const noexcept { return levels() * levels(); }

  int index(int n1, int n2) const;
  std::pair<int, int> occupation(int k) const;

  bool operator==(const FockSpace&) const = default;

private:
  int n_max_;
};

FockSpace build_space(int n_max);

/// Physical parameters in units of kappa. Delta_2 is always delta1 + delta.
struct SystemParams {
  double delta1 = 0.0; ///< probe detuning of cavity 1
  double delta = 0.0;  ///< omega_2 - omega_1
  double u = 0.0;      ///< Kerr strength of cavity 1
  double eps = 0.1;    ///< drive amplitude on each cavity
  double kappa1 = 1.0;
  double kappa2 = 1.0;
  double phi = 0.0; ///< relative output phase, radians

  double delta2() const noexcept { return delta1 + delta; }

  /// Throws InvalidArgument on non-finite values, kappa <= 0, u < 0, eps < 0.
  void validate() const;
};

/// Annihilation operator of a single truncated mode with n_max + 1 levels.
Matrix single_mode_annihilator(int n_max);

/// a_1 or a_2 on the two-mode space. Any other mode is InvalidArgument.
Matrix annihilator(const FockSpace& space, int mode);

/// Single-cavity Hamiltonian detuning*n + u*a^dag a^dag a a + i*eps*(a^dag - a).
Matrix cavity_hamiltonian(int n_max, double detuning, double u, double eps);

/// Two-mode Hamiltonian of the driven Kerr + linear cavity pair.
Matrix build_hamiltonian(const FockSpace& space, const SystemParams& p);

Matrix kron(const Matrix& a, const Matrix& b);

} // namespace mzi
