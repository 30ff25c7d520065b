#pragma once

#include <memory>
#include <span>
#include <vector>

#include "mzi/fock.hpp"

namespace mzi {

/// Column-stacked superoperator of
///   -i[H, rho] + sum_k rate_k (2 L_k rho L_k^dag - L_k^dag L_k rho - rho L_k^dag L_k).
/// Note the factor 2 on the jump term: a rate kappa damps amplitudes at kappa.
Matrix lindblad_generator(const Matrix& hamiltonian, std::span<const Matrix> jumps,
                          std::span<const double> rates);

Vector vec(const Matrix& rho);
Matrix unvec(const Vector& v, int dim);

/// Generator of the two-mode master equation, dim^2 x dim^2, dense.
class Liouvillian {
public:
  /// `dissipator_scale` multiplies both decay rates; 1 is the physical model.
  static Liouvillian build(const FockSpace& space, const SystemParams& p,
                           double dissipator_scale = 1.0);
  static Liouvillian from_matrix(const FockSpace& space, Matrix generator);

  const FockSpace& space() const noexcept { return space_; }
  const Matrix& matrix() const noexcept { return generator_; }

  /// unvec(L * vec(rho)).
  Matrix apply(const Matrix& rho) const;

  /// max_j |sum_i L(ii, j)|: zero for a trace preserving generator.
  double trace_defect() const;

private:
  Liouvillian(FockSpace space, Matrix generator);

  FockSpace space_;
  Matrix generator_;
};

class DensityMatrix {
public:
  DensityMatrix(FockSpace space, Matrix rho);

  const FockSpace& space() const noexcept { return space_; }
  const Matrix& matrix() const noexcept { return rho_; }

  cplx expectation(const Matrix& op) const { return (op * rho_).trace(); }

  double trace_error() const;
  double hermiticity_error() const;
  double min_eigenvalue() const;
  /// Population on states with n1 == n_max or n2 == n_max.
  double boundary_population() const;

private:
  FockSpace space_;
  Matrix rho_;
};

struct SteadyDiagnostics {
  int n_max = 0;
  double residual = 0.0; ///< max |L vec(rho)|
  double trace_error = 0.0;
  double hermiticity_error = 0.0;
  double min_eigenvalue = 0.0;
  double boundary_population = 0.0;
};

/// Structural tolerances every steady state must meet.
struct StructureTolerances {
  static constexpr double residual = 1e-10;
  static constexpr double trace = 1e-10;
  static constexpr double hermiticity = 1e-10;
  static constexpr double min_eigenvalue = -1e-8;
  static constexpr double boundary_population = 1e-8;
};

/// Throws SolverFailure naming the first violated tolerance. Boundary
/// population is not checked here; callers decide how to handle truncation.
void check_structure(const SteadyDiagnostics& d);

/// Dense steady state: one row of L is replaced by the trace functional and
/// L' x = e_row is solved by LU.
DensityMatrix steady_state(const Liouvillian& l);

SteadyDiagnostics diagnose(const Liouvillian& l, const DensityMatrix& rho);

/// exp(L t) applied to rho0. rho0 need not be Hermitian or trace one.
Matrix propagate(const Liouvillian& l, const Matrix& rho0, double t);

/// Below this output intensity normalized correlations are undefined.
inline constexpr double kMinIntensity = 1e-14;

struct CorrelationSeries {
  std::vector<double> taus;
  std::vector<double> values;
};

/// `count` uniform points on [0, t_max].
std::vector<double> uniform_taus(double t_max = 10.0, int count = 200);

/// Quantum regression: g2(tau) = Tr[A^dag A e^{L tau}(A rho A^dag)] / Tr[A^dag A rho]^2.
/// One propagator is built per distinct step of the tau grid.
CorrelationSeries g2_tau(const Liouvillian& l, const DensityMatrix& rho_ss, const Matrix& a_out,
                         std::span<const double> taus);

enum class SolverKind {
  Product, ///< exact factorization rho = rho1 (x) rho2 of the uncoupled cavities
  Full,    ///< dense two-mode Liouvillian
};

struct SolverOptions {
  int n_max = 5;
  SolverKind kind = SolverKind::Product;
  double dissipator_scale = 1.0;
};

/// Steady state of the two-cavity system, solved either on the full two-mode
/// Liouvillian or mode by mode. The two cavities share no coupling term, so
/// the generator is L1 (x) 1 + 1 (x) L2 and the product route is exact.
class SteadySolution {
public:
  /// Solves and enforces check_structure(). Throws SolverFailure.
  static SteadySolution solve(const SystemParams& p, const SolverOptions& opts = {});

  const FockSpace& space() const noexcept { return space_; }
  const SystemParams& params() const noexcept { return params_; }
  const SolverOptions& options() const noexcept { return opts_; }
  const DensityMatrix& state() const noexcept { return state_; }
  const SteadyDiagnostics& diagnostics() const noexcept { return diag_; }

  /// g2(tau) for A = c1 a1 + c2 a2.
  CorrelationSeries g2_tau(cplx c1, cplx c2, std::span<const double> taus) const;

private:
  struct ModeFactors {
    Matrix l1, l2;     // single-mode superoperators, levels^2 square
    Matrix rho1, rho2; // single-mode steady states
  };

  SteadySolution(FockSpace space, SystemParams p, SolverOptions opts, DensityMatrix state);

  FockSpace space_;
  SystemParams params_;
  SolverOptions opts_;
  DensityMatrix state_;
  SteadyDiagnostics diag_;
  std::shared_ptr<const Liouvillian> full_;
  std::shared_ptr<const ModeFactors> modes_;
};

/// SteadySolution::solve, re-run once with n_max + 2 when the population on
/// the truncation boundary exceeds StructureTolerances::boundary_population.
/// `rerun` reports whether the second solve happened.
SteadySolution solve_adequate(const SystemParams& p, const SolverOptions& opts = {},
                              bool* rerun = nullptr);

/// Worst diagnostics over every accepted steady state since the last reset,
/// process wide. Provisional solves discarded by solve_adequate are skipped.
struct SolveStatistics {
  std::size_t solves = 0;
  double residual = 0.0;
  double trace_error = 0.0;
  double hermiticity_error = 0.0;
  double min_eigenvalue = 0.0;
  double boundary_population = 0.0;
};

SolveStatistics solve_statistics();
void reset_solve_statistics();

} // namespace mzi
