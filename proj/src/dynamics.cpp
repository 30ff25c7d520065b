#include "mzi/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>

#include "mzi/error.hpp"
#include "mzi/expm.hpp"

namespace mzi {
namespace {

bool all_finite(const Matrix& m) { return m.allFinite(); }

// Solves L x = 0 with Tr x = 1 by overwriting row 0 with the trace functional.
Matrix steady_operator(const Matrix& generator, int dim) {
  const Eigen::Index n = generator.rows();
  Matrix m = generator;
  m.row(0).setZero();
  for (int i = 0; i < dim; ++i)
    m(0, i + static_cast<Eigen::Index>(dim) * i) = 1.0;
  Vector rhs = Vector::Zero(n);
  rhs(0) = 1.0;

  Eigen::PartialPivLU<Matrix> lu(m);
  // Exact zero pivots leave the rcond estimate at 1, so look at U as well.
  const auto pivots = lu.matrixLU().diagonal().cwiseAbs();
  const double pivot_ratio = pivots.minCoeff() / pivots.maxCoeff();
  const double rcond = lu.rcond();
  if (!(rcond > 1e-13) || !(pivot_ratio > 1e-13)) {
    std::ostringstream msg;
    msg << "steady state is not unique: trace-constrained generator is singular (rcond="
        << rcond << ", pivot ratio " << pivot_ratio << ", size " << n << ")";
    fail(ErrorCode::SolverFailure, msg.str());
  }
  Vector x = lu.solve(rhs);
  if (!x.allFinite())
    fail(ErrorCode::SolverFailure, "steady-state solve produced non-finite values");
  Matrix rho = unvec(x, dim);
  // Remove the anti-Hermitian round-off so downstream moments are real.
  return 0.5 * (rho + rho.adjoint());
}

std::string describe(const SteadyDiagnostics& d) {
  std::ostringstream out;
  out << "residual=" << d.residual << " trace_error=" << d.trace_error
      << " hermiticity=" << d.hermiticity_error << " min_eigenvalue=" << d.min_eigenvalue
      << " boundary_population=" << d.boundary_population << " n_max=" << d.n_max;
  return out.str();
}

void check_taus(std::span<const double> taus) {
  if (taus.empty())
    fail(ErrorCode::InvalidArgument, "tau grid is empty");
  if (taus.front() != 0.0)
    fail(ErrorCode::InvalidArgument, "tau grid must start at 0");
  for (std::size_t k = 1; k < taus.size(); ++k)
    if (!(taus[k] > taus[k - 1]) || !std::isfinite(taus[k]))
      fail(ErrorCode::InvalidArgument, "tau grid must be finite and strictly increasing");
}

// Propagators keyed by step length; uniform grids build exactly one.
class StepPropagators {
public:
  explicit StepPropagators(const Matrix& generator) : generator_(generator) {}

  const Matrix& get(double step) {
    for (const auto& [s, p] : cache_)
      if (std::abs(s - step) <= 1e-12 * std::max(1.0, step))
        return p;
    Matrix p = expm(generator_ * step);
    if (!all_finite(p))
      fail(ErrorCode::IntegrationFailure, "propagator exp(L dt) is not finite");
    cache_.emplace_back(step, std::move(p));
    return cache_.back().second;
  }

private:
  const Matrix& generator_;
  std::vector<std::pair<double, Matrix>> cache_;
};

double positive_intensity(double n) {
  if (!(n >= kMinIntensity))
    fail(ErrorCode::UndefinedCorrelation,
         "output intensity " + std::to_string(n) + " too small for a normalized correlation");
  return n;
}

} // namespace

Vector vec(const Matrix& rho) { return Eigen::Map<const Vector>(rho.data(), rho.size()); }

Matrix unvec(const Vector& v, int dim) { return Eigen::Map<const Matrix>(v.data(), dim, dim); }

Matrix lindblad_generator(const Matrix& hamiltonian, std::span<const Matrix> jumps,
                          std::span<const double> rates) {
  if (jumps.size() != rates.size())
    fail(ErrorCode::InvalidArgument, "one rate per jump operator required");
  const Eigen::Index d = hamiltonian.rows();
  const Matrix id = Matrix::Identity(d, d);
  const cplx i{0.0, 1.0};
  // vec(A X B) = (B^T kron A) vec(X) for column stacking.
  Matrix l = -i * (kron(id, hamiltonian) - kron(hamiltonian.transpose(), id));
  for (std::size_t k = 0; k < jumps.size(); ++k) {
    const Matrix& a = jumps[k];
    const Matrix n = a.adjoint() * a;
    l += rates[k] * (2.0 * kron(a.conjugate(), a) - kron(id, n) - kron(n.transpose(), id));
  }
  return l;
}

Liouvillian::Liouvillian(FockSpace space, Matrix generator)
    : space_(space), generator_(std::move(generator)) {}

Liouvillian Liouvillian::build(const FockSpace& space, const SystemParams& p,
                               double dissipator_scale) {
  p.validate();
  if (!(dissipator_scale > 0.0))
    fail(ErrorCode::InvalidArgument, "dissipator scale must be positive");
  const Matrix h = build_hamiltonian(space, p);
  const Matrix jumps[] = {annihilator(space, 1), annihilator(space, 2)};
  const double rates[] = {p.kappa1 * dissipator_scale, p.kappa2 * dissipator_scale};
  return Liouvillian(space, lindblad_generator(h, jumps, rates));
}

Liouvillian Liouvillian::from_matrix(const FockSpace& space, Matrix generator) {
  const Eigen::Index n = static_cast<Eigen::Index>(space.dim()) * space.dim();
  if (generator.rows() != n || generator.cols() != n)
    fail(ErrorCode::InvalidArgument, "generator shape does not match dim^2");
  return Liouvillian(space, std::move(generator));
}

Matrix Liouvillian::apply(const Matrix& rho) const {
  return unvec(generator_ * vec(rho), space_.dim());
}

double Liouvillian::trace_defect() const {
  const int d = space_.dim();
  Eigen::RowVectorXcd row = Eigen::RowVectorXcd::Zero(generator_.cols());
  for (int i = 0; i < d; ++i)
    row += generator_.row(i + static_cast<Eigen::Index>(d) * i);
  return row.cwiseAbs().maxCoeff();
}

DensityMatrix::DensityMatrix(FockSpace space, Matrix rho) : space_(space), rho_(std::move(rho)) {
  if (rho_.rows() != space_.dim() || rho_.cols() != space_.dim())
    fail(ErrorCode::InvalidArgument, "density matrix shape does not match the Fock space");
}

double DensityMatrix::trace_error() const { return std::abs(rho_.trace() - cplx{1.0, 0.0}); }

double DensityMatrix::hermiticity_error() const {
  return (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_eigenvalue() const {
  const Matrix h = 0.5 * (rho_ + rho_.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double DensityMatrix::boundary_population() const {
  double pop = 0.0;
  for (int k = 0; k < space_.dim(); ++k) {
    const auto [n1, n2] = space_.occupation(k);
    if (n1 == space_.n_max() || n2 == space_.n_max())
      pop += rho_(k, k).real();
  }
  return pop;
}

void check_structure(const SteadyDiagnostics& d) {
  const char* what = nullptr;
  if (!(d.residual < StructureTolerances::residual)) what = "steady-state residual";
  else if (!(d.trace_error < StructureTolerances::trace)) what = "trace error";
  else if (!(d.hermiticity_error < StructureTolerances::hermiticity)) what = "hermiticity error";
  else if (!(d.min_eigenvalue > StructureTolerances::min_eigenvalue)) what = "negative eigenvalue";
  if (what)
    fail(ErrorCode::SolverFailure, std::string(what) + " out of tolerance: " + describe(d));
}

DensityMatrix steady_state(const Liouvillian& l) {
  const int d = l.space().dim();
  return DensityMatrix(l.space(), steady_operator(l.matrix(), d));
}

SteadyDiagnostics diagnose(const Liouvillian& l, const DensityMatrix& rho) {
  SteadyDiagnostics out;
  out.n_max = rho.space().n_max();
  out.residual = (l.matrix() * vec(rho.matrix())).cwiseAbs().maxCoeff();
  out.trace_error = rho.trace_error();
  out.hermiticity_error = rho.hermiticity_error();
  out.min_eigenvalue = rho.min_eigenvalue();
  out.boundary_population = rho.boundary_population();
  return out;
}

Matrix propagate(const Liouvillian& l, const Matrix& rho0, double t) {
  if (!(t >= 0.0) || !std::isfinite(t))
    fail(ErrorCode::InvalidArgument, "propagation time must be finite and >= 0");
  const int d = l.space().dim();
  if (rho0.rows() != d || rho0.cols() != d)
    fail(ErrorCode::InvalidArgument, "initial operator shape does not match the Fock space");
  if (t == 0.0)
    return rho0;
  const Matrix p = expm(l.matrix() * t);
  if (!all_finite(p))
    fail(ErrorCode::IntegrationFailure, "propagator exp(L t) is not finite");
  return unvec(p * vec(rho0), d);
}

std::vector<double> uniform_taus(double t_max, int count) {
  if (count < 2 || !(t_max > 0.0))
    fail(ErrorCode::InvalidArgument, "tau grid needs count >= 2 and t_max > 0");
  std::vector<double> taus(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k)
    taus[static_cast<std::size_t>(k)] = t_max * k / (count - 1);
  return taus;
}

CorrelationSeries g2_tau(const Liouvillian& l, const DensityMatrix& rho_ss, const Matrix& a_out,
                         std::span<const double> taus) {
  check_taus(taus);
  const int d = l.space().dim();
  const Matrix number = a_out.adjoint() * a_out;
  const double n_out = positive_intensity(rho_ss.expectation(number).real());

  StepPropagators props(l.matrix());
  Vector x = vec(a_out * rho_ss.matrix() * a_out.adjoint());
  CorrelationSeries out;
  out.taus.assign(taus.begin(), taus.end());
  out.values.reserve(taus.size());
  for (std::size_t k = 0; k < taus.size(); ++k) {
    if (k > 0)
      x = props.get(taus[k] - taus[k - 1]) * x;
    out.values.push_back((number * unvec(x, d)).trace().real() / (n_out * n_out));
  }
  return out;
}

SteadySolution::SteadySolution(FockSpace space, SystemParams p, SolverOptions opts,
                               DensityMatrix state)
    : space_(space), params_(p), opts_(opts), state_(std::move(state)) {}

namespace {

std::mutex g_stats_mutex;
SolveStatistics g_stats;
// Set while solve_adequate runs a solve it may still discard.
thread_local bool t_provisional = false;

void record(const SteadyDiagnostics& d) {
  if (t_provisional)
    return;
  std::lock_guard lock(g_stats_mutex);
  ++g_stats.solves;
  g_stats.residual = std::max(g_stats.residual, d.residual);
  g_stats.trace_error = std::max(g_stats.trace_error, d.trace_error);
  g_stats.hermiticity_error = std::max(g_stats.hermiticity_error, d.hermiticity_error);
  g_stats.min_eigenvalue = std::min(g_stats.min_eigenvalue, d.min_eigenvalue);
  g_stats.boundary_population = std::max(g_stats.boundary_population, d.boundary_population);
}

} // namespace

SolveStatistics solve_statistics() {
  std::lock_guard lock(g_stats_mutex);
  return g_stats;
}

void reset_solve_statistics() {
  std::lock_guard lock(g_stats_mutex);
  g_stats = {};
}

SteadySolution SteadySolution::solve(const SystemParams& p, const SolverOptions& opts) {
  p.validate();
  if (!(opts.dissipator_scale > 0.0))
    fail(ErrorCode::InvalidArgument, "dissipator scale must be positive");
  const FockSpace space(opts.n_max);

  if (opts.kind == SolverKind::Full) {
    auto l = std::make_shared<const Liouvillian>(
        Liouvillian::build(space, p, opts.dissipator_scale));
    SteadySolution sol(space, p, opts, steady_state(*l));
    sol.diag_ = diagnose(*l, sol.state_);
    sol.full_ = std::move(l);
    record(sol.diag_);
    check_structure(sol.diag_);
    return sol;
  }

  const int levels = space.levels();
  const Matrix a = single_mode_annihilator(space.n_max());
  auto modes = std::make_shared<ModeFactors>();
  {
    const Matrix h1 = cavity_hamiltonian(space.n_max(), p.delta1, p.u, p.eps);
    const Matrix h2 = cavity_hamiltonian(space.n_max(), p.delta2(), 0.0, p.eps);
    const Matrix jumps[] = {a};
    const double r1[] = {p.kappa1 * opts.dissipator_scale};
    const double r2[] = {p.kappa2 * opts.dissipator_scale};
    modes->l1 = lindblad_generator(h1, jumps, r1);
    modes->l2 = lindblad_generator(h2, jumps, r2);
  }
  modes->rho1 = steady_operator(modes->l1, levels);
  modes->rho2 = steady_operator(modes->l2, levels);

  SteadySolution sol(space, p, opts, DensityMatrix(space, kron(modes->rho1, modes->rho2)));

  // Full-generator residual L vec(rho1 (x) rho2) = (L1 rho1) (x) rho2 + rho1 (x) (L2 rho2).
  const Matrix m1 = unvec(modes->l1 * vec(modes->rho1), levels);
  const Matrix m2 = unvec(modes->l2 * vec(modes->rho2), levels);
  SteadyDiagnostics& d = sol.diag_;
  d.n_max = space.n_max();
  d.residual = (kron(m1, modes->rho2) + kron(modes->rho1, m2)).cwiseAbs().maxCoeff();
  d.trace_error = sol.state_.trace_error();
  d.hermiticity_error = sol.state_.hermiticity_error();
  {
    Eigen::SelfAdjointEigenSolver<Matrix> e1(modes->rho1, Eigen::EigenvaluesOnly);
    Eigen::SelfAdjointEigenSolver<Matrix> e2(modes->rho2, Eigen::EigenvaluesOnly);
    double lo = e1.eigenvalues()(0) * e2.eigenvalues()(0);
    for (Eigen::Index i = 0; i < e1.eigenvalues().size(); ++i)
      for (Eigen::Index j = 0; j < e2.eigenvalues().size(); ++j)
        lo = std::min(lo, e1.eigenvalues()(i) * e2.eigenvalues()(j));
    d.min_eigenvalue = lo;
  }
  d.boundary_population = sol.state_.boundary_population();
  sol.modes_ = std::move(modes);
  record(sol.diag_);
  check_structure(sol.diag_);
  return sol;
}

CorrelationSeries SteadySolution::g2_tau(cplx c1, cplx c2, std::span<const double> taus) const {
  const Matrix a_out = c1 * annihilator(space_, 1) + c2 * annihilator(space_, 2);
  if (full_)
    return mzi::g2_tau(*full_, state_, a_out, taus);

  check_taus(taus);
  const int levels = space_.levels();
  const Matrix number = a_out.adjoint() * a_out;
  const double n_out = positive_intensity(state_.expectation(number).real());

  const Matrix a = single_mode_annihilator(space_.n_max());
  const Matrix& r1 = modes_->rho1;
  const Matrix& r2 = modes_->rho2;
  // A rho A^dag as four product terms; each factor evolves under its own mode.
  struct Term {
    cplx weight;
    Vector x1, x2;
  };
  std::vector<Term> terms{
      {std::norm(c1), vec(a * r1 * a.adjoint()), vec(r2)},
      {std::norm(c2), vec(r1), vec(a * r2 * a.adjoint())},
      {c1 * std::conj(c2), vec(a * r1), vec(r2 * a.adjoint())},
      {c2 * std::conj(c1), vec(r1 * a.adjoint()), vec(a * r2)},
  };

  StepPropagators p1(modes_->l1);
  StepPropagators p2(modes_->l2);
  CorrelationSeries out;
  out.taus.assign(taus.begin(), taus.end());
  out.values.reserve(taus.size());
  for (std::size_t k = 0; k < taus.size(); ++k) {
    Matrix x = Matrix::Zero(space_.dim(), space_.dim());
    for (auto& t : terms) {
      if (k > 0) {
        const double step = taus[k] - taus[k - 1];
        t.x1 = p1.get(step) * t.x1;
        t.x2 = p2.get(step) * t.x2;
      }
      x += t.weight * kron(unvec(t.x1, levels), unvec(t.x2, levels));
    }
    out.values.push_back((number * x).trace().real() / (n_out * n_out));
  }
  return out;
}

SteadySolution solve_adequate(const SystemParams& p, const SolverOptions& opts, bool* rerun) {
  std::optional<SteadySolution> first;
  {
    t_provisional = true;
    struct Reset {
      ~Reset() { t_provisional = false; }
    } reset;
    first = SteadySolution::solve(p, opts);
  }
  const bool again =
      first->diagnostics().boundary_population > StructureTolerances::boundary_population;
  if (rerun)
    *rerun = again;
  if (!again) {
    record(first->diagnostics());
    return std::move(*first);
  }
  SolverOptions wider = opts;
  wider.n_max += 2;
  return SteadySolution::solve(p, wider);
}

} // namespace mzi
