#include "mzi/mzi.h"

#include <cmath>
#include <exception>
#include <fstream>
#include <iostream>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

#include "mzi/analytic.hpp"
#include "mzi/config.hpp"
#include "mzi/error.hpp"
#include "mzi/interferometer.hpp"
#include "mzi/sensing.hpp"
#include "mzi/sweep.hpp"
#include "mzi/validate.hpp"

struct mzi_config {
  mzi::SweepSpec spec;
};

struct mzi_table {
  std::vector<mzi::ResultRecord> records;
  std::vector<std::string> columns; // numeric columns only
};

struct mzi_report {
  std::vector<mzi::Check> checks;
};

struct mzi_solution {
  mzi::SteadySolution sol;
};

namespace {

thread_local std::string g_last_error;

mzi_status to_status(mzi::ErrorCode c) { return static_cast<mzi_status>(static_cast<int>(c)); }

template <class F>
mzi_status guard(F&& f) {
  try {
    g_last_error.clear();
    f();
    return MZI_OK;
  } catch (const mzi::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return MZI_INTERNAL_ERROR;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return MZI_INTERNAL_ERROR;
  } catch (...) {
    g_last_error = "unknown error";
    return MZI_INTERNAL_ERROR;
  }
}

void need(const void* p, const char* what) {
  if (!p)
    mzi::fail(mzi::ErrorCode::InvalidArgument, std::string(what) + " is null");
}

mzi::SystemParams from_c(const mzi_params& p) {
  mzi::SystemParams s;
  s.delta1 = p.delta1;
  s.delta = p.delta;
  s.u = p.u;
  s.eps = p.eps;
  s.kappa1 = p.kappa1;
  s.kappa2 = p.kappa2;
  s.phi = p.phi;
  return s;
}

mzi::Port from_c(mzi_port port) {
  switch (port) {
  case MZI_PORT_MAIN: return mzi::Port::Main;
  case MZI_PORT_COMPLEMENT: return mzi::Port::Complement;
  }
  mzi::fail(mzi::ErrorCode::InvalidArgument, "unknown port");
}

mzi::OutputField field_at(const mzi_solution* s, double phi, mzi_port port) {
  need(s, "solution");
  mzi::SystemParams p = s->sol.params();
  p.phi = phi;
  p.validate();
  return mzi::output_operator(s->sol.space(), p, from_c(port));
}

std::vector<mzi::ResultRecord> run(const mzi::SweepSpec& in, mzi_command cmd) {
  mzi::SweepSpec spec = in;
  switch (cmd) {
  case MZI_CMD_STEADY:
    return mzi::run_sweep(spec);
  case MZI_CMD_G2MAP:
    if (!spec.axis1) {
      spec.axis1 = mzi::Axis{"delta", -1.0, 1.0, 201};
      spec.axis2 = mzi::Axis{"phi", 0.0, 2.0 * std::numbers::pi, 201};
    }
    spec.observables = {"g2_zero", "log10_g2"};
    return mzi::run_sweep(spec);
  case MZI_CMD_G2TAU:
    return mzi::run_g2_tau(spec);
  case MZI_CMD_OPTIMAL:
    return mzi::run_optimal(spec);
  case MZI_CMD_GYRO:
    return mzi::run_gyro(spec);
  case MZI_CMD_THERMO:
    return mzi::run_thermo(spec);
  }
  mzi::fail(mzi::ErrorCode::InvalidArgument, "unknown command");
}

const mzi::ResultRecord& row_of(const mzi_table* t, size_t row) {
  need(t, "table");
  if (row >= t->records.size())
    mzi::fail(mzi::ErrorCode::InvalidArgument, "row out of range");
  return t->records[row];
}

const mzi::Check* check_of(const mzi_report* r, size_t i) {
  if (!r || i >= r->checks.size())
    return nullptr;
  return &r->checks[i];
}

template <class W>
mzi_status write_to(const char* path, W&& writer) {
  return guard([&] {
    need(path, "path");
    if (std::string(path) == "-") {
      writer(std::cout);
      std::cout.flush();
      if (!std::cout)
        mzi::fail(mzi::ErrorCode::IoError, "failed writing to stdout");
      return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
      mzi::fail(mzi::ErrorCode::IoError, std::string("cannot open '") + path + "' for writing");
    writer(out);
    out.flush();
    if (!out)
      mzi::fail(mzi::ErrorCode::IoError, std::string("failed writing '") + path + "'");
  });
}

} // namespace

extern "C" {

const char* mzi_version(void) { return "0.1.0"; }

const char* mzi_status_name(mzi_status status) {
  if (status == MZI_OK)
    return "ok";
  if (status == MZI_INTERNAL_ERROR)
    return "internal-error";
  if (status >= MZI_INVALID_ARGUMENT && status <= MZI_IO_ERROR)
    return mzi::to_string(static_cast<mzi::ErrorCode>(status));
  return "unknown";
}

const char* mzi_last_error(void) { return g_last_error.c_str(); }

void mzi_params_default(mzi_params* out) {
  if (!out)
    return;
  const mzi::SystemParams s = mzi::SweepSpec::default_system();
  *out = {s.delta1, s.delta, s.u, s.eps, s.kappa1, s.kappa2, s.phi};
}

mzi_status mzi_config_parse(const char* text, mzi_config** out) {
  return guard([&] {
    need(text, "text");
    need(out, "out");
    *out = new mzi_config{mzi::parse_config(text)};
  });
}

mzi_status mzi_config_load(const char* path, mzi_config** out) {
  return guard([&] {
    need(path, "path");
    need(out, "out");
    *out = new mzi_config{mzi::load_config(path)};
  });
}

mzi_status mzi_config_default(mzi_config** out) {
  return guard([&] {
    need(out, "out");
    *out = new mzi_config{};
  });
}

mzi_status mzi_config_set(mzi_config* cfg, const char* dotted_key, const char* value) {
  return guard([&] {
    need(cfg, "config");
    need(dotted_key, "key");
    need(value, "value");
    const std::string key = dotted_key;
    const auto dot = key.find('.');
    if (dot == std::string::npos || dot == 0 || dot + 1 == key.size())
      mzi::fail(mzi::ErrorCode::InvalidArgument, "expected section.key, got '" + key + "'");
    mzi::SweepSpec copy = cfg->spec;
    mzi::set_config_value(copy, key.substr(0, dot), key.substr(dot + 1), value);
    cfg->spec = std::move(copy);
  });
}

void mzi_config_free(mzi_config* cfg) { delete cfg; }

mzi_status mzi_run(const mzi_config* cfg, mzi_command command, mzi_table** out) {
  return guard([&] {
    need(cfg, "config");
    need(out, "out");
    auto t = std::make_unique<mzi_table>();
    t->records = run(cfg->spec, command);
    if (!t->records.empty()) {
      for (const auto& [name, v] : t->records.front().coordinates)
        t->columns.push_back(name);
      for (const auto& [name, v] : t->records.front().observables)
        t->columns.push_back(name);
    }
    for (const char* d : {"nmax", "boundary_population", "residual"})
      t->columns.emplace_back(d);
    *out = t.release();
  });
}

size_t mzi_table_rows(const mzi_table* t) { return t ? t->records.size() : 0; }
size_t mzi_table_columns(const mzi_table* t) { return t ? t->columns.size() : 0; }

const char* mzi_table_column_name(const mzi_table* t, size_t column) {
  if (!t || column >= t->columns.size())
    return nullptr;
  return t->columns[column].c_str();
}

mzi_status mzi_table_value(const mzi_table* t, size_t row, size_t column, double* out) {
  return guard([&] {
    need(out, "out");
    const auto& r = row_of(t, row);
    size_t c = column;
    if (c < r.coordinates.size()) {
      *out = r.coordinates[c].second;
      return;
    }
    c -= r.coordinates.size();
    if (c < r.observables.size()) {
      *out = r.observables[c].second;
      return;
    }
    c -= r.observables.size();
    switch (c) {
    case 0: *out = r.diagnostics.n_max; return;
    case 1: *out = r.diagnostics.boundary_population; return;
    case 2: *out = r.diagnostics.residual; return;
    default: mzi::fail(mzi::ErrorCode::InvalidArgument, "column out of range");
    }
  });
}

const char* mzi_table_status(const mzi_table* t, size_t row) {
  if (!t || row >= t->records.size())
    return nullptr;
  return t->records[row].status.c_str();
}

mzi_status mzi_table_write_csv(const mzi_table* t, const char* path) {
  if (!t) {
    g_last_error = "table is null";
    return MZI_INVALID_ARGUMENT;
  }
  return write_to(path, [&](std::ostream& o) { mzi::write_csv(t->records, o); });
}

void mzi_table_free(mzi_table* t) { delete t; }

mzi_status mzi_validate(int n_max, double dissipator_scale, int threads, mzi_report** out) {
  return guard([&] {
    need(out, "out");
    if (!(dissipator_scale > 0.0) || !std::isfinite(dissipator_scale))
      mzi::fail(mzi::ErrorCode::InvalidArgument, "dissipator scale must be positive");
    if (threads < 1)
      mzi::fail(mzi::ErrorCode::InvalidArgument, "threads must be >= 1");
    mzi::ValidationOptions opts;
    opts.n_max = n_max;
    opts.dissipator_scale = dissipator_scale;
    opts.threads = threads;
    *out = new mzi_report{mzi::validate(opts)};
  });
}

size_t mzi_report_count(const mzi_report* r) { return r ? r->checks.size() : 0; }

const char* mzi_report_name(const mzi_report* r, size_t i) {
  const auto* c = check_of(r, i);
  return c ? c->name.c_str() : nullptr;
}

int mzi_report_passed(const mzi_report* r, size_t i) {
  const auto* c = check_of(r, i);
  return c && c->passed ? 1 : 0;
}

double mzi_report_measured(const mzi_report* r, size_t i) {
  const auto* c = check_of(r, i);
  return c ? c->measured : NAN;
}

double mzi_report_expected(const mzi_report* r, size_t i) {
  const auto* c = check_of(r, i);
  return c ? c->expected : NAN;
}

double mzi_report_tolerance(const mzi_report* r, size_t i) {
  const auto* c = check_of(r, i);
  return c ? c->tolerance : NAN;
}

const char* mzi_report_detail(const mzi_report* r, size_t i) {
  const auto* c = check_of(r, i);
  return c ? c->detail.c_str() : nullptr;
}

int mzi_report_all_passed(const mzi_report* r) { return r && mzi::all_passed(r->checks) ? 1 : 0; }

mzi_status mzi_report_write(const mzi_report* r, const char* path) {
  if (!r) {
    g_last_error = "report is null";
    return MZI_INVALID_ARGUMENT;
  }
  return write_to(path, [&](std::ostream& o) { mzi::write_report(r->checks, o); });
}

void mzi_report_free(mzi_report* r) { delete r; }

mzi_status mzi_solve(const mzi_params* p, int n_max, mzi_solution** out) {
  return guard([&] {
    need(p, "params");
    need(out, "out");
    mzi::SolverOptions opts;
    opts.n_max = n_max;
    *out = new mzi_solution{mzi::SteadySolution::solve(from_c(*p), opts)};
  });
}

mzi_status mzi_solution_intensity(const mzi_solution* s, double phi, mzi_port port, double* out) {
  return guard([&] {
    need(s, "solution");
    need(out, "out");
    *out = mzi::output_intensity(s->sol.state(), field_at(s, phi, port));
  });
}

mzi_status mzi_solution_g2(const mzi_solution* s, double phi, mzi_port port, double* out) {
  return guard([&] {
    need(s, "solution");
    need(out, "out");
    *out = mzi::g2_zero(s->sol.state(), field_at(s, phi, port));
  });
}

mzi_status mzi_solution_g2_tau(const mzi_solution* s, double phi, mzi_port port,
                               const double* taus, size_t n, double* out) {
  return guard([&] {
    need(s, "solution");
    need(taus, "taus");
    need(out, "out");
    const auto series = mzi::g2_tau(s->sol, field_at(s, phi, port), std::span(taus, n));
    std::copy(series.values.begin(), series.values.end(), out);
  });
}

mzi_status mzi_solution_diagnostics(const mzi_solution* s, mzi_diagnostics* out) {
  return guard([&] {
    need(s, "solution");
    need(out, "out");
    const auto& d = s->sol.diagnostics();
    *out = {d.n_max, d.residual, d.trace_error, d.hermiticity_error, d.min_eigenvalue,
            d.boundary_population};
  });
}

void mzi_solution_free(mzi_solution* s) { delete s; }

mzi_status mzi_optimal_detuning(double u, double* negative, double* positive) {
  return guard([&] {
    need(negative, "negative");
    need(positive, "positive");
    std::tie(*negative, *positive) = mzi::optimal_detuning(u);
  });
}

mzi_status mzi_optimal_phase(double u, double delta, double* out) {
  return guard([&] {
    need(out, "out");
    *out = mzi::optimal_phase(u, delta);
  });
}

mzi_status mzi_analytic_g2(const mzi_params* p, double* out) {
  return guard([&] {
    need(p, "params");
    need(out, "out");
    const auto s = from_c(*p);
    *out = mzi::analytic_g2(mzi::amplitudes(s), s);
  });
}

mzi_status mzi_analytic_intensity(const mzi_params* p, double* out) {
  return guard([&] {
    need(p, "params");
    need(out, "out");
    const auto s = from_c(*p);
    *out = mzi::analytic_intensity(mzi::amplitudes(s), s);
  });
}

mzi_status mzi_sagnac_phase(double area, double lambda0, double omega, double* out) {
  return guard([&] {
    need(out, "out");
    mzi::GyroscopeModel g;
    g.area = area;
    g.lambda0 = lambda0;
    g.validate();
    *out = mzi::sagnac_phase(g, omega);
  });
}

mzi_status mzi_thermal_detuning(double delta_t, double* out) {
  return guard([&] {
    need(out, "out");
    *out = mzi::thermal_detuning(mzi::ThermometerModel{}, delta_t);
  });
}

} // extern "C"
