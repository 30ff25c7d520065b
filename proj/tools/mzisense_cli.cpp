// mzisense: steady-state, correlation and sensing sweeps of the Kerr/linear
// cavity interferometer. Talks to the library only through mzi.h.
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mzi/mzi.h"

namespace {

int report_error(mzi_status st) {
  std::fprintf(stderr, "mzisense: %s: %s\n", mzi_status_name(st), mzi_last_error());
  return 2;
}

struct RunArgs {
  std::string config;
  std::vector<std::string> sets;
  int threads = 0;
  int nmax = 0;
  std::string output = "-";
};

void add_run_options(CLI::App* app, RunArgs& a) {
  app->add_option("-c,--config", a.config, "configuration file")->check(CLI::ExistingFile);
  app->add_option("--set", a.sets, "override, e.g. --set system.delta=-0.47")->take_all();
  app->add_option("-j,--threads", a.threads, "worker threads")->check(CLI::PositiveNumber);
  app->add_option("--nmax", a.nmax, "Fock truncation per mode")->check(CLI::PositiveNumber);
  app->add_option("-o,--output", a.output, "CSV output path, - for stdout");
}

int run_command(const RunArgs& a, mzi_command cmd) {
  mzi_config* cfg = nullptr;
  mzi_status st = a.config.empty() ? mzi_config_default(&cfg) : mzi_config_load(a.config.c_str(), &cfg);
  if (st != MZI_OK)
    return report_error(st);

  auto apply = [&](const std::string& key, const std::string& value) {
    return mzi_config_set(cfg, key.c_str(), value.c_str());
  };
  for (const auto& s : a.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) {
      mzi_config_free(cfg);
      std::fprintf(stderr, "mzisense: --set expects section.key=value, got '%s'\n", s.c_str());
      return 2;
    }
    if ((st = apply(s.substr(0, eq), s.substr(eq + 1))) != MZI_OK)
      break;
  }
  if (st == MZI_OK && a.threads > 0)
    st = apply("sweep.threads", std::to_string(a.threads));
  if (st == MZI_OK && a.nmax > 0)
    st = apply("system.nmax", std::to_string(a.nmax));

  mzi_table* table = nullptr;
  if (st == MZI_OK)
    st = mzi_run(cfg, cmd, &table);
  mzi_config_free(cfg);
  if (st != MZI_OK)
    return report_error(st);

  size_t failed = 0;
  for (size_t r = 0; r < mzi_table_rows(table); ++r)
    if (std::string(mzi_table_status(table, r)) != "ok")
      ++failed;
  st = mzi_table_write_csv(table, a.output.c_str());
  mzi_table_free(table);
  if (st != MZI_OK)
    return report_error(st);
  if (failed)
    std::fprintf(stderr, "mzisense: %zu point(s) failed, see the status column\n", failed);
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Photon statistics of a Kerr/linear cavity Mach-Zehnder interferometer"};
  app.set_version_flag("--version", std::string(mzi_version()));
  app.require_subcommand(1);

  struct Entry {
    const char* name;
    const char* help;
    mzi_command cmd;
    RunArgs args;
  };
  std::vector<Entry> entries{
      {"steady", "N_out, g2(0) and diagnostics over the configured axes", MZI_CMD_STEADY, {}},
      {"g2map", "g2(0) map over delta x phi (201 x 201 on [-1,1] x [0,2pi] by default)",
       MZI_CMD_G2MAP, {}},
      {"g2tau", "g2(tau) at the configured point", MZI_CMD_G2TAU, {}},
      {"optimal", "blockade optimum: closed form, analytic and numeric refinement",
       MZI_CMD_OPTIMAL, {}},
      {"gyro", "gyroscope response and sensitivities over Omega", MZI_CMD_GYRO, {}},
      {"thermo", "thermometer response and sensitivities over Delta T", MZI_CMD_THERMO, {}},
  };
  std::vector<CLI::App*> subs;
  for (auto& e : entries) {
    subs.push_back(app.add_subcommand(e.name, e.help));
    add_run_options(subs.back(), e.args);
  }

  int v_nmax = 5;
  double v_scale = 1.0;
  int v_threads = 1;
  std::string v_out = "-";
  auto* val = app.add_subcommand("validate", "run the built-in oracle and regression checks");
  val->add_option("--nmax", v_nmax, "Fock truncation per mode")->check(CLI::PositiveNumber);
  val->add_option("--dissipator-scale", v_scale, "scale both decay rates (1 = physical)")
      ->check(CLI::PositiveNumber);
  val->add_option("-j,--threads", v_threads, "worker threads")->check(CLI::PositiveNumber);
  val->add_option("-o,--output", v_out, "report path, - for stdout");

  CLI11_PARSE(app, argc, argv);

  for (size_t i = 0; i < entries.size(); ++i)
    if (subs[i]->parsed())
      return run_command(entries[i].args, entries[i].cmd);

  mzi_report* report = nullptr;
  mzi_status st = mzi_validate(v_nmax, v_scale, v_threads, &report);
  if (st != MZI_OK)
    return report_error(st);
  st = mzi_report_write(report, v_out.c_str());
  const int ok = mzi_report_all_passed(report);
  for (size_t i = 0; i < mzi_report_count(report); ++i)
    if (!mzi_report_passed(report, i))
      std::fprintf(stderr, "FAIL %s: measured %.6g expected %.6g tol %.3g %s\n",
                   mzi_report_name(report, i), mzi_report_measured(report, i),
                   mzi_report_expected(report, i), mzi_report_tolerance(report, i),
                   mzi_report_detail(report, i));
  mzi_report_free(report);
  if (st != MZI_OK)
    return report_error(st);
  return ok ? 0 : 1;
}
