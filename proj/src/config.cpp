#include "mzi/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>

#include "mzi/error.hpp"

namespace mzi {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos)
    return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos)
      break;
    start = pos + 1;
  }
  return out;
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, const char* why) {
  fail(ErrorCode::InvalidArgument,
       "invalid value '" + std::string(value) + "' for '" + std::string(key) + "': " + why);
}

int parse_int(std::string_view key, std::string_view text) {
  text = trim(text);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
    bad_value(key, text, "expected an integer");
  return v;
}

double number(std::string_view key, std::string_view text) {
  try {
    return parse_number(text);
  } catch (const Error&) {
    bad_value(key, text, "expected a number");
  }
}

double positive(std::string_view key, std::string_view text) {
  const double v = number(key, text);
  if (!(v > 0.0))
    bad_value(key, text, "must be positive");
  return v;
}

double non_negative(std::string_view key, std::string_view text) {
  const double v = number(key, text);
  if (!(v >= 0.0))
    bad_value(key, text, "must be >= 0");
  return v;
}

int count_at_least(std::string_view key, std::string_view text, int lo) {
  const int v = parse_int(key, text);
  if (v < lo)
    bad_value(key, text, lo == 1 ? "must be >= 1" : "must be >= 2");
  return v;
}

Axis parse_axis(std::string_view key, std::string_view text) {
  const auto parts = split(text, ',');
  if (parts.size() != 4)
    bad_value(key, text, "expected 'name, min, max, count'");
  Axis a;
  a.name = std::string(parts[0]);
  const auto& names = known_axes();
  if (std::find(names.begin(), names.end(), a.name) == names.end())
    bad_value(key, text, "unknown axis name");
  a.min = number(key, parts[1]);
  a.max = number(key, parts[2]);
  a.count = count_at_least(key, parts[3], 2);
  if (!(a.max > a.min))
    bad_value(key, text, "axis max must exceed min");
  return a;
}

using Setter = std::function<void(SweepSpec&, std::string_view key, std::string_view value)>;
using SectionTable = std::map<std::string, Setter, std::less<>>;

const std::map<std::string, SectionTable, std::less<>>& setters() {
  static const std::map<std::string, SectionTable, std::less<>> table = {
      {"system",
       {
           {"delta1", [](SweepSpec& s, auto k, auto v) { s.fixed.delta1 = number(k, v); }},
           {"delta", [](SweepSpec& s, auto k, auto v) { s.fixed.delta = number(k, v); }},
           {"u", [](SweepSpec& s, auto k, auto v) { s.fixed.u = non_negative(k, v); }},
           {"eps", [](SweepSpec& s, auto k, auto v) { s.fixed.eps = non_negative(k, v); }},
           {"kappa1", [](SweepSpec& s, auto k, auto v) { s.fixed.kappa1 = positive(k, v); }},
           {"kappa2", [](SweepSpec& s, auto k, auto v) { s.fixed.kappa2 = positive(k, v); }},
           {"phi", [](SweepSpec& s, auto k, auto v) { s.fixed.phi = number(k, v); }},
           {"nmax", [](SweepSpec& s, auto k, auto v) { s.solver.n_max = count_at_least(k, v, 1); }},
           {"solver",
            [](SweepSpec& s, auto k, auto v) {
              if (v == "product") s.solver.kind = SolverKind::Product;
              else if (v == "full") s.solver.kind = SolverKind::Full;
              else bad_value(k, v, "expected 'product' or 'full'");
            }},
           {"port",
            [](SweepSpec& s, auto k, auto v) {
              if (v == "main") s.port = Port::Main;
              else if (v == "complement") s.port = Port::Complement;
              else bad_value(k, v, "expected 'main' or 'complement'");
            }},
       }},
      {"sweep",
       {
           {"axis1", [](SweepSpec& s, auto k, auto v) { s.axis1 = parse_axis(k, v); }},
           {"axis2", [](SweepSpec& s, auto k, auto v) { s.axis2 = parse_axis(k, v); }},
           {"observables",
            [](SweepSpec& s, auto k, auto v) {
              std::vector<std::string> obs;
              const auto& names = known_observables();
              for (auto name : split(v, ',')) {
                if (std::find(names.begin(), names.end(), name) == names.end())
                  bad_value(k, name, "unknown observable");
                obs.emplace_back(name);
              }
              s.observables = std::move(obs);
            }},
           {"tau_max", [](SweepSpec& s, auto k, auto v) { s.tau_max = positive(k, v); }},
           {"tau_count", [](SweepSpec& s, auto k, auto v) { s.tau_count = count_at_least(k, v, 2); }},
           {"threads", [](SweepSpec& s, auto k, auto v) { s.threads = count_at_least(k, v, 1); }},
       }},
      {"gyro",
       {
           {"area", [](SweepSpec& s, auto k, auto v) { s.gyro.area = positive(k, v); }},
           {"lambda0", [](SweepSpec& s, auto k, auto v) { s.gyro.lambda0 = positive(k, v); }},
           {"phi0", [](SweepSpec& s, auto k, auto v) { s.gyro.phi0 = number(k, v); }},
           {"omega_min",
            [](SweepSpec& s, auto k, auto v) {
              auto r = s.omega_range.value_or(full_period_omega_range(s.gyro));
              r.first = number(k, v);
              s.omega_range = r;
            }},
           {"omega_max",
            [](SweepSpec& s, auto k, auto v) {
              auto r = s.omega_range.value_or(full_period_omega_range(s.gyro));
              r.second = number(k, v);
              s.omega_range = r;
            }},
           {"omega_count", [](SweepSpec& s, auto k, auto v) { s.omega_count = count_at_least(k, v, 2); }},
       }},
      {"thermo",
       {
           {"d0", [](SweepSpec& s, auto k, auto v) { s.thermo.d0 = positive(k, v); }},
           {"cavity_len", [](SweepSpec& s, auto k, auto v) { s.thermo.cavity_len = positive(k, v); }},
           {"alpha", [](SweepSpec& s, auto k, auto v) { s.thermo.alpha = number(k, v); }},
           {"beta", [](SweepSpec& s, auto k, auto v) { s.thermo.beta = number(k, v); }},
           {"n0",
            [](SweepSpec& s, auto k, auto v) {
              s.thermo.n0 = number(k, v);
              if (!(s.thermo.n0 > 1.0))
                bad_value(k, v, "must exceed 1");
            }},
           {"omega2_over_kappa",
            [](SweepSpec& s, auto k, auto v) { s.thermo.omega2_over_kappa = positive(k, v); }},
           {"delta0", [](SweepSpec& s, auto k, auto v) { s.thermo.delta0 = number(k, v); }},
           {"dt_min", [](SweepSpec& s, auto k, auto v) { s.delta_t_range.first = number(k, v); }},
           {"dt_max", [](SweepSpec& s, auto k, auto v) { s.delta_t_range.second = number(k, v); }},
           {"dt_count", [](SweepSpec& s, auto k, auto v) { s.delta_t_count = count_at_least(k, v, 2); }},
       }},
  };
  return table;
}

} // namespace

const std::vector<std::string>& known_observables() {
  static const std::vector<std::string> names{"n_out", "g2_zero", "log10_g2", "n1",
                                              "n2",    "g2_tau",  "eta_n",    "eta_g"};
  return names;
}

const std::vector<std::string>& known_axes() {
  static const std::vector<std::string> names{"delta", "phi",     "u",  "eps",
                                              "omega", "delta_t", "tau"};
  return names;
}

std::vector<double> Axis::values() const {
  if (count < 2)
    fail(ErrorCode::InvalidArgument, "axis '" + name + "' needs count >= 2");
  std::vector<double> v(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i)
    v[static_cast<std::size_t>(i)] = min + (max - min) * i / (count - 1);
  v.back() = max;
  return v;
}

SystemParams SweepSpec::default_system() {
  SystemParams p;
  p.delta1 = 0.0;
  p.delta = -0.47;
  p.u = 0.02;
  p.eps = 0.1;
  p.kappa1 = 1.0;
  p.kappa2 = 1.0;
  p.phi = 0.824 * std::numbers::pi;
  return p;
}

void SweepSpec::validate() const {
  fixed.validate();
  gyro.validate();
  thermo.validate();
  if (solver.n_max < 1)
    fail(ErrorCode::InvalidArgument, "nmax must be >= 1");
  if (threads < 1)
    fail(ErrorCode::InvalidArgument, "threads must be >= 1");
  if (tau_count < 2 || !(tau_max > 0.0))
    fail(ErrorCode::InvalidArgument, "tau grid needs tau_count >= 2 and tau_max > 0");
  if (omega_range && !(omega_range->second > omega_range->first))
    fail(ErrorCode::InvalidArgument, "omega_max must exceed omega_min");
  if (!(delta_t_range.second > delta_t_range.first))
    fail(ErrorCode::InvalidArgument, "dt_max must exceed dt_min");
  if (omega_count < 2 || delta_t_count < 2)
    fail(ErrorCode::InvalidArgument, "sensor grids need at least 2 points");

  const auto& axes = known_axes();
  for (const auto* axis : {&axis1, &axis2}) {
    if (!*axis)
      continue;
    const Axis& a = **axis;
    if (std::find(axes.begin(), axes.end(), a.name) == axes.end())
      fail(ErrorCode::InvalidArgument, "unknown axis '" + a.name + "'");
    if (a.count < 2 || !(a.max > a.min))
      fail(ErrorCode::InvalidArgument, "axis '" + a.name + "' needs count >= 2 and max > min");
  }
  if (axis2 && !axis1)
    fail(ErrorCode::InvalidArgument, "axis2 given without axis1");
  if (axis1 && axis2 && axis1->name == axis2->name)
    fail(ErrorCode::InvalidArgument, "axis1 and axis2 must differ");
  if (axis1 && axis2 && axis1->name == "tau")
    fail(ErrorCode::InvalidArgument, "tau must be the innermost axis");
  const bool tau_axis = (axis2 && axis2->name == "tau") || (!axis2 && axis1 && axis1->name == "tau");
  if (tau_axis) {
    const Axis& t = axis2 ? *axis2 : *axis1;
    if (t.min != 0.0)
      fail(ErrorCode::InvalidArgument, "tau axis must start at 0");
  }

  if (observables.empty())
    fail(ErrorCode::InvalidArgument, "at least one observable is required");
  const auto& names = known_observables();
  for (const auto& o : observables)
    if (std::find(names.begin(), names.end(), o) == names.end())
      fail(ErrorCode::InvalidArgument, "unknown observable '" + o + "'");
  const bool wants_tau = std::find(observables.begin(), observables.end(), "g2_tau") != observables.end();
  if (wants_tau && !tau_axis)
    fail(ErrorCode::InvalidArgument, "observable g2_tau needs a tau axis");
}

double parse_number(std::string_view text) {
  text = trim(text);
  double scale = 1.0;
  if (text.size() >= 2 && text.substr(text.size() - 2) == "pi") {
    scale = std::numbers::pi;
    text = trim(text.substr(0, text.size() - 2));
    if (text.empty() || text == "+")
      return scale;
    if (text == "-")
      return -scale;
    if (text.back() == '*')
      text = trim(text.substr(0, text.size() - 1));
  }
  if (!text.empty() && text.front() == '+')
    text.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v))
    fail(ErrorCode::ParseError, "not a number: '" + std::string(text) + "'");
  return v * scale;
}

void set_config_value(SweepSpec& spec, std::string_view section, std::string_view key,
                      std::string_view value) {
  const auto& table = setters();
  const auto sec = table.find(section);
  if (sec == table.end())
    fail(ErrorCode::ParseError, "unknown section [" + std::string(section) + "]");
  const auto entry = sec->second.find(key);
  if (entry == sec->second.end())
    fail(ErrorCode::ParseError,
         "unknown key '" + std::string(key) + "' in [" + std::string(section) + "]");
  try {
    entry->second(spec, key, trim(value));
  } catch (const Error& e) {
    fail(ErrorCode::ParseError, e.what());
  }
}

SweepSpec parse_config(std::string_view text) {
  SweepSpec spec;
  std::string section;
  int line_no = 0;
  for (std::string_view line : split(text, '\n')) {
    ++line_no;
    const auto hash = line.find_first_of("#;");
    line = trim(line.substr(0, hash));
    if (line.empty())
      continue;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (line.front() == '[') {
      if (line.back() != ']')
        fail(ErrorCode::ParseError, where + "unterminated section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (!setters().contains(section))
        fail(ErrorCode::ParseError, where + "unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      fail(ErrorCode::ParseError, where + "expected key = value");
    if (section.empty())
      fail(ErrorCode::ParseError, where + "key outside of a [section]");
    try {
      set_config_value(spec, section, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const Error& e) {
      fail(ErrorCode::ParseError, where + e.what());
    }
  }
  try {
    spec.validate();
  } catch (const Error& e) {
    fail(ErrorCode::ParseError, e.what());
  }
  return spec;
}

SweepSpec load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    fail(ErrorCode::IoError, "cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

} // namespace mzi
