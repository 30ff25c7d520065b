#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>

#include "mzi/error.hpp"
#include "mzi/sweep.hpp"

namespace mzi {

std::string format_double(double v) {
  if (std::isnan(v))
    return "nan";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  if (ec != std::errc())
    fail(ErrorCode::IoError, "cannot format value");
  return std::string(buf, ptr);
}

void write_csv(const std::vector<ResultRecord>& records, std::ostream& out) {
  std::vector<std::string> coords, obs;
  if (!records.empty()) {
    for (const auto& [name, v] : records.front().coordinates)
      coords.push_back(name);
    for (const auto& [name, v] : records.front().observables)
      obs.push_back(name);
  }
  bool first = true;
  auto cell = [&](const std::string& s) {
    if (!first)
      out << ',';
    out << s;
    first = false;
  };
  for (const auto& c : coords) cell(c);
  for (const auto& o : obs) cell(o);
  for (const char* d : {"nmax", "boundary_population", "residual", "status"}) cell(d);
  out << '\n';

  for (const auto& r : records) {
    if (r.coordinates.size() != coords.size() || r.observables.size() != obs.size())
      fail(ErrorCode::InvalidArgument, "records disagree on their column layout");
    first = true;
    for (const auto& [name, v] : r.coordinates) cell(format_double(v));
    for (const auto& [name, v] : r.observables) cell(format_double(v));
    cell(std::to_string(r.diagnostics.n_max));
    cell(format_double(r.diagnostics.boundary_population));
    cell(format_double(r.diagnostics.residual));
    cell(r.status);
    out << '\n';
  }
  if (!out)
    fail(ErrorCode::IoError, "failed writing CSV output");
}

void emit_csv(const std::vector<ResultRecord>& records, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    fail(ErrorCode::IoError, "cannot open '" + path + "' for writing");
  write_csv(records, out);
  out.flush();
  if (!out)
    fail(ErrorCode::IoError, "failed writing '" + path + "'");
}

} // namespace mzi
