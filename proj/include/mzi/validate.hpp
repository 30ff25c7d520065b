#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mzi {

struct Check {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

struct ValidationOptions {
  int n_max = 5;
  double dissipator_scale = 1.0; ///< != 1 deliberately breaks the model
  int threads = 1;
};

/// Runs every oracle and figure-regression check.
std::vector<Check> validate(const ValidationOptions& opts = {});

bool all_passed(const std::vector<Check>& checks);

/// One line per check: name,status,measured,expected,tolerance.
void write_report(const std::vector<Check>& checks, std::ostream& out);

} // namespace mzi
