#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace nnecon::harness {

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct SuiteReport {
  std::string suite;
  std::vector<Check> checks;

  bool passed() const;
};

struct SuiteInfo {
  std::string name;
  std::string alias;  ///< alternative name accepted on the command line
  std::string title;
};

/// Registered suites in acceptance order.
const std::vector<SuiteInfo>& suites();

/// Runs one suite by name or alias. Throws std::invalid_argument for an
/// unknown name.
SuiteReport run_suite(std::string_view name);

/// Runs a suite ("all" runs every suite) and writes one tab-separated line
/// per check plus a summary line. Returns 0 when everything passes, 1 on a
/// failed check, 2 on an unknown suite or a solver error.
int verify(std::string_view name, std::ostream& out);

}  // namespace nnecon::harness
