#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nnecon/harness/config.hpp"
#include "nnecon/numerics.hpp"

namespace nnecon::harness {

struct SweepRow {
  std::string swept_var;        ///< "none" for a single-point run
  std::optional<double> swept_value;
  double p_s = 0.0;
  double p_c_or_c = 0.0;        ///< CP price (subscription) or CP investment (advertisement)
  double q = 0.0;
  double D = 0.0;
  std::optional<double> p_a;    ///< advertisement only
  double u_isp = 0.0;
  double u_cp = 0.0;
  double p_t = 0.0;
  std::string regime;
  int iterations = 0;
  std::optional<std::string> error;  ///< set when the point failed to solve
};

struct RunOptions {
  int workers = 1;
  numerics::SolveConfig solve;
};

/// One row per (series value, sweep value), series-major and in sweep order.
/// Per-point solver failures are recorded in the row and do not stop the run.
std::vector<SweepRow> run_scenario(const ScenarioConfig& cfg, const RunOptions& opts = {});

/// Solves a single configured point.
SweepRow solve_point(const ScenarioConfig& cfg, const numerics::SolveConfig& solve = {});

inline constexpr std::string_view kCsvHeader =
    "swept_var,swept_value,p_s,p_c_or_c,q,D,p_a,u_isp,u_cp,p_t,regime";

/// Number rendering shared by every emitted file: 12 significant digits.
std::string format_number(double v);

void emit_csv(std::span<const SweepRow> rows, std::ostream& out);
/// Throws std::runtime_error when the file cannot be written.
void emit_csv(std::span<const SweepRow> rows, const std::string& path);

}  // namespace nnecon::harness
