#pragma once

#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "splitgeom/scenario.hpp"

namespace splitgeom {

/// Outcome of one check on one scenario. Pointwise checks fill the
/// residual fields; integral checks fill integral_value/normalizer.
struct CheckReport {
  std::string id;
  std::string scenario;
  std::vector<int> grid;    // quadrature grid (integral checks)
  std::size_t points = 0;   // number of pointwise samples
  double max_abs_residual = 0.0;
  double max_rel_residual = 0.0;  // |residual| / (1 + max term)
  std::optional<double> integral_value;
  std::optional<double> normalizer;
  double tolerance = 0.0;
  bool pass = false;
  std::vector<double> worst_point;
  nlohmann::json details = nlohmann::json::object();
  std::string message;  // set when the check fails
  double seconds = 0.0;
};

struct ScenarioReport {
  std::string scenario;
  std::string kind;
  int k = 0;
  std::vector<int> dims;
  std::vector<CheckReport> checks;
  double seconds = 0.0;

  // Per-point residual fields for CSV export.
  std::vector<std::string> csv_columns;
  std::vector<std::vector<double>> csv_rows;

  bool pass() const;
};

/// Runs every check of the scenario. `threads` = 0 uses the config value,
/// then $SPLITGEOM_THREADS, then the hardware concurrency. Geometric
/// failures inside a check fail that check; they do not abort the run.
ScenarioReport run_scenario(const Scenario& scenario, int threads = 0);

/// {"scenarios": [...], "all_pass": bool, "timing": {...}}; the timing block
/// is the only non-deterministic part and is omitted when `timing` is false.
nlohmann::json report_json(std::span<const ScenarioReport> reports, bool timing = true);
nlohmann::json check_json(const CheckReport& c);

/// Columns: coordinates x1..xn, then one absolute residual per pointwise check.
void write_csv(const ScenarioReport& report, std::ostream& out);

/// Differences between two reports, ignoring the timing block. Empty when
/// they agree.
std::vector<std::string> diff_reports(const nlohmann::json& a, const nlohmann::json& b);

}  // namespace splitgeom
