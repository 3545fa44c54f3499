#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "scdr/core/network_model.hpp"
#include "scdr/disruption/scenario.hpp"
#include "scdr/formulation/config.hpp"
#include "scdr/formulation/schedule.hpp"
#include "scdr/milp/instance.hpp"
#include "scdr/runner/runner.hpp"

namespace scdr::io {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// Raised when a decoded model fails validation; carries the full report.
class ValidationFailed : public DataError {
 public:
  ValidationFailed(const std::string& what, ValidationReport report)
      : DataError(what), report(std::move(report)) {}
  ValidationReport report;
};

// ---- models ---------------------------------------------------------------

/// Decodes a model document. `origin` prefixes error locations (usually the
/// file name). Throws DataError for schema problems and ValidationFailed
/// when the decoded model does not validate.
NetworkModel model_from_json(const Json& doc, const std::string& origin = "model",
                             ValidationReport* report = nullptr);
Json model_to_json(const NetworkModel& model);

NetworkModel load_model(const std::string& path, ValidationReport* report = nullptr);
void save_model(const NetworkModel& model, const std::string& path);

// ---- scenarios ------------------------------------------------------------

/// A scenario file: events and orders plus the extension toggles and solver
/// options the run should use.
struct ScenarioDocument {
  disruption::Scenario scenario;
  formulation::ExtensionConfig config;
  milp::SolveOptions solve;
};

ScenarioDocument scenario_from_json(const Json& doc, const std::string& origin = "scenario");
Json scenario_to_json(const ScenarioDocument& doc);
Json scenario_to_json(const disruption::Scenario& scenario);

ScenarioDocument load_scenario(const std::string& path);
void save_scenario(const ScenarioDocument& doc, const std::string& path);

// ---- results --------------------------------------------------------------

enum class ResultFormat { Tabular, Structured };

ResultFormat result_format_from_string(const std::string& text);
milp::Status status_from_string(const std::string& text);

Json kpis_to_json(const runner::KpiReport& kpis);
runner::KpiReport kpis_from_json(const Json& doc);
Json schedule_to_json(const formulation::ScheduleReport& schedule);
formulation::ScheduleReport schedule_from_json(const Json& doc);

/// KPI columns in declared order.
const std::vector<std::string>& kpi_columns();
void write_kpi_csv(const runner::KpiReport& kpis, std::ostream& out);

/// Tabular writes a directory with summary.csv, kpis.csv, cancellations.csv,
/// deviations.csv and one <label>.csv per column family; structured writes a
/// single results.json. `path` is a directory in both cases.
void save_results(const formulation::ScheduleReport& schedule, const runner::KpiReport& kpis,
                  const std::string& path, ResultFormat format);
void load_results(const std::string& path, ResultFormat format, formulation::ScheduleReport& schedule,
                  runner::KpiReport& kpis);

// ---- sweeps and rolls -----------------------------------------------------

/// One row per cell: axis values, status, KPI columns, diagnostic.
void write_grid_csv(const runner::SweepGrid& grid, std::ostream& out);
Json grid_to_json(const runner::SweepGrid& grid);

Json roll_to_json(const runner::RollResult& result, const runner::StitchReport& stitch);
/// Committed trajectory, one row per (family, material, entity, recipe, t).
void write_trajectory_csv(const NetworkModel& model, const runner::Trajectory& trajectory, std::ostream& out);

// ---- helpers --------------------------------------------------------------

/// %.17g, with inf and -inf spelled out.
std::string format_number(double value);

Json read_json_file(const std::string& path);
/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace scdr::io
