#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "scdr/core/network_model.hpp"
#include "scdr/disruption/scenario.hpp"
#include "scdr/formulation/build.hpp"
#include "scdr/formulation/schedule.hpp"
#include "scdr/milp/instance.hpp"

namespace scdr::runner {

struct KpiReport {
  double profit = 0.0;
  long canceled_orders = 0;
  double delayed_material = 0.0;  // sum of unmet demand over t >= 1
  double late_delivered = 0.0;    // deliveries that clear earlier backlog
  long shipments = 0;
  double warehouse_inventory = 0.0;
  std::map<std::string, double> delayed_by_material;
  std::map<std::string, double> inventory_by_node;

  bool operator==(const KpiReport&) const = default;
};

/// Shipments above this count as one shipment when FTC binaries are absent.
inline constexpr double kShipmentThreshold = 1e-6;

KpiReport kpis(const formulation::ScheduleReport& schedule);

struct RunResult {
  milp::Solution solution;
  formulation::ScheduleReport schedule;
  KpiReport kpis;
  formulation::DimensionReport dimensions;
  std::vector<disruption::Change> changes;
  double wall_seconds = 0.0;
};

/// apply_scenario, build, solve, extract_schedule and kpis in sequence.
RunResult run(const NetworkModel& model, const disruption::Scenario& scenario,
              const formulation::ExtensionConfig& config, const milp::SolveOptions& options = {});

struct SweepCell {
  double axis1 = 0.0;
  double axis2 = 0.0;
  milp::Status status = milp::Status::Limit;
  KpiReport kpis;
  std::string diagnostic;
  disruption::Scenario scenario;  // the scenario this cell solved
};

struct SweepGrid {
  std::string axis1_name;
  std::string axis2_name;
  std::vector<double> axis1;
  std::vector<double> axis2;
  std::vector<SweepCell> cells;  // axis1-major

  const SweepCell& at(size_t i, size_t j) const { return cells[i * axis2.size() + j]; }
};

/// Called after each finished cell with (cells done, cells total). May be
/// invoked from worker threads.
using ProgressFn = std::function<void(size_t, size_t)>;

struct SweepOptions {
  milp::SolveOptions solve;
  int workers = 1;  // <= 0 uses the OpenMP default
  ProgressFn progress;
};

/// Disrupted window length for a duration fraction: zero means the event
/// lasts to the horizon, one means no disruption.
int characterization_length(int periods, int start, double duration_fraction);

/// Capacity fraction x duration fraction grid. `base_event` supplies the
/// target and start period; each cell replaces its fraction and window.
SweepGrid sweep_characterization(const NetworkModel& model, const disruption::DisruptionEvent& base_event,
                                 const std::vector<double>& fractions, const std::vector<double>& durations,
                                 const formulation::ExtensionConfig& config, const SweepOptions& options = {});

/// Uniform lambda^U x uniform lambda^delta grid over every customer.
SweepGrid sweep_penalties(const NetworkModel& model, const disruption::Scenario& scenario,
                          const std::vector<double>& late_penalties, const std::vector<double>& cancel_penalties,
                          const formulation::ExtensionConfig& config, const SweepOptions& options = {});

/// Serial references.
SweepGrid sweep_characterization_serial(const NetworkModel& model, const disruption::DisruptionEvent& base_event,
                                        const std::vector<double>& fractions, const std::vector<double>& durations,
                                        const formulation::ExtensionConfig& config,
                                        const SweepOptions& options = {});
SweepGrid sweep_penalties_serial(const NetworkModel& model, const disruption::Scenario& scenario,
                                 const std::vector<double>& late_penalties,
                                 const std::vector<double>& cancel_penalties,
                                 const formulation::ExtensionConfig& config, const SweepOptions& options = {});

enum class SweepKind { Characterization, Penalties };

const char* to_string(SweepKind kind);
SweepKind sweep_kind_from_string(const std::string& text);

/// Axis values from "start:stop:count", inclusive linear spacing.
std::vector<double> axis_from_spec(const std::string& spec);

/// Sweep described by a scenario. Characterization takes the scenario's
/// single event as the base event; penalties run on the whole scenario.
SweepGrid sweep(const NetworkModel& model, const disruption::Scenario& scenario, SweepKind kind,
                const std::vector<double>& axis1, const std::vector<double>& axis2,
                const formulation::ExtensionConfig& config, const SweepOptions& options = {});

/// Copy of periods [start, start + length) of every table. Period-0 state
/// fields are left as in `model`; callers reset them.
NetworkModel slice(const NetworkModel& model, int start, int length);

/// Values keyed by catalog key with absolute periods.
using Trajectory = std::map<formulation::VarKey, double>;

struct RollStep {
  int offset = 0;  // absolute period of the window's period 0
  milp::Status status = milp::Status::Limit;
  formulation::ScheduleReport schedule;
  KpiReport kpis;
};

struct RollResult {
  std::vector<RollStep> steps;
  Trajectory committed;  // absolute periods 0 .. last committed
  int committed_periods = 0;
  bool complete = false;
  std::string diagnostic;
};

/// Rolling horizon: each step solves `window` periods, commits its period 1
/// and shifts the initial state; the last step commits its whole window.
/// Intermediate steps use the fid terminal mode; the last step keeps the
/// configured mode when its window reaches the model horizon.
RollResult roll(const NetworkModel& model, const disruption::Scenario& scenario, int window, int steps,
                const formulation::ExtensionConfig& config, const milp::SolveOptions& options = {});

struct StitchReport {
  double worst = 0.0;  // scaled like milp::residuals
  std::string worst_row;
  int rows_checked = 0;
};

/// Evaluates the coupling, balance, link and order rows of the disrupted
/// model over the committed horizon at the stitched trajectory.
StitchReport check_stitched(const NetworkModel& model, const disruption::Scenario& scenario,
                            const formulation::ExtensionConfig& config, const RollResult& result);

}  // namespace scdr::runner
