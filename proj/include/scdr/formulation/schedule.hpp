#pragma once

#include <string>
#include <vector>

#include "scdr/core/network_model.hpp"
#include "scdr/formulation/catalog.hpp"
#include "scdr/milp/instance.hpp"

namespace scdr::formulation {

/// Values of one column family for one index tuple, across periods.
struct TimeSeries {
  Family family = Family::FlowIn;
  std::string label;     // family label, e.g. "FIn"
  std::string material;  // empty for production families
  std::string entity;    // arc, node or plant id
  std::string entity_kind;  // "arc" or the node kind
  std::string recipe;    // production families only
  std::vector<double> values;

  bool operator==(const TimeSeries&) const = default;
};

struct Cancellation {
  std::string material;
  std::string customer;
  int period = 0;
  double quantity = 0.0;

  bool operator==(const Cancellation&) const = default;
};

struct Deviation {
  std::string material;
  std::string node;
  double value = 0.0;

  bool operator==(const Deviation&) const = default;
};

struct ScheduleReport {
  int periods = 0;
  milp::Status status = milp::Status::Infeasible;
  std::vector<TimeSeries> series;  // only series with a nonzero entry
  std::vector<Cancellation> cancellations;
  std::vector<Deviation> deviations;
  /// Objective priced from the model tables rather than the instance.
  double objective = 0.0;

  bool operator==(const ScheduleReport&) const = default;
};

/// Objective coefficient of a column, read from the model tables.
double objective_coefficient(const NetworkModel& model, const VarKey& key);

ScheduleReport extract_schedule(const NetworkModel& model, const VariableCatalog& catalog,
                                const milp::Solution& solution);

}  // namespace scdr::formulation
