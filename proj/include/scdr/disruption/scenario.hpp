#pragma once

#include <optional>
#include <string>
#include <vector>

#include "scdr/core/network_model.hpp"
#include "scdr/formulation/config.hpp"

namespace scdr::disruption {

enum class Shape { Immediate, Scheduled, Permanent, Custom };

const char* to_string(Shape shape);
Shape shape_from_string(const std::string& text);  // throws DataError

/// A change to one parameter table over a window of periods.
///
/// `target` is a path such as "production_upper/P1/R1", "flow_upper/a3/RA"
/// or "volume/W1"; "*" matches every entity or material in that position.
/// See `target_kinds()` for the accepted first segments.
struct DisruptionEvent {
  std::string target;
  Shape shape = Shape::Immediate;
  int start = 0;
  int end = 0;  // exclusive
  double fraction = 1.0;
  int ramp_in = 0;
  int ramp_out = 0;
  std::vector<double> custom;   // per-period factors for Shape::Custom
  std::optional<double> value;  // absolute value inside the window instead of a fraction
  bool relaxation = false;      // allow the profile to exceed the nominal table

  bool operator==(const DisruptionEvent&) const = default;
};

/// An order that was not in the plan.
struct InjectedOrder {
  std::string material;
  std::string customer;
  int period = 0;
  double quantity = 0.0;
  Series late_penalty;    // lambda^U from `period` on; required
  double cancel_penalty = 0.0;
  std::optional<double> price;
  bool no_late = false;
  bool no_cancel = false;

  bool operator==(const InjectedOrder&) const = default;
};

struct Scenario {
  std::string label;
  std::vector<DisruptionEvent> events;
  std::vector<InjectedOrder> orders;

  bool operator==(const Scenario&) const = default;
};

struct BoundProfile {
  std::vector<double> values;
  int horizon() const { return static_cast<int>(values.size()); }
};

std::vector<std::string> target_kinds();

/// Multiplier applied to the nominal table in each period (1 outside the
/// window). Throws DataError when the event does not fit the horizon.
std::vector<double> event_factors(int periods, const DisruptionEvent& event);

/// Profile of one table under one event.
BoundProfile make_profile(const Series& nominal, const DisruptionEvent& event);

/// Returns the disrupted copy of `model`. Events on the same table stack
/// multiplicatively in the order given. Injected-order flags need the fid
/// terminal mode in `config`.
NetworkModel apply_scenario(const NetworkModel& model, const Scenario& scenario,
                            const formulation::ExtensionConfig& config = {});

struct Change {
  std::string path;
  int first = 0;  // first period of the run
  int last = 0;   // last period of the run, inclusive
  double before = 0.0;
  double after = 0.0;

  bool operator==(const Change&) const = default;
};

/// Per-parameter differences, with consecutive periods carrying the same
/// old and new values merged into one entry. Throws DataError when the
/// topologies differ.
std::vector<Change> diff_models(const NetworkModel& before, const NetworkModel& after);

}  // namespace scdr::disruption
