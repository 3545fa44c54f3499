#include <atomic>
#include <chrono>
#include <cmath>

#include <omp.h>

#include "scdr/milp/branch_and_bound.hpp"
#include "scdr/runner/runner.hpp"

namespace scdr::runner {

RunResult run(const NetworkModel& model, const disruption::Scenario& scenario,
              const formulation::ExtensionConfig& config, const milp::SolveOptions& options) {
  auto start = std::chrono::steady_clock::now();
  RunResult r;
  NetworkModel disrupted = disruption::apply_scenario(model, scenario, config);
  r.changes = disruption::diff_models(model, disrupted);
  auto built = formulation::build(disrupted, config);
  r.dimensions = formulation::dimensions(built.instance);
  r.solution = milp::solve(built.instance, options);
  r.schedule = formulation::extract_schedule(disrupted, built.catalog, r.solution);
  r.kpis = kpis(r.schedule);
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

int characterization_length(int periods, int start, double duration_fraction) {
  return static_cast<int>(std::lround((1.0 - duration_fraction) * (periods - start)));
}

namespace {

struct CellSpec {
  double a1, a2;
  disruption::Scenario scenario;
  NetworkModel const* model;
};

SweepCell solve_cell(const CellSpec& spec, const formulation::ExtensionConfig& config,
                     const milp::SolveOptions& options) {
  SweepCell cell;
  cell.axis1 = spec.a1;
  cell.axis2 = spec.a2;
  cell.scenario = spec.scenario;
  try {
    RunResult r = run(*spec.model, spec.scenario, config, options);
    cell.status = r.solution.status;
    cell.kpis = r.kpis;
    cell.diagnostic = r.solution.diagnostic;
  } catch (const std::exception& e) {
    cell.status = milp::Status::Limit;
    cell.diagnostic = e.what();
  }
  return cell;
}

SweepGrid execute(SweepGrid grid, const std::vector<CellSpec>& specs, const formulation::ExtensionConfig& config,
                  const SweepOptions& options, bool parallel) {
  const long n = static_cast<long>(specs.size());
  grid.cells.assign(n, SweepCell{});
  std::atomic<size_t> done{0};
  if (parallel) {
    const int workers = options.workers > 0 ? options.workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(workers)
    for (long i = 0; i < n; ++i) {
      grid.cells[i] = solve_cell(specs[i], config, options.solve);
      size_t d = ++done;
      if (options.progress) options.progress(d, static_cast<size_t>(n));
    }
  } else {
    for (long i = 0; i < n; ++i) {
      grid.cells[i] = solve_cell(specs[i], config, options.solve);
      if (options.progress) options.progress(++done, static_cast<size_t>(n));
    }
  }
  return grid;
}

std::vector<CellSpec> characterization_specs(const NetworkModel& model, const disruption::DisruptionEvent& base,
                                             const std::vector<double>& fractions,
                                             const std::vector<double>& durations) {
  const int T = model.periods();
  std::vector<CellSpec> specs;
  for (double f : fractions) {
    for (double d : durations) {
      if (f < 0 || f > 1 || d < 0 || d > 1) throw DataError("sweep fractions and durations must lie in [0, 1]");
      disruption::DisruptionEvent e = base;
      e.fraction = f;
      e.end = e.start + characterization_length(T, base.start, d);
      e.shape = e.end == T ? disruption::Shape::Permanent
                           : (e.start > 0 ? disruption::Shape::Scheduled : disruption::Shape::Immediate);
      e.ramp_in = std::min(e.ramp_in, e.end - e.start);
      e.ramp_out = std::min(e.ramp_out, e.end - e.start - e.ramp_in);
      disruption::Scenario s;
      s.label = "capacity " + std::to_string(f) + " duration " + std::to_string(d);
      s.events.push_back(e);
      specs.push_back({f, d, std::move(s), &model});
    }
  }
  return specs;
}

// Penalty overrides are expressed as events so each cell's scenario is
// self-describing.
std::vector<CellSpec> penalty_specs(const NetworkModel& model, const disruption::Scenario& scenario,
                                    const std::vector<double>& late, const std::vector<double>& cancel) {
  const int T = model.periods();
  std::vector<CellSpec> specs;
  for (double lu : late) {
    for (double ld : cancel) {
      if (!(lu > 0) || !(ld > 0)) throw DataError("penalty sweep values must be positive");
      disruption::Scenario s = scenario;
      s.label = scenario.label + " lambdaU " + std::to_string(lu) + " lambdaDelta " + std::to_string(ld);
      for (auto [kind, v] : {std::pair{"late_penalty", lu}, std::pair{"cancel_penalty", ld}}) {
        disruption::DisruptionEvent e;
        e.target = std::string(kind) + "/*/*";
        e.shape = disruption::Shape::Permanent;
        e.start = 0;
        e.end = T;
        e.value = v;
        s.events.push_back(e);
      }
      specs.push_back({lu, ld, std::move(s), &model});
    }
  }
  return specs;
}

SweepGrid frame(std::string n1, std::string n2, std::vector<double> a1, std::vector<double> a2) {
  SweepGrid g;
  g.axis1_name = std::move(n1);
  g.axis2_name = std::move(n2);
  g.axis1 = std::move(a1);
  g.axis2 = std::move(a2);
  return g;
}

}  // namespace

SweepGrid sweep_characterization(const NetworkModel& model, const disruption::DisruptionEvent& base_event,
                                 const std::vector<double>& fractions, const std::vector<double>& durations,
                                 const formulation::ExtensionConfig& config, const SweepOptions& options) {
  return execute(frame("capacity_fraction", "duration_fraction", fractions, durations),
                 characterization_specs(model, base_event, fractions, durations), config, options, true);
}

SweepGrid sweep_characterization_serial(const NetworkModel& model, const disruption::DisruptionEvent& base_event,
                                        const std::vector<double>& fractions, const std::vector<double>& durations,
                                        const formulation::ExtensionConfig& config, const SweepOptions& options) {
  return execute(frame("capacity_fraction", "duration_fraction", fractions, durations),
                 characterization_specs(model, base_event, fractions, durations), config, options, false);
}

SweepGrid sweep_penalties(const NetworkModel& model, const disruption::Scenario& scenario,
                          const std::vector<double>& late_penalties, const std::vector<double>& cancel_penalties,
                          const formulation::ExtensionConfig& config, const SweepOptions& options) {
  return execute(frame("late_penalty", "cancel_penalty", late_penalties, cancel_penalties),
                 penalty_specs(model, scenario, late_penalties, cancel_penalties), config, options, true);
}

SweepGrid sweep_penalties_serial(const NetworkModel& model, const disruption::Scenario& scenario,
                                 const std::vector<double>& late_penalties,
                                 const std::vector<double>& cancel_penalties,
                                 const formulation::ExtensionConfig& config, const SweepOptions& options) {
  return execute(frame("late_penalty", "cancel_penalty", late_penalties, cancel_penalties),
                 penalty_specs(model, scenario, late_penalties, cancel_penalties), config, options, false);
}

const char* to_string(SweepKind kind) {
  return kind == SweepKind::Characterization ? "characterization" : "penalties";
}

SweepKind sweep_kind_from_string(const std::string& text) {
  if (text == "characterization") return SweepKind::Characterization;
  if (text == "penalties") return SweepKind::Penalties;
  throw DataError("unknown sweep kind '" + text + "' (expected characterization or penalties)");
}

std::vector<double> axis_from_spec(const std::string& spec) {
  auto bad = [&] { return DataError("bad axis spec '" + spec + "' (expected start:stop:count)"); };
  auto a = spec.find(':');
  auto b = a == std::string::npos ? a : spec.find(':', a + 1);
  if (b == std::string::npos || spec.find(':', b + 1) != std::string::npos) throw bad();
  double start, stop;
  long count;
  try {
    size_t used = 0;
    start = std::stod(spec.substr(0, a), &used);
    if (used != a) throw bad();
    std::string s2 = spec.substr(a + 1, b - a - 1);
    stop = std::stod(s2, &used);
    if (used != s2.size()) throw bad();
    std::string s3 = spec.substr(b + 1);
    count = std::stol(s3, &used);
    if (used != s3.size()) throw bad();
  } catch (const std::logic_error&) {
    throw bad();
  }
  if (count < 1 || !std::isfinite(start) || !std::isfinite(stop)) throw bad();
  if (count == 1) {
    if (start != stop) throw DataError("axis spec '" + spec + "': a single point needs start == stop");
    return {start};
  }
  std::vector<double> v(count);
  for (long i = 0; i < count; ++i) v[i] = start + (stop - start) * static_cast<double>(i) / (count - 1);
  v.back() = stop;
  return v;
}

SweepGrid sweep(const NetworkModel& model, const disruption::Scenario& scenario, SweepKind kind,
                const std::vector<double>& axis1, const std::vector<double>& axis2,
                const formulation::ExtensionConfig& config, const SweepOptions& options) {
  if (kind == SweepKind::Penalties) return sweep_penalties(model, scenario, axis1, axis2, config, options);
  if (scenario.events.size() != 1 || !scenario.orders.empty())
    throw DataError("a characterization sweep needs a scenario with exactly one event and no injected orders");
  return sweep_characterization(model, scenario.events.front(), axis1, axis2, config, options);
}

}  // namespace scdr::runner
