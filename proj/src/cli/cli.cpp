#include "scdr/cli/cli.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "scdr/io/documents.hpp"
#include "scdr/milp/writers.hpp"
#include "scdr/runner/runner.hpp"
#include "scdr/service/service.hpp"

namespace scdr::cli {

namespace fs = std::filesystem;
using io::Json;

namespace {

struct Common {
  std::string model;
  std::string scenario;
  bool no_timestamps = false;
};

int exit_for(milp::Status s) {
  switch (s) {
    case milp::Status::Optimal: return kSuccess;
    case milp::Status::Infeasible: return kInfeasible;
    case milp::Status::Unbounded: return kDataError;
    case milp::Status::Feasible:
    case milp::Status::Limit: return kSolverLimit;
  }
  return kSolverLimit;
}

std::string utc_now() {
  std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

io::ScenarioDocument scenario_or_nominal(const std::string& path) {
  return path.empty() ? io::ScenarioDocument{} : io::load_scenario(path);
}

std::string kpi_line(milp::Status status, double objective, const runner::KpiReport& k) {
  std::ostringstream os;
  os << "status=" << milp::to_string(status) << " objective=" << io::format_number(objective)
     << " profit=" << io::format_number(k.profit) << " canceled_orders=" << k.canceled_orders
     << " delayed_material=" << io::format_number(k.delayed_material)
     << " late_delivered=" << io::format_number(k.late_delivered) << " shipments=" << k.shipments
     << " warehouse_inventory=" << io::format_number(k.warehouse_inventory);
  return os.str();
}

void write_manifest(const fs::path& dir, const std::string& command, const Common& c, Json extra,
                    double wall_seconds) {
  Json j;
  j["command"] = command;
  j["model"] = c.model;
  j["scenario"] = c.scenario;
  for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = it.value();
  if (!c.no_timestamps) {
    j["created_at"] = utc_now();
    j["wall_seconds"] = wall_seconds;
  }
  io::write_file_atomic((dir / "manifest.json").string(), j.dump(2) + "\n");
}

void write_export(const milp::ExportResult& e, const std::string& path) {
  io::write_file_atomic(path, e.text);
  if (!e.name_map.empty()) io::write_file_atomic(path + ".names", e.name_map_text());
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Supply chain disruption planner"};
  app.name("scdr");
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_flag("--no-timestamps", common.no_timestamps, "Leave wall-clock fields out of written files");

  auto add_model = [&](CLI::App* sub) { sub->add_option("--model", common.model, "Model document")->required(); };
  auto add_scenario = [&](CLI::App* sub, bool required) {
    auto* o = sub->add_option("--scenario", common.scenario, "Scenario document");
    if (required) o->required();
  };

  auto* validate = app.add_subcommand("validate", "Load a model and report validation results");
  add_model(validate);

  std::string out_dir, export_mps, format = "tabular";
  std::optional<double> gap, time_limit;
  auto* solve = app.add_subcommand("solve", "Solve one scenario");
  add_model(solve);
  add_scenario(solve, true);
  solve->add_option("--out", out_dir, "Result directory");
  solve->add_option("--format", format, "Result format")->check(CLI::IsMember({"tabular", "structured"}));
  solve->add_option("--gap", gap, "Relative optimality gap")->check(CLI::NonNegativeNumber);
  solve->add_option("--time-limit", time_limit, "Solver time limit in seconds")->check(CLI::PositiveNumber);
  solve->add_option("--export-mps", export_mps, "Also write the disrupted instance as MPS");

  std::string axis1, axis2, sweep_kind = "characterization";
  int workers = 1;
  auto* sweep = app.add_subcommand("sweep", "Two-axis scenario sweep");
  add_model(sweep);
  add_scenario(sweep, true);
  sweep->add_option("--axis1", axis1, "start:stop:count")->required();
  sweep->add_option("--axis2", axis2, "start:stop:count")->required();
  sweep->add_option("--out", out_dir, "Result directory")->required();
  sweep->add_option("--workers", workers, "Parallel cells (0 uses every core)")->check(CLI::NonNegativeNumber);
  sweep->add_option("--kind", sweep_kind, "characterization or penalties")
      ->check(CLI::IsMember({"characterization", "penalties"}));

  int window = 0, steps = 0;
  auto* roll = app.add_subcommand("roll", "Rolling-horizon re-optimization");
  add_model(roll);
  add_scenario(roll, true);
  roll->add_option("--window", window, "Periods per solve")->required();
  roll->add_option("--steps", steps, "Number of solves")->required();
  roll->add_option("--out", out_dir, "Result directory")->required();

  std::string export_format, export_out;
  auto* exp = app.add_subcommand("export", "Write the disrupted instance as MPS or LP text");
  add_model(exp);
  add_scenario(exp, true);
  exp->add_option("--format", export_format, "mps or lp")->required()->check(CLI::IsMember({"mps", "lp"}));
  exp->add_option("--out", export_out, "Output file")->required();

  service::ServiceOptions service_options;
  std::string host = "127.0.0.1";
  int port = 0;
  auto* serve = app.add_subcommand("serve", "Run the HTTP service");
  serve->add_option("--port", port, "TCP port")->required()->check(CLI::Range(1, 65535));
  serve->add_option("--model-dir", service_options.model_dir, "Model directory")->required();
  serve->add_option("--workers", service_options.workers, "Job workers")->check(CLI::PositiveNumber);
  serve->add_option("--queue-cap", service_options.queue_cap, "Queued jobs before 503")->check(CLI::PositiveNumber);
  serve->add_option("--sweep-workers", service_options.sweep_workers, "Threads per sweep job")
      ->check(CLI::PositiveNumber);
  serve->add_option("--host", host, "Bind address");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsage;
  }

  std::vector<double> values1, values2;
  if (*sweep) {
    try {
      values1 = runner::axis_from_spec(axis1);
      values2 = runner::axis_from_spec(axis2);
    } catch (const DataError& e) {
      err << e.what() << "\nRun with --help for more information.\n";
      return kUsage;
    }
  }

  const auto t0 = std::chrono::steady_clock::now();
  try {
    if (*validate) {
      ValidationReport report;
      NetworkModel m = io::load_model(common.model, &report);
      for (const auto& w : report.warnings) err << "warning: " << w << "\n";
      out << "ok: " << m.periods() << " periods, " << m.materials.size() << " materials, " << m.nodes.size()
          << " nodes, " << m.arcs.size() << " arcs\n";
      return kSuccess;
    }

    if (*serve) return service::serve(service_options, host, port, err);

    NetworkModel model = io::load_model(common.model);
    io::ScenarioDocument doc = scenario_or_nominal(common.scenario);

    if (*solve) {
      if (gap) doc.solve.relative_gap = *gap;
      if (time_limit) doc.solve.time_limit_seconds = *time_limit;
      if (!export_mps.empty()) {
        auto built = formulation::build(disruption::apply_scenario(model, doc.scenario, doc.config), doc.config);
        write_export(milp::export_mps(built.instance), export_mps);
      }
      auto r = runner::run(model, doc.scenario, doc.config, doc.solve);
      if (!out_dir.empty()) {
        io::save_results(r.schedule, r.kpis, out_dir, io::result_format_from_string(format));
        write_manifest(out_dir, "solve", common,
                       {{"status", milp::to_string(r.solution.status)},
                        {"objective", r.schedule.objective},
                        {"format", format}},
                       r.wall_seconds);
      }
      out << kpi_line(r.solution.status, r.schedule.objective, r.kpis) << "\n";
      if (!r.solution.diagnostic.empty()) err << r.solution.diagnostic << "\n";
      if (!common.no_timestamps) err << "solved in " << r.wall_seconds << " s\n";
      return exit_for(r.solution.status);
    }

    if (*sweep) {
      runner::SweepOptions so;
      so.solve = doc.solve;
      so.workers = workers;
      auto grid = runner::sweep(model, doc.scenario, runner::sweep_kind_from_string(sweep_kind),
                                values1, values2, doc.config, so);
      std::ostringstream csv;
      io::write_grid_csv(grid, csv);
      io::write_file_atomic((fs::path(out_dir) / "grid.csv").string(), csv.str());
      io::write_file_atomic((fs::path(out_dir) / "grid.json").string(), io::grid_to_json(grid).dump(2) + "\n");
      size_t optimal = std::count_if(grid.cells.begin(), grid.cells.end(),
                                     [](const auto& c) { return c.status == milp::Status::Optimal; });
      write_manifest(out_dir, "sweep", common,
                     {{"kind", sweep_kind}, {"axis1", axis1}, {"axis2", axis2}, {"cells", grid.cells.size()},
                      {"optimal_cells", optimal}},
                     seconds_since(t0));
      out << "cells=" << grid.cells.size() << " optimal=" << optimal << "\n";
      return kSuccess;
    }

    if (*roll) {
      auto r = runner::roll(model, doc.scenario, window, steps, doc.config, doc.solve);
      runner::StitchReport stitch;
      if (r.complete) stitch = runner::check_stitched(model, doc.scenario, doc.config, r);
      std::ostringstream csv;
      io::write_trajectory_csv(model, r.committed, csv);
      io::write_file_atomic((fs::path(out_dir) / "trajectory.csv").string(), csv.str());
      io::write_file_atomic((fs::path(out_dir) / "roll.json").string(), io::roll_to_json(r, stitch).dump(2) + "\n");
      write_manifest(out_dir, "roll", common, {{"window", window}, {"steps", steps}, {"complete", r.complete}},
                     seconds_since(t0));
      out << "steps=" << r.steps.size() << " committed_periods=" << r.committed_periods
          << " complete=" << (r.complete ? "true" : "false") << " stitch_worst=" << io::format_number(stitch.worst)
          << "\n";
      if (!r.complete) {
        err << r.diagnostic << "\n";
        return r.steps.empty() ? kDataError : exit_for(r.steps.back().status);
      }
      return kSuccess;
    }

    if (*exp) {
      auto built = formulation::build(disruption::apply_scenario(model, doc.scenario, doc.config), doc.config);
      write_export(export_format == "mps" ? milp::export_mps(built.instance) : milp::export_lp_text(built.instance),
                   export_out);
      auto d = formulation::dimensions(built.instance);
      out << "continuous=" << d.continuous << " binary=" << d.binary << " rows=" << d.constraints << "\n";
      return kSuccess;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kDataError;
  }
  return kUsage;
}

}  // namespace scdr::cli
