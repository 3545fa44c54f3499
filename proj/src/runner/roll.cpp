#include <algorithm>
#include <cmath>

#include "scdr/milp/branch_and_bound.hpp"
#include "scdr/runner/runner.hpp"

namespace scdr::runner {

using formulation::Family;
using formulation::VarKey;

namespace {

template <typename V>
void cut(V& v, int start, int length) {
  if (v.empty()) return;
  V out(v.begin() + start, v.begin() + start + length);
  v = std::move(out);
}

// Solver output cleaned for reuse as fixed period-0 data.
double clean(Family f, double v) {
  if (formulation::is_binary(f)) return std::round(v);
  if (std::abs(v) < 1e-9) return 0.0;
  return v;
}

double value_at(const Trajectory& tr, VarKey k) {
  auto it = tr.find(k);
  return it == tr.end() ? 0.0 : it->second;
}

// Fixes period 0 of `window` (absolute period `offset`) from the committed
// trajectory and adds pipeline arrivals dispatched before `offset`.
void shift_state(NetworkModel& window, const NetworkModel& full, const Trajectory& done, int offset) {
  auto v = [&](Family f, int m, int e, int t, int r = -1) { return value_at(done, {f, m, e, r, t}); };
  const int W = window.periods();

  for (size_t a = 0; a < window.arcs.size(); ++a) {
    const int ai = static_cast<int>(a);
    for (size_t s = 0; s < window.arcs[a].materials.size(); ++s) {
      ArcMaterial& am = window.arcs[a].materials[s];
      const IntSeries& lead = full.arcs[a].materials[s].lead_time;
      am.preplanned_in = v(Family::FlowIn, am.material, ai, offset);
      am.preplanned_out = v(Family::FlowOut, am.material, ai, offset);
      for (int t = 0; t < offset; ++t) {
        long arrive = static_cast<long>(t) + lead[t] - offset;
        if (arrive >= 0 && arrive < W) am.in_transit[arrive] += v(Family::FlowIn, am.material, ai, t);
      }
    }
  }

  for (size_t n = 0; n < window.nodes.size(); ++n) {
    Node& node = window.nodes[n];
    const Node& orig = full.nodes[n];
    const int ni = static_cast<int>(n);
    for (size_t s = 0; s < node.materials.size(); ++s) {
      const int m = node.materials[s];
      if (!node.supply.empty()) node.supply[s].preplanned = v(Family::Buy, m, ni, offset);
      if (!node.inventory.empty()) {
        node.inventory[s].initial = v(Family::Inv, m, ni, offset);
        node.inventory[s].target = orig.inventory[s].terminal_target();
      }
      if (!node.demand.empty()) {
        DemandTerms& d = node.demand[s];
        d.preplanned = v(Family::Dem, m, ni, offset);
        d.backlog = v(Family::Unmet, m, ni, offset);
        d.quantity[0] = 0.0;  // already handled by the step that committed it
      }
    }
    for (size_t r = 0; r < node.recipes.size(); ++r) {
      Recipe& rec = node.recipes[r];
      const int ri = static_cast<int>(r);
      if (done.count({Family::ProdIn, -1, ni, ri, offset})) {
        rec.preplanned = v(Family::ProdIn, -1, ni, offset, ri);
        rec.preplanned_out = v(Family::ProdOut, -1, ni, offset, ri);
        const IntSeries& dur = orig.recipes[r].duration;
        for (int t = 0; t < offset; ++t) {
          long finish = static_cast<long>(t) + dur[t] - offset;
          if (finish >= 0 && finish < W) rec.in_progress[finish] += v(Family::ProdIn, -1, ni, t, ri);
        }
      } else {
        rec.preplanned = v(Family::Prod, -1, ni, offset, ri);
      }
    }
  }
}

void commit(Trajectory& done, const formulation::VariableCatalog& catalog, const milp::Solution& sol, int offset,
            int first, int last) {
  for (int c = 0; c < catalog.size(); ++c) {
    VarKey k = catalog.key(c);
    if (k.family == Family::Deviation || k.t < first || k.t > last) continue;
    k.t += offset;
    done[k] = clean(k.family, sol.values[c]);
  }
}

}  // namespace

NetworkModel slice(const NetworkModel& model, int start, int length) {
  const int T = model.periods();
  if (start < 0 || length < 2 || start + length > T)
    throw DataError("slice [" + std::to_string(start) + ", " + std::to_string(start + length) +
                    ") does not fit a horizon of " + std::to_string(T));
  NetworkModel out = model;
  out.time.period_count = length;
  for (Node& n : out.nodes) {
    for (SupplyTerms& s : n.supply) {
      for (Series* x : {&s.lower, &s.upper, &s.cost, &s.sla_minimum}) cut(*x, start, length);
      cut(s.sla_window, start, length);
    }
    for (InventoryTerms& i : n.inventory)
      for (Series* x : {&i.upper, &i.buffer, &i.alpha, &i.holding_cost, &i.shortfall_penalty}) cut(*x, start, length);
    for (DemandTerms& d : n.demand) {
      for (Series* x : {&d.quantity, &d.price, &d.late_penalty, &d.cancel_penalty, &d.lower, &d.upper,
                        &d.unmet_lower, &d.unmet_upper})
        cut(*x, start, length);
      cut(d.no_cancel, start, length);
    }
    for (Recipe& r : n.recipes) {
      for (Series* x : {&r.lower, &r.upper, &r.cost, &r.in_progress}) cut(*x, start, length);
      cut(r.duration, start, length);
    }
    if (n.volume) cut(*n.volume, start, length);
  }
  for (Arc& a : out.arcs) {
    for (ArcMaterial& am : a.materials) {
      for (Series* x : {&am.lower, &am.upper, &am.cost, &am.fixed_cost, &am.in_transit}) cut(*x, start, length);
      cut(am.lead_time, start, length);
    }
  }
  return out;
}

RollResult roll(const NetworkModel& model, const disruption::Scenario& scenario, int window, int steps,
                const formulation::ExtensionConfig& config, const milp::SolveOptions& options) {
  const int T = model.periods();
  if (window < 2 || steps < 1 || steps - 1 + window > T)
    throw DataError("rolling horizon needs window >= 2, steps >= 1 and steps - 1 + window <= " +
                    std::to_string(T));
  const NetworkModel full = disruption::apply_scenario(model, scenario, config);

  RollResult result;
  for (int j = 0; j < steps; ++j) {
    const bool last = j == steps - 1;
    NetworkModel local = slice(full, j, window);
    if (j > 0) shift_state(local, full, result.committed, j);
    else
      for (Node& n : local.nodes)
        for (DemandTerms& d : n.demand) d.quantity[0] = 0.0;

    formulation::ExtensionConfig cfg = config;
    if (!(last && j + window == T)) cfg.terminal = formulation::TerminalMode::Fid;

    RollStep step;
    step.offset = j;
    formulation::BuiltModel built;
    try {
      built = formulation::build(local, cfg);
    } catch (const std::exception& e) {
      result.diagnostic = "step " + std::to_string(j) + ": " + e.what();
      result.steps.push_back(std::move(step));
      return result;
    }
    milp::Solution sol = milp::solve(built.instance, options);
    step.status = sol.status;
    step.schedule = formulation::extract_schedule(local, built.catalog, sol);
    step.kpis = kpis(step.schedule);
    result.steps.push_back(std::move(step));
    if (!sol.has_point()) {
      result.diagnostic = "step " + std::to_string(j) + " ended " + milp::to_string(sol.status) +
                          (sol.diagnostic.empty() ? "" : ": " + sol.diagnostic);
      return result;
    }
    commit(result.committed, built.catalog, sol, j, j == 0 ? 0 : 1, last ? window - 1 : 1);
    result.committed_periods = last ? j + window : j + 2;
  }
  result.complete = true;
  return result;
}

StitchReport check_stitched(const NetworkModel& model, const disruption::Scenario& scenario,
                            const formulation::ExtensionConfig& config, const RollResult& result) {
  StitchReport report;
  if (result.committed_periods < 2) return report;
  NetworkModel full = slice(disruption::apply_scenario(model, scenario, config), 0, result.committed_periods);
  auto built = formulation::build(full, config);
  static const char* kChecked[] = {"couple(", "pcouple(", "bal(", "dem(", "buy(", "unmet("};
  for (const milp::Row& row : built.instance.rows) {
    if (std::none_of(std::begin(kChecked), std::end(kChecked),
                     [&](const char* p) { return row.name.rfind(p, 0) == 0; }))
      continue;
    double lhs = 0.0;
    for (const auto& [c, a] : row.entries) lhs += a * value_at(result.committed, built.catalog.key(c));
    double violation = 0.0;
    if (row.sense != milp::Sense::GreaterEqual) violation = std::max(violation, lhs - row.rhs);
    if (row.sense != milp::Sense::LessEqual) violation = std::max(violation, row.rhs - lhs);
    double scaled = violation / (1.0 + std::abs(row.rhs));
    ++report.rows_checked;
    if (scaled > report.worst || report.worst_row.empty()) {
      report.worst = scaled;
      report.worst_row = row.name;
    }
  }
  return report;
}

}  // namespace scdr::runner
