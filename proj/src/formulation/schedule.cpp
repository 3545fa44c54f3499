#include "scdr/formulation/schedule.hpp"

#include <cmath>
#include <map>
#include <tuple>

namespace scdr::formulation {

double objective_coefficient(const NetworkModel& model, const VarKey& k) {
  auto arc_terms = [&]() -> const ArcMaterial& {
    const Arc& a = model.arcs[k.entity];
    return a.materials[a.slot(k.material)];
  };
  auto node_slot = [&]() { return model.nodes[k.entity].slot(k.material); };
  const int t = k.t;
  switch (k.family) {
    case Family::FlowIn:
    case Family::ProdOut:
    case Family::SlaOn:
    case Family::Below:
      return 0.0;
    case Family::FlowOut: return -arc_terms().cost[t];
    case Family::FlowOn: return -arc_terms().fixed_cost[t];
    case Family::Prod:
    case Family::ProdIn:
      return -model.nodes[k.entity].recipes[k.recipe].cost[t];
    case Family::Inv: return -model.nodes[k.entity].inventory[node_slot()].holding_cost[t];
    case Family::Deviation: return -model.nodes[k.entity].inventory[node_slot()].deviation_penalty;
    case Family::NegDev: return model.nodes[k.entity].inventory[node_slot()].shortfall_penalty[t];
    case Family::Buy: return -model.nodes[k.entity].supply[node_slot()].cost[t];
    case Family::Dem: return model.nodes[k.entity].demand[node_slot()].price[t];
    case Family::Unmet: return -model.nodes[k.entity].demand[node_slot()].late_penalty[t];
    case Family::Cancel: return -model.nodes[k.entity].demand[node_slot()].cancel_penalty[t];
  }
  return 0.0;
}

ScheduleReport extract_schedule(const NetworkModel& model, const VariableCatalog& catalog,
                                const milp::Solution& solution) {
  ScheduleReport report;
  report.periods = model.periods();
  report.status = solution.status;
  if (!solution.has_point()) return report;

  using Group = std::tuple<Family, int, int, int>;
  std::map<Group, size_t> index;
  for (int c = 0; c < catalog.size(); ++c) {
    const VarKey& k = catalog.key(c);
    const double v = solution.values[c];
    report.objective += objective_coefficient(model, k) * v;

    if (k.family == Family::Deviation) {
      report.deviations.push_back({model.materials[k.material], model.nodes[k.entity].id, v});
      continue;
    }
    if (k.family == Family::Cancel && v > 0.5) {
      const Node& n = model.nodes[k.entity];
      report.cancellations.push_back(
          {model.materials[k.material], n.id, k.t, n.demand[n.slot(k.material)].quantity[k.t]});
    }

    Group g{k.family, k.material, k.entity, k.recipe};
    auto it = index.find(g);
    if (it == index.end()) {
      TimeSeries s;
      s.family = k.family;
      s.label = to_string(k.family);
      if (k.material >= 0) s.material = model.materials[k.material];
      const bool on_arc = k.family == Family::FlowIn || k.family == Family::FlowOut || k.family == Family::FlowOn;
      s.entity = on_arc ? model.arcs[k.entity].id : model.nodes[k.entity].id;
      s.entity_kind = on_arc ? "arc" : to_string(model.nodes[k.entity].kind);
      if (k.recipe >= 0) s.recipe = model.nodes[k.entity].recipes[k.recipe].id;
      s.values.assign(report.periods, 0.0);
      it = index.emplace(g, report.series.size()).first;
      report.series.push_back(std::move(s));
    }
    report.series[it->second].values[k.t] = v;
  }

  std::vector<TimeSeries> kept;
  for (auto& s : report.series) {
    bool any = false;
    for (double v : s.values) any = any || std::fabs(v) > 1e-9;
    if (any) kept.push_back(std::move(s));
  }
  report.series = std::move(kept);
  return report;
}

}  // namespace scdr::formulation
