#include <algorithm>

#include "scdr/runner/runner.hpp"

namespace scdr::runner {

using formulation::Family;

KpiReport kpis(const formulation::ScheduleReport& schedule) {
  KpiReport k;
  k.profit = schedule.objective;
  k.canceled_orders = static_cast<long>(schedule.cancellations.size());

  bool has_ftc = false;
  for (const auto& s : schedule.series) has_ftc = has_ftc || s.family == Family::FlowOn;

  // Deliveries per (material, customer), used against the previous backlog.
  std::map<std::pair<std::string, std::string>, const std::vector<double>*> delivered;
  for (const auto& s : schedule.series)
    if (s.family == Family::Dem) delivered[{s.material, s.entity}] = &s.values;

  for (const auto& s : schedule.series) {
    const int T = static_cast<int>(s.values.size());
    switch (s.family) {
      case Family::Unmet: {
        auto it = delivered.find({s.material, s.entity});
        for (int t = 1; t < T; ++t) {
          k.delayed_material += s.values[t];
          k.delayed_by_material[s.material] += s.values[t];
          if (it != delivered.end()) k.late_delivered += std::min((*it->second)[t], s.values[t - 1]);
        }
        break;
      }
      case Family::FlowIn:
        if (!has_ftc)
          for (int t = 1; t < T; ++t) k.shipments += s.values[t] > kShipmentThreshold ? 1 : 0;
        break;
      case Family::FlowOn:
        for (int t = 1; t < T; ++t) k.shipments += s.values[t] > 0.5 ? 1 : 0;
        break;
      case Family::Inv:
        if (s.entity_kind == "warehouse") {
          for (int t = 0; t < T; ++t) {
            k.warehouse_inventory += s.values[t];
            k.inventory_by_node[s.entity] += s.values[t];
          }
        }
        break;
      default:
        break;
    }
  }
  return k;
}

}  // namespace scdr::runner
