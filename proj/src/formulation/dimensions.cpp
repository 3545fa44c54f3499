#include <cmath>
#include <set>

#include "scdr/formulation/build.hpp"

namespace scdr::formulation {

namespace {

long nz(double v) { return v != 0.0 ? 1 : 0; }

// Distinct arrival periods in 1..T-1 for a lead-time table.
std::set<long> arrival_set(const IntSeries& lead, int T) {
  std::set<long> s;
  for (int t = 0; t < T; ++t) {
    long a = t + static_cast<long>(lead[t]);
    if (a >= 1 && a <= T - 1) s.insert(a);
  }
  return s;
}

long arrivals_at(const IntSeries& lead, long s) {
  long c = 0;
  for (size_t t = 0; t < lead.size(); ++t)
    if (static_cast<long>(t) + lead[t] == s) ++c;
  return c;
}

}  // namespace

DimensionReport expected_dimensions(const NetworkModel& model, const ExtensionConfig& cfg) {
  const long T = model.periods();
  const long R = T - 1;  // periods carrying rows
  DimensionReport d;
  auto row = [&d](long count, long nnz_each) {
    d.constraints += count;
    d.nonzeros += count * nnz_each;
  };

  for (const Arc& arc : model.arcs) {
    for (const ArcMaterial& am : arc.materials) {
      d.continuous += 2 * T;
      for (long s : arrival_set(am.lead_time, static_cast<int>(T))) row(1, 1 + arrivals_at(am.lead_time, s));
      if (cfg.ftc) {
        d.binary += T;
        for (long t = 1; t < T; ++t) {
          row(1, 1 + nz(am.lower[t]));
          row(1, 1 + nz(am.upper[t]));
        }
      }
    }
  }

  for (size_t n = 0; n < model.nodes.size(); ++n) {
    const Node& node = model.nodes[n];
    Incidence inc = incidence(model, static_cast<int>(n));
    auto arcs_with = [&](const std::vector<int>& arcs, int m) {
      long c = 0;
      for (int a : arcs)
        if (model.arcs[a].slot(m) >= 0) ++c;
      return c;
    };

    for (const Recipe& r : node.recipes) {
      d.continuous += cfg.patp ? 2 * T : T;
      if (cfg.patp)
        for (long s : arrival_set(r.duration, static_cast<int>(T))) row(1, 1 + arrivals_at(r.duration, s));
    }

    for (size_t i = 0; i < node.materials.size(); ++i) {
      const int m = node.materials[i];
      switch (node.kind) {
        case NodeKind::Supplier: {
          const SupplyTerms& s = node.supply[i];
          d.continuous += T;
          row(R, 1 + arcs_with(inc.arcs_out, m));
          if (cfg.sla != SlaMode::Off && node.sla_required) {
            d.binary += T;
            for (long t = 1; t < T; ++t) {
              long buys = 1;
              if (cfg.sla == SlaMode::Window) {
                if (t + s.sla_window[t] > T - 1) continue;
                buys = s.sla_window[t] + 1;
              }
              row(1, buys + nz(s.sla_minimum[t]));
              row(1, buys + nz(s.upper[t]));
            }
          }
          break;
        }
        case NodeKind::Customer: {
          const DemandTerms& dm = node.demand[i];
          d.continuous += 2 * T;
          row(R, 1 + arcs_with(inc.arcs_in, m));
          for (long t = 0; t < T; ++t) d.binary += dm.quantity[t] > 0.0 ? 1 : 0;
          for (long t = 1; t < T; ++t) row(1, 3 + (dm.quantity[t] > 0.0 ? 1 : 0));
          if (cfg.enforce_u_upper)
            for (long t = 1; t < T; ++t)
              if (std::isfinite(dm.unmet_upper[t])) row(1, 1);
          break;
        }
        default: {
          const InventoryTerms& inv = node.inventory[i];
          d.continuous += T;
          long recipes = 0;
          for (const Recipe& r : node.recipes) recipes += nz(r.coefficient(m));
          row(R, 2 + arcs_with(inc.arcs_in, m) + arcs_with(inc.arcs_out, m) + recipes);
          if (cfg.terminal == TerminalMode::Hard) {
            row(1, 1);
          } else {
            d.continuous += 1;
            row(2, 2);
          }
          if (cfg.inventory_floor == FloorMode::Nid) {
            d.continuous += T;
            d.binary += T;
            for (long t = 1; t < T; ++t) {
              double il = inv.alpha[t] * inv.buffer[t];
              row(1, 2);
              row(1, 2 + nz(il - inv.upper[t]));
              row(1, 1 + nz(il));
            }
          }
          break;
        }
      }
    }
    if (cfg.shared_volume && node.holds_inventory() && node.volume)
      row(R, static_cast<long>(node.materials.size()));
  }
  return d;
}

}  // namespace scdr::formulation
