#include "scdr/formulation/build.hpp"

#include <algorithm>
#include <cmath>

namespace scdr::formulation {

using milp::BuildError;
using milp::Column;
using milp::MilpInstance;
using milp::Row;
using milp::Sense;

DimensionReport dimensions(const MilpInstance& instance) {
  DimensionReport d;
  d.binary = instance.binary_count();
  d.continuous = instance.column_count() - d.binary;
  d.constraints = instance.row_count();
  d.nonzeros = instance.nonzero_count();
  return d;
}

double floor_threshold(const InventoryTerms& inv, int t) { return inv.alpha[t] * inv.buffer[t]; }

std::vector<std::vector<int>> arrivals(const NetworkModel& model, int arc, int slot) {
  const int T = model.periods();
  const ArcMaterial& am = model.arcs[arc].materials[slot];
  std::vector<std::vector<int>> out(T);
  for (int t = 0; t < T; ++t) {
    long s = static_cast<long>(t) + am.lead_time[t];
    if (s <= T - 1) out[s].push_back(t);
  }
  return out;
}

std::vector<std::vector<int>> completions(const NetworkModel& model, RecipeRef ref) {
  const int T = model.periods();
  const Recipe& r = model.recipe(ref);
  std::vector<std::vector<int>> out(T);
  for (int t = 0; t < T; ++t) {
    long s = static_cast<long>(t) + r.duration[t];
    if (s <= T - 1) out[s].push_back(t);
  }
  return out;
}

namespace {

double indicator(bool b) { return b ? 1.0 : 0.0; }

class Builder {
 public:
  Builder(const NetworkModel& model, const ExtensionConfig& config)
      : model_(model), cfg_(config), T_(model.periods()) {
    for (size_t n = 0; n < model.nodes.size(); ++n)
      incidence_.push_back(incidence(model, static_cast<int>(n)));
  }

  BuiltModel run() {
    check_big_m();
    flow_columns();
    production_columns();
    node_columns();
    binary_columns();

    transport_coupling();
    if (cfg_.patp) production_coupling();
    inventory_balances();
    demand_links();
    buy_links();
    order_management();
    terminal_rows();
    if (cfg_.shared_volume) volume_rows();
    if (cfg_.ftc) ftc_rows();
    if (cfg_.sla != SlaMode::Off) sla_rows();
    if (cfg_.inventory_floor == FloorMode::Nid) nid_rows();
    return std::move(out_);
  }

 private:
  // ---- naming ------------------------------------------------------------

  std::string column_name(const VarKey& k) const {
    std::string args;
    switch (k.family) {
      case Family::FlowIn:
      case Family::FlowOut:
      case Family::FlowOn:
        args = model_.materials[k.material] + "," + model_.arcs[k.entity].id + "," + std::to_string(k.t);
        break;
      case Family::Prod:
      case Family::ProdIn:
      case Family::ProdOut:
        args = model_.nodes[k.entity].id + "," + model_.nodes[k.entity].recipes[k.recipe].id + "," +
               std::to_string(k.t);
        break;
      case Family::Deviation:
        args = model_.materials[k.material] + "," + model_.nodes[k.entity].id;
        break;
      default:
        args = model_.materials[k.material] + "," + model_.nodes[k.entity].id + "," + std::to_string(k.t);
        break;
    }
    return std::string(to_string(k.family)) + "(" + args + ")";
  }

  std::string row_name(const char* family, int material, const std::string& entity, int t) const {
    std::string name = std::string(family) + "(";
    if (material >= 0) name += model_.materials[material] + ",";
    name += entity;
    if (t >= 0) name += "," + std::to_string(t);
    return name + ")";
  }

  // ---- column helpers ----------------------------------------------------

  void add_column(const VarKey& key, double lo, double up, double obj) {
    Column c;
    c.name = column_name(key);
    c.lower = lo;
    c.upper = up;
    c.objective = obj;
    c.binary = is_binary(key.family);
    out_.catalog.add(key);
    out_.instance.add_column(std::move(c));
  }

  int col(Family f, int material, int entity, int t, int recipe = -1) const {
    return out_.catalog.at(VarKey{f, material, entity, recipe, t});
  }

  int find(Family f, int material, int entity, int t, int recipe = -1) const {
    return out_.catalog.find(VarKey{f, material, entity, recipe, t});
  }

  void add_row(std::string name, std::vector<std::pair<int, double>> entries, Sense sense,
               double rhs) {
    Row r;
    r.name = std::move(name);
    for (const auto& e : entries)
      if (e.second != 0.0) r.entries.push_back(e);
    r.sense = sense;
    r.rhs = rhs;
    out_.instance.add_row(std::move(r));
  }

  template <typename F>
  void for_each_arc_material(int m, F&& f) const {
    for (size_t a = 0; a < model_.arcs.size(); ++a) {
      int slot = model_.arcs[a].slot(m);
      if (slot >= 0) f(static_cast<int>(a), slot);
    }
  }

  template <typename F>
  void for_each_node_material(int m, bool (*want)(const Node&), F&& f) const {
    for (size_t n = 0; n < model_.nodes.size(); ++n) {
      const Node& node = model_.nodes[n];
      if (!want(node)) continue;
      int slot = node.slot(m);
      if (slot >= 0) f(static_cast<int>(n), slot);
    }
  }

  static bool is_storage(const Node& n) { return n.holds_inventory(); }
  static bool is_supplier(const Node& n) { return n.kind == NodeKind::Supplier; }
  static bool is_customer(const Node& n) { return n.kind == NodeKind::Customer; }
  bool is_sla_supplier(const Node& n) const {
    return n.kind == NodeKind::Supplier && n.sla_required && cfg_.sla != SlaMode::Off;
  }

  int material_count() const { return static_cast<int>(model_.materials.size()); }

  // ---- checks ------------------------------------------------------------

  void check_big_m() const {
    if (cfg_.ftc) {
      for (const Arc& arc : model_.arcs)
        for (const ArcMaterial& am : arc.materials)
          for (int t = 1; t < T_; ++t)
            if (!std::isfinite(am.upper[t]))
              throw BuildError("FTC requires finite flow capacity (arc '" + arc.id + "' material '" +
                               model_.materials[am.material] + "')");
    }
    if (cfg_.sla != SlaMode::Off) {
      for (const Node& n : model_.nodes) {
        if (!is_sla_supplier(n)) continue;
        for (size_t i = 0; i < n.materials.size(); ++i)
          for (int t = 1; t < T_; ++t)
            if (!std::isfinite(n.supply[i].upper[t]))
              throw BuildError("SLA requires finite buy capacity (supplier '" + n.id + "' material '" +
                               model_.materials[n.materials[i]] + "')");
      }
    }
  }

  // ---- columns -----------------------------------------------------------

  void flow_columns() {
    for (int m = 0; m < material_count(); ++m) {
      for_each_arc_material(m, [&](int a, int slot) {
        const ArcMaterial& am = model_.arcs[a].materials[slot];
        for (int t = 0; t < T_; ++t) {
          double lo = 0.0, up = am.upper[t];
          if (t == 0) lo = up = am.preplanned_in;
          else if (t + am.lead_time[t] > T_ - 1) lo = up = 0.0;
          add_column({Family::FlowIn, m, a, -1, t}, lo, up, 0.0);
        }
      });
    }
    for (int m = 0; m < material_count(); ++m) {
      for_each_arc_material(m, [&](int a, int slot) {
        const ArcMaterial& am = model_.arcs[a].materials[slot];
        auto arr = arrivals(model_, a, slot);
        for (int t = 0; t < T_; ++t) {
          double lo = 0.0, up = milp::kInf;
          if (t == 0) lo = up = am.preplanned_out;
          else if (arr[t].empty()) lo = up = am.in_transit[t];
          add_column({Family::FlowOut, m, a, -1, t}, lo, up, -am.cost[t]);
        }
      });
    }
  }

  void production_columns() {
    auto refs = model_.recipe_refs();
    if (!cfg_.patp) {
      for (const RecipeRef& ref : refs) {
        const Recipe& r = model_.recipe(ref);
        for (int t = 0; t < T_; ++t) {
          double lo = r.lower[t], up = r.upper[t];
          if (t == 0) lo = up = r.preplanned;
          add_column({Family::Prod, -1, ref.plant, ref.slot, t}, lo, up, -r.cost[t]);
        }
      }
      return;
    }
    for (const RecipeRef& ref : refs) {
      const Recipe& r = model_.recipe(ref);
      for (int t = 0; t < T_; ++t) {
        double lo = r.lower[t], up = r.upper[t];
        if (t == 0) lo = up = r.preplanned;
        else if (t + r.duration[t] > T_ - 1) lo = up = 0.0;
        add_column({Family::ProdIn, -1, ref.plant, ref.slot, t}, lo, up, -r.cost[t]);
      }
    }
    for (const RecipeRef& ref : refs) {
      const Recipe& r = model_.recipe(ref);
      auto comp = completions(model_, ref);
      for (int t = 0; t < T_; ++t) {
        double lo = 0.0, up = milp::kInf;
        if (t == 0) {
          double v = r.preplanned_out.value_or((r.duration[0] == 0 ? r.preplanned : 0.0) +
                                               r.in_progress[0]);
          lo = up = v;
        } else if (comp[t].empty()) {
          lo = up = r.in_progress[t];
        }
        add_column({Family::ProdOut, -1, ref.plant, ref.slot, t}, lo, up, 0.0);
      }
    }
  }

  void node_columns() {
    const bool nid = cfg_.inventory_floor == FloorMode::Nid;
    for (int m = 0; m < material_count(); ++m) {
      for_each_node_material(m, is_storage, [&](int n, int slot) {
        const InventoryTerms& inv = model_.nodes[n].inventory[slot];
        for (int t = 0; t < T_; ++t) {
          double lo = nid ? 0.0 : floor_threshold(inv, t), up = inv.upper[t];
          if (t == 0) lo = up = inv.initial;
          add_column({Family::Inv, m, n, -1, t}, lo, up, -inv.holding_cost[t]);
        }
      });
    }
    for (int m = 0; m < material_count(); ++m) {
      for_each_node_material(m, is_supplier, [&](int n, int slot) {
        const SupplyTerms& s = model_.nodes[n].supply[slot];
        for (int t = 0; t < T_; ++t) {
          double lo = s.lower[t], up = s.upper[t];
          if (t == 0) lo = up = s.preplanned;
          add_column({Family::Buy, m, n, -1, t}, lo, up, -s.cost[t]);
        }
      });
    }
    for (int m = 0; m < material_count(); ++m) {
      for_each_node_material(m, is_customer, [&](int n, int slot) {
        const DemandTerms& d = model_.nodes[n].demand[slot];
        for (int t = 0; t < T_; ++t) {
          double lo = d.lower[t], up = d.upper[t];
          if (t == 0) lo = up = d.preplanned;
          add_column({Family::Dem, m, n, -1, t}, lo, up, d.price[t]);
        }
      });
    }
    for (int m = 0; m < material_count(); ++m) {
      for_each_node_material(m, is_customer, [&](int n, int slot) {
        const DemandTerms& d = model_.nodes[n].demand[slot];
        for (int t = 0; t < T_; ++t) {
          double lo = 0.0, up = milp::kInf;
          if (t == 0) lo = up = d.backlog;
          else if (d.no_late) lo = up = 0.0;
          add_column({Family::Unmet, m, n, -1, t}, lo, up, -d.late_penalty[t]);
        }
      });
    }
    if (cfg_.terminal == TerminalMode::Fid) {
      for (int m = 0; m < material_count(); ++m) {
        for_each_node_material(m, is_storage, [&](int n, int slot) {
          const InventoryTerms& inv = model_.nodes[n].inventory[slot];
          add_column({Family::Deviation, m, n, -1, 0}, 0.0, milp::kInf, -inv.deviation_penalty);
        });
      }
    }
    if (nid) {
      for (int m = 0; m < material_count(); ++m) {
        for_each_node_material(m, is_storage, [&](int n, int slot) {
          const InventoryTerms& inv = model_.nodes[n].inventory[slot];
          for (int t = 0; t < T_; ++t) {
            double lo = -floor_threshold(inv, t), up = 0.0;
            if (t == 0) lo = up = std::min(0.0, inv.initial - floor_threshold(inv, 0));
            add_column({Family::NegDev, m, n, -1, t}, lo, up, inv.shortfall_penalty[t]);
          }
        });
      }
    }
  }

  void binary_columns() {
    for (int m = 0; m < material_count(); ++m) {
      for_each_node_material(m, is_customer, [&](int n, int slot) {
        const DemandTerms& d = model_.nodes[n].demand[slot];
        for (int t = 0; t < T_; ++t) {
          if (!(d.quantity[t] > 0.0)) continue;
          double up = (t == 0 || d.no_cancel[t]) ? 0.0 : 1.0;
          add_column({Family::Cancel, m, n, -1, t}, 0.0, up, -d.cancel_penalty[t]);
        }
      });
    }
    if (cfg_.ftc) {
      for (int m = 0; m < material_count(); ++m) {
        for_each_arc_material(m, [&](int a, int slot) {
          const ArcMaterial& am = model_.arcs[a].materials[slot];
          for (int t = 0; t < T_; ++t) {
            double lo = 0.0, up = 1.0;
            if (t == 0) lo = up = indicator(am.preplanned_in > 0.0);
            add_column({Family::FlowOn, m, a, -1, t}, lo, up, -am.fixed_cost[t]);
          }
        });
      }
    }
    if (cfg_.sla != SlaMode::Off) {
      for (int m = 0; m < material_count(); ++m) {
        for_each_node_material(m, is_supplier, [&](int n, int slot) {
          const Node& node = model_.nodes[n];
          if (!node.sla_required) return;
          const SupplyTerms& s = node.supply[slot];
          for (int t = 0; t < T_; ++t) {
            double lo = 0.0, up = 1.0;
            if (t == 0) lo = up = indicator(s.preplanned > 0.0);
            else if (cfg_.sla == SlaMode::Window && t + s.sla_window[t] > T_ - 1) up = 0.0;
            add_column({Family::SlaOn, m, n, -1, t}, lo, up, 0.0);
          }
        });
      }
    }
    if (cfg_.inventory_floor == FloorMode::Nid) {
      for (int m = 0; m < material_count(); ++m) {
        for_each_node_material(m, is_storage, [&](int n, int slot) {
          const InventoryTerms& inv = model_.nodes[n].inventory[slot];
          for (int t = 0; t < T_; ++t) {
            double lo = 0.0, up = 1.0;
            if (t == 0) lo = up = indicator(inv.initial < floor_threshold(inv, 0));
            add_column({Family::Below, m, n, -1, t}, lo, up, 0.0);
          }
        });
      }
    }
  }

  // ---- rows --------------------------------------------------------------

  void transport_coupling() {
    for (int m = 0; m < material_count(); ++m) {
      for_each_arc_material(m, [&](int a, int slot) {
        const ArcMaterial& am = model_.arcs[a].materials[slot];
        auto arr = arrivals(model_, a, slot);
        for (int s = 1; s < T_; ++s) {
          if (arr[s].empty()) continue;
          std::vector<std::pair<int, double>> e{{col(Family::FlowOut, m, a, s), 1.0}};
          for (int t : arr[s]) e.emplace_back(col(Family::FlowIn, m, a, t), -1.0);
          add_row(row_name("couple", m, model_.arcs[a].id, s), std::move(e), Sense::Equal,
                  am.in_transit[s]);
        }
      });
    }
  }

  void production_coupling() {
    for (const RecipeRef& ref : model_.recipe_refs()) {
      const Recipe& r = model_.recipe(ref);
      auto comp = completions(model_, ref);
      const std::string entity = model_.nodes[ref.plant].id + "," + r.id;
      for (int s = 1; s < T_; ++s) {
        if (comp[s].empty()) continue;
        std::vector<std::pair<int, double>> e{{col(Family::ProdOut, -1, ref.plant, s, ref.slot), 1.0}};
        for (int t : comp[s]) e.emplace_back(col(Family::ProdIn, -1, ref.plant, t, ref.slot), -1.0);
        add_row(row_name("pcouple", -1, entity, s), std::move(e), Sense::Equal, r.in_progress[s]);
      }
    }
  }

  void inventory_balances() {
    for (int m = 0; m < material_count(); ++m) {
      for_each_node_material(m, is_storage, [&](int n, int) {
        const Node& node = model_.nodes[n];
        for (int t = 1; t < T_; ++t) {
          std::vector<std::pair<int, double>> e;
          e.emplace_back(col(Family::Inv, m, n, t), 1.0);
          e.emplace_back(col(Family::Inv, m, n, t - 1), -1.0);
          for (int a : incidence_[n].arcs_in)
            if (model_.arcs[a].slot(m) >= 0) e.emplace_back(col(Family::FlowOut, m, a, t), -1.0);
          for (int a : incidence_[n].arcs_out)
            if (model_.arcs[a].slot(m) >= 0) e.emplace_back(col(Family::FlowIn, m, a, t), 1.0);
          for (size_t r = 0; r < node.recipes.size(); ++r) {
            double phi = node.recipes[r].coefficient(m);
            if (phi == 0.0) continue;
            int rs = static_cast<int>(r);
            int c = !cfg_.patp ? col(Family::Prod, -1, n, t, rs)
                    : phi > 0  ? col(Family::ProdOut, -1, n, t, rs)
                               : col(Family::ProdIn, -1, n, t, rs);
            e.emplace_back(c, -phi);
          }
          add_row(row_name("bal", m, node.id, t), std::move(e), Sense::Equal, 0.0);
        }
      });
    }
  }

  void demand_links() {
    for (int m = 0; m < material_count(); ++m) {
      for_each_node_material(m, is_customer, [&](int n, int) {
        for (int t = 1; t < T_; ++t) {
          std::vector<std::pair<int, double>> e{{col(Family::Dem, m, n, t), 1.0}};
          for (int a : incidence_[n].arcs_in)
            if (model_.arcs[a].slot(m) >= 0) e.emplace_back(col(Family::FlowOut, m, a, t), -1.0);
          add_row(row_name("dem", m, model_.nodes[n].id, t), std::move(e), Sense::Equal, 0.0);
        }
      });
    }
  }

  void buy_links() {
    for (int m = 0; m < material_count(); ++m) {
      for_each_node_material(m, is_supplier, [&](int n, int) {
        for (int t = 1; t < T_; ++t) {
          std::vector<std::pair<int, double>> e{{col(Family::Buy, m, n, t), 1.0}};
          for (int a : incidence_[n].arcs_out)
            if (model_.arcs[a].slot(m) >= 0) e.emplace_back(col(Family::FlowIn, m, a, t), -1.0);
          add_row(row_name("buy", m, model_.nodes[n].id, t), std::move(e), Sense::Equal, 0.0);
        }
      });
    }
  }

  void order_management() {
    for (int m = 0; m < material_count(); ++m) {
      for_each_node_material(m, is_customer, [&](int n, int slot) {
        const DemandTerms& d = model_.nodes[n].demand[slot];
        for (int t = 1; t < T_; ++t) {
          std::vector<std::pair<int, double>> e{{col(Family::Unmet, m, n, t), 1.0},
                                                {col(Family::Unmet, m, n, t - 1), -1.0},
                                                {col(Family::Dem, m, n, t), 1.0}};
          int y = find(Family::Cancel, m, n, t);
          if (y >= 0) e.emplace_back(y, d.quantity[t]);
          add_row(row_name("unmet", m, model_.nodes[n].id, t), std::move(e), Sense::Equal,
                  d.quantity[t]);
        }
      });
    }
    if (!cfg_.enforce_u_upper) return;
    for (int m = 0; m < material_count(); ++m) {
      for_each_node_material(m, is_customer, [&](int n, int slot) {
        const DemandTerms& d = model_.nodes[n].demand[slot];
        for (int t = 1; t < T_; ++t) {
          if (!std::isfinite(d.unmet_upper[t])) continue;
          add_row(row_name("umax", m, model_.nodes[n].id, t), {{col(Family::Unmet, m, n, t), 1.0}},
                  Sense::LessEqual, d.unmet_upper[t]);
        }
      });
    }
  }

  void terminal_rows() {
    const int last = T_ - 1;
    for (int m = 0; m < material_count(); ++m) {
      for_each_node_material(m, is_storage, [&](int n, int slot) {
        const InventoryTerms& inv = model_.nodes[n].inventory[slot];
        const double target = inv.terminal_target();
        const std::string& id = model_.nodes[n].id;
        int i_last = col(Family::Inv, m, n, last);
        if (cfg_.terminal == TerminalMode::Hard) {
          add_row(row_name("term", m, id, -1), {{i_last, 1.0}}, Sense::Equal, target);
          return;
        }
        int dev = col(Family::Deviation, m, n, 0);
        add_row(row_name("devlo", m, id, -1), {{i_last, 1.0}, {dev, 1.0}}, Sense::GreaterEqual, target);
        add_row(row_name("devhi", m, id, -1), {{i_last, -1.0}, {dev, 1.0}}, Sense::GreaterEqual, -target);
      });
    }
  }

  void volume_rows() {
    for (size_t n = 0; n < model_.nodes.size(); ++n) {
      const Node& node = model_.nodes[n];
      if (!node.holds_inventory() || !node.volume) continue;
      for (int t = 1; t < T_; ++t) {
        std::vector<std::pair<int, double>> e;
        for (int m : node.materials) e.emplace_back(col(Family::Inv, m, static_cast<int>(n), t), 1.0);
        add_row(row_name("vol", -1, node.id, t), std::move(e), Sense::LessEqual, (*node.volume)[t]);
      }
    }
  }

  void ftc_rows() {
    for (int m = 0; m < material_count(); ++m) {
      for_each_arc_material(m, [&](int a, int slot) {
        const ArcMaterial& am = model_.arcs[a].materials[slot];
        const std::string& id = model_.arcs[a].id;
        for (int t = 1; t < T_; ++t) {
          int f = col(Family::FlowIn, m, a, t), x = col(Family::FlowOn, m, a, t);
          add_row(row_name("ftclo", m, id, t), {{f, 1.0}, {x, -am.lower[t]}}, Sense::GreaterEqual, 0.0);
          add_row(row_name("ftchi", m, id, t), {{f, 1.0}, {x, -am.upper[t]}}, Sense::LessEqual, 0.0);
        }
      });
    }
  }

  void sla_rows() {
    for (int m = 0; m < material_count(); ++m) {
      for_each_node_material(m, is_supplier, [&](int n, int slot) {
        const Node& node = model_.nodes[n];
        if (!node.sla_required) return;
        const SupplyTerms& s = node.supply[slot];
        for (int t = 1; t < T_; ++t) {
          int w = col(Family::SlaOn, m, n, t);
          std::vector<std::pair<int, double>> buys;
          if (cfg_.sla == SlaMode::Simple) {
            buys.emplace_back(col(Family::Buy, m, n, t), 1.0);
          } else {
            if (t + s.sla_window[t] > T_ - 1) continue;
            for (int u = t; u <= t + s.sla_window[t]; ++u) buys.emplace_back(col(Family::Buy, m, n, u), 1.0);
          }
          auto lo = buys, hi = buys;
          lo.emplace_back(w, -s.sla_minimum[t]);
          hi.emplace_back(w, -s.upper[t]);
          add_row(row_name("slalo", m, node.id, t), std::move(lo), Sense::GreaterEqual, 0.0);
          add_row(row_name("slahi", m, node.id, t), std::move(hi), Sense::LessEqual, 0.0);
        }
      });
    }
  }

  void nid_rows() {
    for (int m = 0; m < material_count(); ++m) {
      for_each_node_material(m, is_storage, [&](int n, int slot) {
        const InventoryTerms& inv = model_.nodes[n].inventory[slot];
        const std::string& id = model_.nodes[n].id;
        for (int t = 1; t < T_; ++t) {
          const double il = floor_threshold(inv, t), iu = inv.upper[t];
          int k = col(Family::NegDev, m, n, t), i = col(Family::Inv, m, n, t), z = col(Family::Below, m, n, t);
          add_row(row_name("relu1", m, id, t), {{k, 1.0}, {i, -1.0}}, Sense::LessEqual, -il);
          add_row(row_name("relu2", m, id, t), {{k, 1.0}, {i, -1.0}, {z, il - iu}}, Sense::GreaterEqual, -iu);
          add_row(row_name("relu3", m, id, t), {{k, 1.0}, {z, il}}, Sense::GreaterEqual, 0.0);
        }
      });
    }
  }

  const NetworkModel& model_;
  ExtensionConfig cfg_;
  int T_;
  std::vector<Incidence> incidence_;
  BuiltModel out_;
};

}  // namespace

BuiltModel build(const NetworkModel& model, const ExtensionConfig& config) {
  require_valid(model);
  BuiltModel built = Builder(model, config).run();
  built.instance.check();
  return built;
}

}  // namespace scdr::formulation
