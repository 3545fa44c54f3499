#include "scdr/core/network_model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

namespace scdr {

const char* to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::Supplier: return "supplier";
    case NodeKind::Plant: return "plant";
    case NodeKind::Warehouse: return "warehouse";
    case NodeKind::Customer: return "customer";
  }
  return "?";
}

NodeKind node_kind_from_string(const std::string& text) {
  if (text == "supplier") return NodeKind::Supplier;
  if (text == "plant") return NodeKind::Plant;
  if (text == "warehouse") return NodeKind::Warehouse;
  if (text == "customer") return NodeKind::Customer;
  throw DataError("unknown node kind '" + text + "'");
}

double Recipe::coefficient(int material) const {
  for (const auto& [m, phi] : coefficients)
    if (m == material) return phi;
  return 0.0;
}

int Node::slot(int material) const {
  auto it = std::lower_bound(materials.begin(), materials.end(), material);
  if (it == materials.end() || *it != material) return -1;
  return static_cast<int>(it - materials.begin());
}

int Arc::slot(int material) const {
  for (size_t i = 0; i < materials.size(); ++i)
    if (materials[i].material == material) return static_cast<int>(i);
  return -1;
}

int NetworkModel::material_index(const std::string& id) const {
  for (size_t i = 0; i < materials.size(); ++i)
    if (materials[i] == id) return static_cast<int>(i);
  return -1;
}

int NetworkModel::node_index(const std::string& id) const {
  for (size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i].id == id) return static_cast<int>(i);
  return -1;
}

int NetworkModel::arc_index(const std::string& id) const {
  for (size_t i = 0; i < arcs.size(); ++i)
    if (arcs[i].id == id) return static_cast<int>(i);
  return -1;
}

std::vector<RecipeRef> NetworkModel::recipe_refs() const {
  std::vector<RecipeRef> refs;
  for (size_t n = 0; n < nodes.size(); ++n)
    for (size_t r = 0; r < nodes[n].recipes.size(); ++r)
      refs.push_back({static_cast<int>(n), static_cast<int>(r)});
  return refs;
}

SupplyTerms default_supply_terms(int periods) {
  SupplyTerms s;
  s.lower = constant_series(periods, 0.0);
  s.upper = constant_series(periods, kInf);
  s.cost = constant_series(periods, 0.0);
  s.sla_minimum = constant_series(periods, 0.0);
  s.sla_window.assign(periods, 0);
  return s;
}

InventoryTerms default_inventory_terms(int periods, double capacity) {
  InventoryTerms inv;
  inv.upper = constant_series(periods, capacity);
  inv.buffer = constant_series(periods, 0.0);
  inv.alpha = constant_series(periods, 0.0);
  inv.holding_cost = constant_series(periods, 0.0);
  inv.shortfall_penalty = constant_series(periods, 0.0);
  return inv;
}

DemandTerms default_demand_terms(int periods) {
  DemandTerms d;
  d.quantity = constant_series(periods, 0.0);
  d.price = constant_series(periods, 0.0);
  d.late_penalty = constant_series(periods, 0.0);
  d.cancel_penalty = constant_series(periods, 0.0);
  d.lower = constant_series(periods, 0.0);
  d.upper = constant_series(periods, kInf);
  d.unmet_lower = constant_series(periods, 0.0);
  d.unmet_upper = constant_series(periods, kInf);
  d.no_cancel.assign(periods, 0);
  return d;
}

ArcMaterial default_arc_material(int periods, int material) {
  ArcMaterial am;
  am.material = material;
  am.lead_time.assign(periods, 0);
  am.lower = constant_series(periods, 0.0);
  am.upper = constant_series(periods, kInf);
  am.cost = constant_series(periods, 0.0);
  am.fixed_cost = constant_series(periods, 0.0);
  am.in_transit = constant_series(periods, 0.0);
  return am;
}

Recipe default_recipe(int periods, std::string id) {
  Recipe r;
  r.id = std::move(id);
  r.lower = constant_series(periods, 0.0);
  r.upper = constant_series(periods, kInf);
  r.cost = constant_series(periods, 0.0);
  r.duration.assign(periods, 0);
  r.in_progress = constant_series(periods, 0.0);
  return r;
}

int add_node(NetworkModel& model, std::string id, NodeKind kind, std::vector<int> materials,
             double capacity) {
  const int T = model.periods();
  Node n;
  n.id = std::move(id);
  n.kind = kind;
  std::sort(materials.begin(), materials.end());
  n.materials = std::move(materials);
  for (size_t i = 0; i < n.materials.size(); ++i) {
    switch (kind) {
      case NodeKind::Supplier: n.supply.push_back(default_supply_terms(T)); break;
      case NodeKind::Customer: n.demand.push_back(default_demand_terms(T)); break;
      default: n.inventory.push_back(default_inventory_terms(T, capacity)); break;
    }
  }
  model.nodes.push_back(std::move(n));
  return static_cast<int>(model.nodes.size()) - 1;
}

int add_arc(NetworkModel& model, std::string id, int origin, int destination,
            std::vector<int> materials, int lead, std::string mode) {
  const int T = model.periods();
  Arc a;
  a.id = std::move(id);
  a.origin = origin;
  a.destination = destination;
  a.mode = std::move(mode);
  std::sort(materials.begin(), materials.end());
  for (int m : materials) {
    a.materials.push_back(default_arc_material(T, m));
    a.materials.back().lead_time.assign(T, lead);
  }
  model.arcs.push_back(std::move(a));
  return static_cast<int>(model.arcs.size()) - 1;
}

namespace {

bool valid_identifier(const std::string& id) {
  if (id.empty()) return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

class Checker {
 public:
  Checker(const NetworkModel& model, ValidationReport& report)
      : model_(model), report_(report), periods_(model.periods()) {}

  void error(const std::string& msg) { report_.errors.push_back(msg); }
  void warning(const std::string& msg) { report_.warnings.push_back(msg); }

  const std::string& material_name(int m) const {
    static const std::string unknown = "?";
    if (m < 0 || m >= static_cast<int>(model_.materials.size())) return unknown;
    return model_.materials[m];
  }

  // Length, finiteness and sign checks shared by every parameter table.
  bool series(const std::string& where, const Series& s, bool allow_inf,
              bool nonnegative = true) {
    if (static_cast<int>(s.size()) != periods_) {
      error(where + ": expected " + std::to_string(periods_) +
            " periods, got " + std::to_string(s.size()));
      return false;
    }
    for (int t = 0; t < periods_; ++t) {
      double v = s[t];
      if (std::isnan(v) || (!allow_inf && std::isinf(v)) ||
          (std::isinf(v) && v < 0)) {
        error(where + " period " + std::to_string(t) + ": value not finite");
        return false;
      }
      if (nonnegative && v < 0) {
        error(where + " period " + std::to_string(t) + ": negative value");
        return false;
      }
    }
    return true;
  }

  bool int_series(const std::string& where, const IntSeries& s) {
    if (static_cast<int>(s.size()) != periods_) {
      error(where + ": expected " + std::to_string(periods_) +
            " periods, got " + std::to_string(s.size()));
      return false;
    }
    for (int t = 0; t < periods_; ++t) {
      if (s[t] < 0) {
        error(where + " period " + std::to_string(t) + ": negative duration");
        return false;
      }
    }
    return true;
  }

  void ordered(const std::string& where, const Series& lo, const Series& hi) {
    if (lo.size() != hi.size()) return;
    for (size_t t = 0; t < lo.size(); ++t) {
      if (lo[t] > hi[t]) {
        error(where + " period " + std::to_string(t) +
              ": lower bound exceeds upper bound");
        return;
      }
    }
  }

  void scalar(const std::string& where, double v) {
    if (!std::isfinite(v) || v < 0) error(where + ": must be finite and nonnegative");
  }

  void run() {
    if (periods_ < 2) {
      error("time grid: period_count must be at least 2");
      return;
    }
    if (!(model_.time.period_hours > 0)) error("time grid: period duration must be positive");

    std::set<std::string> seen;
    if (model_.materials.empty()) error("material catalog is empty");
    for (const auto& m : model_.materials) {
      if (!valid_identifier(m)) error("material '" + m + "': invalid identifier");
      if (!seen.insert(m).second) error("material '" + m + "': duplicate identifier");
    }
    seen.clear();
    for (const auto& n : model_.nodes) {
      if (!valid_identifier(n.id)) error("node '" + n.id + "': invalid identifier");
      if (!seen.insert(n.id).second) error("node '" + n.id + "': duplicate identifier");
    }
    seen.clear();
    for (const auto& a : model_.arcs) {
      if (!valid_identifier(a.id)) error("arc '" + a.id + "': invalid identifier");
      if (!seen.insert(a.id).second) error("arc '" + a.id + "': duplicate identifier");
    }

    for (const auto& node : model_.nodes) check_node(node);
    for (const auto& arc : model_.arcs) check_arc(arc);
    check_reachability();
  }

 private:
  void check_node(const Node& node) {
    const std::string where = "node '" + node.id + "'";
    const int count = static_cast<int>(node.materials.size());
    if (!std::is_sorted(node.materials.begin(), node.materials.end()) ||
        std::adjacent_find(node.materials.begin(), node.materials.end()) != node.materials.end()) {
      error(where + ": material list must be sorted and unique");
      return;
    }
    for (int m : node.materials) {
      if (m < 0 || m >= static_cast<int>(model_.materials.size())) {
        error(where + ": unknown material index " + std::to_string(m));
        return;
      }
    }
    auto expect_size = [&](size_t actual, bool wanted, const char* what) {
      size_t want = wanted ? static_cast<size_t>(count) : 0u;
      if (actual != want) {
        error(where + ": " + what + " terms must have one entry per material");
        return false;
      }
      return true;
    };
    const bool ok =
        expect_size(node.supply.size(), node.kind == NodeKind::Supplier, "supply") &&
        expect_size(node.inventory.size(), node.holds_inventory(), "inventory") &&
        expect_size(node.demand.size(), node.kind == NodeKind::Customer, "demand");
    if (!ok) return;
    if (node.kind != NodeKind::Plant && !node.recipes.empty())
      error(where + ": only plants may define recipes");
    if (node.kind != NodeKind::Supplier && node.sla_required)
      error(where + ": only suppliers may require service level agreements");

    for (int i = 0; i < count; ++i) {
      const std::string mw = where + " material '" + material_name(node.materials[i]) + "'";
      switch (node.kind) {
        case NodeKind::Supplier: check_supply(mw, node.supply[i], node.sla_required); break;
        case NodeKind::Plant:
        case NodeKind::Warehouse: check_inventory(mw, node.inventory[i]); break;
        case NodeKind::Customer: check_demand(mw, node.demand[i]); break;
      }
    }
    if (node.volume) {
      if (!node.holds_inventory()) error(where + ": facility volume only applies to plants and warehouses");
      series(where + " volume", *node.volume, false);
    }
    std::set<std::string> recipe_ids;
    for (const auto& r : node.recipes) {
      if (!valid_identifier(r.id)) error(where + " recipe '" + r.id + "': invalid identifier");
      if (!recipe_ids.insert(r.id).second) error(where + " recipe '" + r.id + "': duplicate identifier");
      check_recipe(node, r);
    }
  }

  void check_supply(const std::string& where, const SupplyTerms& s, bool sla) {
    bool ok = series(where + " buy lower bound", s.lower, false);
    ok = series(where + " buy upper bound", s.upper, true) && ok;
    series(where + " buy cost", s.cost, false);
    series(where + " SLA minimum", s.sla_minimum, false);
    int_series(where + " SLA window", s.sla_window);
    scalar(where + " pre-planned purchase", s.preplanned);
    if (ok) ordered(where + " buy", s.lower, s.upper);
    if (sla && ok) {
      for (int t = 0; t < periods_; ++t) {
        if (s.lower[t] > 0) {
          error(where + ": SLA suppliers cannot carry a positive buy lower bound");
          break;
        }
      }
    }
  }

  void check_inventory(const std::string& where, const InventoryTerms& inv) {
    if (inv.upper.empty()) {
      error(where + ": inventory capacity required");
      return;
    }
    bool ok = series(where + " inventory upper bound", inv.upper, false);
    ok = series(where + " buffer stock", inv.buffer, false) && ok;
    ok = series(where + " buffer fraction", inv.alpha, false) && ok;
    series(where + " holding cost", inv.holding_cost, false);
    series(where + " shortfall penalty", inv.shortfall_penalty, false);
    scalar(where + " deviation penalty", inv.deviation_penalty);
    scalar(where + " initial inventory", inv.initial);
    if (inv.target) scalar(where + " terminal target", *inv.target);
    if (!ok) return;
    for (int t = 0; t < periods_; ++t) {
      if (inv.alpha[t] > 1.0) {
        error(where + " period " + std::to_string(t) + ": buffer fraction exceeds 1");
        break;
      }
      if (inv.alpha[t] * inv.buffer[t] > inv.upper[t]) {
        error(where + " period " + std::to_string(t) + ": enforced buffer exceeds capacity");
        break;
      }
    }
    if (inv.initial > inv.upper[0])
      error(where + ": initial inventory exceeds capacity");
  }

  void check_demand(const std::string& where, const DemandTerms& d) {
    bool ok = series(where + " order quantity", d.quantity, false);
    series(where + " price", d.price, false);
    series(where + " late delivery penalty", d.late_penalty, false);
    series(where + " cancellation penalty", d.cancel_penalty, false);
    bool bounds = series(where + " demand lower bound", d.lower, false);
    bounds = series(where + " demand upper bound", d.upper, true) && bounds;
    if (bounds) ordered(where + " demand", d.lower, d.upper);
    bool unmet = series(where + " unmet lower bound", d.unmet_lower, false);
    unmet = series(where + " unmet upper bound", d.unmet_upper, true) && unmet;
    if (unmet) ordered(where + " unmet demand", d.unmet_lower, d.unmet_upper);
    if (static_cast<int>(d.no_cancel.size()) != periods_)
      error(where + " no-cancel flags: expected " + std::to_string(periods_) + " periods");
    scalar(where + " pre-planned delivery", d.preplanned);
    scalar(where + " initial backlog", d.backlog);
    if (ok && d.quantity[0] > d.preplanned + d.backlog + 1e-9)
      warning(where + ": order at period 0 not covered by the pre-planned delivery");
  }

  void check_recipe(const Node& plant, const Recipe& r) {
    const std::string where = "plant '" + plant.id + "' recipe '" + r.id + "'";
    bool has_neg = false, has_pos = false;
    std::set<int> mats;
    for (const auto& [m, phi] : r.coefficients) {
      if (!std::isfinite(phi) || phi == 0.0) {
        error(where + ": coefficients must be finite and nonzero");
        continue;
      }
      if (!mats.insert(m).second) error(where + ": duplicate coefficient for material '" + material_name(m) + "'");
      if (plant.slot(m) < 0)
        error(where + ": material not at node: '" + material_name(m) + "' missing at '" + plant.id + "'");
      has_neg |= phi < 0;
      has_pos |= phi > 0;
    }
    if (!(has_neg && has_pos) && !r.source_or_sink)
      error(where + ": needs a consumed and a produced material unless flagged as source or sink");
    bool ok = series(where + " production lower bound", r.lower, false);
    ok = series(where + " production upper bound", r.upper, true) && ok;
    if (ok) ordered(where + " production", r.lower, r.upper);
    series(where + " production cost", r.cost, false);
    int_series(where + " duration", r.duration);
    series(where + " in-progress completions", r.in_progress, false);
    scalar(where + " pre-planned production", r.preplanned);
    if (r.preplanned_out) scalar(where + " pre-planned completions", *r.preplanned_out);
  }

  void check_arc(const Arc& arc) {
    const std::string where = "arc '" + arc.id + "'";
    const int n = static_cast<int>(model_.nodes.size());
    if (arc.origin < 0 || arc.origin >= n || arc.destination < 0 || arc.destination >= n) {
      error(where + ": endpoint does not resolve");
      return;
    }
    if (arc.origin == arc.destination) {
      error(where + ": origin equals destination");
      return;
    }
    const Node& from = model_.nodes[arc.origin];
    const Node& to = model_.nodes[arc.destination];
    if (to.kind == NodeKind::Supplier) error(where + ": arcs cannot enter a supplier");
    if (from.kind == NodeKind::Customer) error(where + ": arcs cannot leave a customer");
    if (arc.materials.empty()) warning(where + ": carries no material");
    int previous = -1;
    for (const auto& am : arc.materials) {
      if (am.material <= previous) {
        error(where + ": materials must be sorted and unique");
        return;
      }
      previous = am.material;
      const std::string mw = where + " material '" + material_name(am.material) + "'";
      if (from.slot(am.material) < 0)
        error(mw + ": material not at node '" + from.id + "'");
      if (to.slot(am.material) < 0)
        error(mw + ": material not at node '" + to.id + "'");
      bool lead = int_series(mw + " lead time", am.lead_time);
      bool lo = series(mw + " flow lower bound", am.lower, false);
      bool hi = series(mw + " flow upper bound", am.upper, true);
      if (lo && hi) {
        for (int t = 0; t < periods_; ++t) {
          if (am.lower[t] > am.upper[t]) {
            error("arc '" + arc.id + "' material '" + material_name(am.material) + "' period " +
                  std::to_string(t) + ": flow lower bound exceeds upper bound");
          }
        }
        if (std::all_of(am.upper.begin(), am.upper.end(), [](double v) { return v == 0.0; }))
          warning(mw + ": zero capacity in every period");
      }
      series(mw + " transport cost", am.cost, false);
      series(mw + " fixed transport cost", am.fixed_cost, false);
      series(mw + " in-transit arrivals", am.in_transit, false);
      scalar(mw + " pre-planned dispatch", am.preplanned_in);
      scalar(mw + " pre-planned arrival", am.preplanned_out);
      if (lead && am.lead_time[0] == 0 && am.in_transit.size() == am.lead_time.size() &&
          std::abs(am.preplanned_in + am.in_transit[0] - am.preplanned_out) > 1e-9)
        error(mw + ": zero lead time at period 0 requires pre-planned arrival = dispatch + in-transit");
    }
  }

  void check_reachability() {
    for (size_t c = 0; c < model_.nodes.size(); ++c) {
      const Node& node = model_.nodes[c];
      if (node.kind != NodeKind::Customer) continue;
      bool has_in = std::any_of(model_.arcs.begin(), model_.arcs.end(), [&](const Arc& a) {
        return a.destination == static_cast<int>(c);
      });
      if (!has_in) warning("customer '" + node.id + "': unreachable (no incoming arcs)");
    }
  }

  const NetworkModel& model_;
  ValidationReport& report_;
  int periods_;
};

}  // namespace

ValidationReport validate(const NetworkModel& model) {
  ValidationReport report;
  Checker(model, report).run();
  return report;
}

void require_valid(const NetworkModel& model) {
  ValidationReport report = validate(model);
  if (report.ok()) return;
  std::ostringstream os;
  os << report.errors.size() << " validation error(s):";
  for (const auto& e : report.errors) os << "\n  " << e;
  throw DataError(os.str());
}

Incidence incidence(const NetworkModel& model, int node) {
  if (node < 0 || node >= static_cast<int>(model.nodes.size()))
    throw DataError("unknown node index " + std::to_string(node));
  Incidence inc;
  for (size_t a = 0; a < model.arcs.size(); ++a) {
    if (model.arcs[a].destination == node) inc.arcs_in.push_back(static_cast<int>(a));
    if (model.arcs[a].origin == node) inc.arcs_out.push_back(static_cast<int>(a));
  }
  return inc;
}

Incidence incidence(const NetworkModel& model, const std::string& node_id) {
  int idx = model.node_index(node_id);
  if (idx < 0) throw DataError("unknown node '" + node_id + "'");
  return incidence(model, idx);
}

std::vector<OrderDelta> aggregate_orders(const std::vector<RawOrder>& raw) {
  std::map<OrderKey, double> sums;
  for (const auto& order : raw) {
    if (!(order.quantity >= 0.0))
      throw DataError("order for '" + order.material + "' at '" + order.customer +
                      "': negative quantity");
    sums[OrderKey{order.material, order.customer, order.period}] += order.quantity;
  }
  std::vector<OrderDelta> out;
  out.reserve(sums.size());
  for (const auto& [key, qty] : sums) out.push_back({key, qty});
  return out;
}

void install_orders(NetworkModel& model, const std::vector<OrderDelta>& deltas) {
  const int T = model.periods();
  for (auto& node : model.nodes)
    for (auto& d : node.demand) d.quantity.assign(T, 0.0);
  for (const auto& delta : deltas) {
    int c = model.node_index(delta.key.customer);
    if (c < 0 || model.nodes[c].kind != NodeKind::Customer)
      throw DataError("order references unknown customer '" + delta.key.customer + "'");
    int m = model.material_index(delta.key.material);
    int slot = m < 0 ? -1 : model.nodes[c].slot(m);
    if (slot < 0)
      throw DataError("order material '" + delta.key.material + "' not at customer '" +
                      delta.key.customer + "'");
    if (delta.key.period < 0 || delta.key.period >= T)
      throw DataError("order period " + std::to_string(delta.key.period) + " outside the horizon");
    model.nodes[c].demand[slot].quantity[delta.key.period] += delta.quantity;
  }
}

}  // namespace scdr
