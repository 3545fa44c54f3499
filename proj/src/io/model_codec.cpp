#include <map>
#include <sstream>

#include "json_util.hpp"

namespace scdr::io {

using detail::fail;
using detail::int_table;
using detail::number_json;
using detail::Reader;
using detail::table;
using detail::table_json;

namespace {

void check_version(Reader& r) {
  if (!r.has("schema_version")) fail(r.where(), "missing field 'schema_version'");
  const Json& v = r.get("schema_version");
  if (!v.is_number_integer() || v.get<int>() != kSchemaVersion)
    fail(r.at("schema_version"), "unsupported schema_version " + v.dump() + " (supported: " +
                                     std::to_string(kSchemaVersion) + ")");
}

// Field decoders shared by the defaults block and the per-material entries.

void read_supply(Reader& r, SupplyTerms& s, int T) {
  if (auto* v = r.find("lower")) s.lower = table(*v, T, r.at("lower"));
  if (auto* v = r.find("upper")) s.upper = table(*v, T, r.at("upper"));
  if (auto* v = r.find("cost")) s.cost = table(*v, T, r.at("cost"));
  if (auto* v = r.find("sla_minimum")) s.sla_minimum = table(*v, T, r.at("sla_minimum"));
  if (auto* v = r.find("sla_window")) s.sla_window = int_table(*v, T, r.at("sla_window"));
  s.preplanned = r.number("preplanned", s.preplanned);
}

// Returns whether the capacity was given.
bool read_inventory(Reader& r, InventoryTerms& i, int T) {
  bool capacity = false;
  if (auto* v = r.find("upper")) {
    i.upper = table(*v, T, r.at("upper"));
    capacity = true;
  }
  if (auto* v = r.find("buffer")) i.buffer = table(*v, T, r.at("buffer"));
  if (auto* v = r.find("alpha")) i.alpha = table(*v, T, r.at("alpha"));
  if (auto* v = r.find("holding_cost")) i.holding_cost = table(*v, T, r.at("holding_cost"));
  if (auto* v = r.find("shortfall_penalty")) i.shortfall_penalty = table(*v, T, r.at("shortfall_penalty"));
  i.deviation_penalty = r.number("deviation_penalty", i.deviation_penalty);
  i.initial = r.number("initial", i.initial);
  if (r.has("target")) i.target = r.number("target");
  return capacity;
}

void read_demand(Reader& r, DemandTerms& d, int T) {
  if (auto* v = r.find("quantity")) d.quantity = table(*v, T, r.at("quantity"));
  if (auto* v = r.find("price")) d.price = table(*v, T, r.at("price"));
  if (auto* v = r.find("late_penalty")) d.late_penalty = table(*v, T, r.at("late_penalty"));
  if (auto* v = r.find("cancel_penalty")) d.cancel_penalty = table(*v, T, r.at("cancel_penalty"));
  if (auto* v = r.find("lower")) d.lower = table(*v, T, r.at("lower"));
  if (auto* v = r.find("upper")) d.upper = table(*v, T, r.at("upper"));
  if (auto* v = r.find("unmet_lower")) d.unmet_lower = table(*v, T, r.at("unmet_lower"));
  if (auto* v = r.find("unmet_upper")) d.unmet_upper = table(*v, T, r.at("unmet_upper"));
  if (auto* v = r.find("no_cancel")) {
    IntSeries flags = int_table(*v, T, r.at("no_cancel"));
    d.no_cancel.assign(flags.begin(), flags.end());
  }
  d.no_late = r.boolean("no_late", d.no_late);
  d.preplanned = r.number("preplanned", d.preplanned);
  d.backlog = r.number("backlog", d.backlog);
}

void read_arc_material(Reader& r, ArcMaterial& a, int T) {
  if (auto* v = r.find("lead_time")) a.lead_time = int_table(*v, T, r.at("lead_time"));
  if (auto* v = r.find("lower")) a.lower = table(*v, T, r.at("lower"));
  if (auto* v = r.find("upper")) a.upper = table(*v, T, r.at("upper"));
  if (auto* v = r.find("cost")) a.cost = table(*v, T, r.at("cost"));
  if (auto* v = r.find("fixed_cost")) a.fixed_cost = table(*v, T, r.at("fixed_cost"));
  a.preplanned_in = r.number("preplanned_in", a.preplanned_in);
  a.preplanned_out = r.number("preplanned_out", a.preplanned_out);
  if (auto* v = r.find("in_transit")) a.in_transit = table(*v, T, r.at("in_transit"));
}

void read_recipe_terms(Reader& r, Recipe& p, int T) {
  if (auto* v = r.find("lower")) p.lower = table(*v, T, r.at("lower"));
  if (auto* v = r.find("upper")) p.upper = table(*v, T, r.at("upper"));
  if (auto* v = r.find("cost")) p.cost = table(*v, T, r.at("cost"));
  if (auto* v = r.find("duration")) p.duration = int_table(*v, T, r.at("duration"));
  p.preplanned = r.number("preplanned", p.preplanned);
  if (r.has("preplanned_out")) p.preplanned_out = r.number("preplanned_out");
  if (auto* v = r.find("in_progress")) p.in_progress = table(*v, T, r.at("in_progress"));
  p.source_or_sink = r.boolean("source_or_sink", p.source_or_sink);
}

struct Defaults {
  SupplyTerms supply;
  InventoryTerms inventory;
  bool inventory_capacity = false;
  DemandTerms demand;
  ArcMaterial arc;
  Recipe recipe;
};

Defaults read_defaults(const Json* doc, int T, const std::string& where) {
  Defaults d;
  d.supply = default_supply_terms(T);
  d.inventory = default_inventory_terms(T, 0.0);
  d.demand = default_demand_terms(T);
  d.arc = default_arc_material(T, -1);
  d.recipe = default_recipe(T, "");
  if (!doc) return d;
  Reader r(*doc, where);
  if (auto* v = r.find("supply")) {
    Reader s(*v, r.at("supply"));
    read_supply(s, d.supply, T);
    s.finish();
  }
  if (auto* v = r.find("inventory")) {
    Reader s(*v, r.at("inventory"));
    d.inventory_capacity = read_inventory(s, d.inventory, T);
    s.finish();
  }
  if (auto* v = r.find("demand")) {
    Reader s(*v, r.at("demand"));
    read_demand(s, d.demand, T);
    s.finish();
  }
  if (auto* v = r.find("arc")) {
    Reader s(*v, r.at("arc"));
    read_arc_material(s, d.arc, T);
    s.finish();
  }
  if (auto* v = r.find("recipe")) {
    Reader s(*v, r.at("recipe"));
    read_recipe_terms(s, d.recipe, T);
    s.finish();
  }
  r.finish();
  return d;
}

int material_of(const NetworkModel& m, const std::string& id, const std::string& where) {
  int k = m.material_index(id);
  if (k < 0) fail(where, "unknown material '" + id + "'");
  return k;
}

int node_of(const NetworkModel& m, const std::string& id, const std::string& where) {
  int k = m.node_index(id);
  if (k < 0) fail(where, "unknown node '" + id + "'");
  return k;
}

void read_node(NetworkModel& m, const Json& doc, const Defaults& defaults, const std::string& where) {
  const int T = m.periods();
  Reader r(doc, where);
  Node n;
  n.id = r.string("id");
  if (m.node_index(n.id) >= 0) fail(r.at("id"), "duplicate node id '" + n.id + "'");
  try {
    n.kind = node_kind_from_string(r.string("kind"));
  } catch (const DataError& e) {
    fail(r.at("kind"), e.what());
  }
  n.sla_required = r.boolean("sla_required", false);

  // Material entries are decoded in material-index order so the parallel
  // term vectors line up with the sorted material list.
  std::map<int, std::pair<std::string, const Json*>> entries;
  if (auto* mats = r.find("materials")) {
    if (!mats->is_object()) fail(r.at("materials"), "expected an object keyed by material id");
    for (auto it = mats->begin(); it != mats->end(); ++it)
      entries[material_of(m, it.key(), r.at("materials"))] = {it.key(), &it.value()};
  }
  for (const auto& [k, entry] : entries) {
    const std::string at = r.at("materials") + "." + entry.first;
    Reader e(*entry.second, at);
    n.materials.push_back(k);
    switch (n.kind) {
      case NodeKind::Supplier: {
        SupplyTerms s = defaults.supply;
        read_supply(e, s, T);
        n.supply.push_back(std::move(s));
        break;
      }
      case NodeKind::Plant:
      case NodeKind::Warehouse: {
        InventoryTerms i = defaults.inventory;
        bool capacity = read_inventory(e, i, T);
        if (!capacity && !defaults.inventory_capacity) fail(at, "inventory capacity required (field 'upper')");
        n.inventory.push_back(std::move(i));
        break;
      }
      case NodeKind::Customer: {
        DemandTerms d = defaults.demand;
        read_demand(e, d, T);
        n.demand.push_back(std::move(d));
        break;
      }
    }
    e.finish();
  }

  if (auto* recipes = r.find("recipes")) {
    if (!recipes->is_array()) fail(r.at("recipes"), "expected an array");
    for (size_t k = 0; k < recipes->size(); ++k) {
      const std::string at = r.at("recipes") + "[" + std::to_string(k) + "]";
      Reader e((*recipes)[k], at);
      Recipe p = defaults.recipe;
      p.id = e.string("id");
      const Json& coeffs = e.get("coefficients");
      if (!coeffs.is_object()) fail(e.at("coefficients"), "expected an object keyed by material id");
      for (auto it = coeffs.begin(); it != coeffs.end(); ++it)
        p.coefficients.emplace_back(material_of(m, it.key(), e.at("coefficients")),
                                    detail::as_number(it.value(), e.at("coefficients") + "." + it.key()));
      read_recipe_terms(e, p, T);
      e.finish();
      n.recipes.push_back(std::move(p));
    }
  }
  if (auto* v = r.find("volume"); v && !v->is_null()) n.volume = table(*v, T, r.at("volume"));
  r.finish();
  m.nodes.push_back(std::move(n));
}

void read_arc(NetworkModel& m, const Json& doc, const Defaults& defaults, const std::string& where) {
  const int T = m.periods();
  Reader r(doc, where);
  Arc a;
  a.id = r.string("id");
  if (m.arc_index(a.id) >= 0) fail(r.at("id"), "duplicate arc id '" + a.id + "'");
  a.origin = node_of(m, r.string("origin"), r.at("origin"));
  a.destination = node_of(m, r.string("destination"), r.at("destination"));
  a.mode = r.string("mode", "road");
  std::map<int, std::pair<std::string, const Json*>> entries;
  const Json& mats = r.get("materials");
  if (!mats.is_object()) fail(r.at("materials"), "expected an object keyed by material id");
  for (auto it = mats.begin(); it != mats.end(); ++it)
    entries[material_of(m, it.key(), r.at("materials"))] = {it.key(), &it.value()};
  for (const auto& [k, entry] : entries) {
    Reader e(*entry.second, r.at("materials") + "." + entry.first);
    ArcMaterial am = defaults.arc;
    am.material = k;
    read_arc_material(e, am, T);
    e.finish();
    a.materials.push_back(std::move(am));
  }
  r.finish();
  m.arcs.push_back(std::move(a));
}

Json supply_json(const SupplyTerms& s) {
  Json j;
  j["lower"] = table_json(s.lower);
  j["upper"] = table_json(s.upper);
  j["cost"] = table_json(s.cost);
  j["sla_minimum"] = table_json(s.sla_minimum);
  j["sla_window"] = table_json(s.sla_window);
  j["preplanned"] = number_json(s.preplanned);
  return j;
}

Json inventory_json(const InventoryTerms& i) {
  Json j;
  j["upper"] = table_json(i.upper);
  j["buffer"] = table_json(i.buffer);
  j["alpha"] = table_json(i.alpha);
  j["holding_cost"] = table_json(i.holding_cost);
  j["shortfall_penalty"] = table_json(i.shortfall_penalty);
  j["deviation_penalty"] = number_json(i.deviation_penalty);
  j["initial"] = number_json(i.initial);
  if (i.target) j["target"] = number_json(*i.target);
  return j;
}

Json demand_json(const DemandTerms& d) {
  Json j;
  j["quantity"] = table_json(d.quantity);
  j["price"] = table_json(d.price);
  j["late_penalty"] = table_json(d.late_penalty);
  j["cancel_penalty"] = table_json(d.cancel_penalty);
  j["lower"] = table_json(d.lower);
  j["upper"] = table_json(d.upper);
  j["unmet_lower"] = table_json(d.unmet_lower);
  j["unmet_upper"] = table_json(d.unmet_upper);
  j["no_cancel"] = table_json(IntSeries(d.no_cancel.begin(), d.no_cancel.end()));
  j["no_late"] = d.no_late;
  j["preplanned"] = number_json(d.preplanned);
  j["backlog"] = number_json(d.backlog);
  return j;
}

Json arc_material_json(const ArcMaterial& a) {
  Json j;
  j["lead_time"] = table_json(a.lead_time);
  j["lower"] = table_json(a.lower);
  j["upper"] = table_json(a.upper);
  j["cost"] = table_json(a.cost);
  j["fixed_cost"] = table_json(a.fixed_cost);
  j["preplanned_in"] = number_json(a.preplanned_in);
  j["preplanned_out"] = number_json(a.preplanned_out);
  j["in_transit"] = table_json(a.in_transit);
  return j;
}

Json recipe_json(const NetworkModel& m, const Recipe& p) {
  Json j;
  j["id"] = p.id;
  Json c = Json::object();
  for (const auto& [k, phi] : p.coefficients) c[m.materials[k]] = number_json(phi);
  j["coefficients"] = c;
  j["lower"] = table_json(p.lower);
  j["upper"] = table_json(p.upper);
  j["cost"] = table_json(p.cost);
  j["duration"] = table_json(p.duration);
  j["preplanned"] = number_json(p.preplanned);
  if (p.preplanned_out) j["preplanned_out"] = number_json(*p.preplanned_out);
  j["in_progress"] = table_json(p.in_progress);
  if (p.source_or_sink) j["source_or_sink"] = true;
  return j;
}

}  // namespace

NetworkModel model_from_json(const Json& doc, const std::string& origin, ValidationReport* report) {
  Reader r(doc, origin);
  check_version(r);
  NetworkModel m;
  {
    Reader t(r.get("time"), r.at("time"));
    m.time.period_count = t.integer("periods");
    if (m.time.period_count < 2) fail(t.at("periods"), "a horizon needs at least 2 periods");
    m.time.period_hours = t.number("period_hours", m.time.period_hours);
    t.finish();
  }
  const Json& mats = r.get("materials");
  if (!mats.is_array()) fail(r.at("materials"), "expected an array of material ids");
  for (size_t k = 0; k < mats.size(); ++k) {
    if (!mats[k].is_string()) fail(r.at("materials"), "expected an array of material ids");
    std::string id = mats[k].get<std::string>();
    if (m.material_index(id) >= 0) fail(r.at("materials"), "duplicate material '" + id + "'");
    m.materials.push_back(std::move(id));
  }
  Defaults defaults = read_defaults(r.find("defaults"), m.periods(), r.at("defaults"));

  const Json& nodes = r.get("nodes");
  if (!nodes.is_array()) fail(r.at("nodes"), "expected an array");
  for (size_t k = 0; k < nodes.size(); ++k)
    read_node(m, nodes[k], defaults, r.at("nodes") + "[" + std::to_string(k) + "]");

  if (auto* arcs = r.find("arcs")) {
    if (!arcs->is_array()) fail(r.at("arcs"), "expected an array");
    for (size_t k = 0; k < arcs->size(); ++k)
      read_arc(m, (*arcs)[k], defaults, r.at("arcs") + "[" + std::to_string(k) + "]");
  }

  if (auto* orders = r.find("orders")) {
    if (!orders->is_array()) fail(r.at("orders"), "expected an array");
    std::vector<RawOrder> raw;
    for (size_t k = 0; k < orders->size(); ++k) {
      Reader o((*orders)[k], r.at("orders") + "[" + std::to_string(k) + "]");
      RawOrder ro{o.string("material"), o.string("customer"), o.integer("period"), o.number("quantity")};
      o.finish();
      int c = node_of(m, ro.customer, o.at("customer"));
      int mat = material_of(m, ro.material, o.at("material"));
      if (m.nodes[c].kind != NodeKind::Customer || m.nodes[c].slot(mat) < 0)
        fail(o.where(), "customer '" + ro.customer + "' does not take material '" + ro.material + "'");
      if (ro.period < 0 || ro.period >= m.periods()) fail(o.at("period"), "period outside the horizon");
      raw.push_back(std::move(ro));
    }
    for (const Node& n : m.nodes)
      for (const DemandTerms& d : n.demand)
        if (std::any_of(d.quantity.begin(), d.quantity.end(), [](double q) { return q != 0.0; }))
          fail(r.at("orders"), "orders and customer quantity tables are mutually exclusive (customer '" + n.id +
                                   "')");
    install_orders(m, aggregate_orders(raw));
  }
  r.finish();

  ValidationReport v = validate(m);
  if (report) *report = v;
  if (!v.ok()) {
    std::ostringstream os;
    os << origin << ": " << v.errors.size() << " validation error(s):";
    for (const auto& e : v.errors) os << "\n  " << e;
    throw ValidationFailed(os.str(), v);
  }
  return m;
}

Json model_to_json(const NetworkModel& m) {
  Json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["time"] = {{"periods", m.time.period_count}, {"period_hours", m.time.period_hours}};
  doc["materials"] = m.materials;
  Json nodes = Json::array();
  for (const Node& n : m.nodes) {
    Json j;
    j["id"] = n.id;
    j["kind"] = to_string(n.kind);
    if (n.sla_required) j["sla_required"] = true;
    Json mats = Json::object();
    for (size_t i = 0; i < n.materials.size(); ++i) {
      const std::string& id = m.materials[n.materials[i]];
      if (!n.supply.empty()) mats[id] = supply_json(n.supply[i]);
      if (!n.inventory.empty()) mats[id] = inventory_json(n.inventory[i]);
      if (!n.demand.empty()) mats[id] = demand_json(n.demand[i]);
    }
    j["materials"] = mats;
    if (!n.recipes.empty()) {
      Json rs = Json::array();
      for (const Recipe& p : n.recipes) rs.push_back(recipe_json(m, p));
      j["recipes"] = rs;
    }
    if (n.volume) j["volume"] = table_json(*n.volume);
    nodes.push_back(std::move(j));
  }
  doc["nodes"] = nodes;
  Json arcs = Json::array();
  for (const Arc& a : m.arcs) {
    Json j;
    j["id"] = a.id;
    j["origin"] = m.nodes[a.origin].id;
    j["destination"] = m.nodes[a.destination].id;
    j["mode"] = a.mode;
    Json mats = Json::object();
    for (const ArcMaterial& am : a.materials) mats[m.materials[am.material]] = arc_material_json(am);
    j["materials"] = mats;
    arcs.push_back(std::move(j));
  }
  doc["arcs"] = arcs;
  return doc;
}

NetworkModel load_model(const std::string& path, ValidationReport* report) {
  return model_from_json(read_json_file(path), path, report);
}

void save_model(const NetworkModel& model, const std::string& path) {
  write_file_atomic(path, model_to_json(model).dump(2) + "\n");
}

}  // namespace scdr::io
