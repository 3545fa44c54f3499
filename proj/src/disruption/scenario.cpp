#include "scdr/disruption/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace scdr::disruption {

const char* to_string(Shape shape) {
  switch (shape) {
    case Shape::Immediate: return "immediate";
    case Shape::Scheduled: return "scheduled";
    case Shape::Permanent: return "permanent";
    case Shape::Custom: return "custom";
  }
  return "?";
}

Shape shape_from_string(const std::string& text) {
  if (text == "immediate") return Shape::Immediate;
  if (text == "scheduled") return Shape::Scheduled;
  if (text == "permanent") return Shape::Permanent;
  if (text == "custom") return Shape::Custom;
  throw DataError("unknown event shape '" + text + "' (expected immediate, scheduled, permanent or custom)");
}

namespace {

// One time-indexed parameter table of a model. Exactly one of `real` and
// `integer` is set.
struct TableRef {
  std::string kind;
  std::string entity;
  std::string member;  // material or recipe id; empty for volume
  Series* real = nullptr;
  IntSeries* integer = nullptr;

  std::string path() const { return member.empty() ? kind + "/" + entity : kind + "/" + entity + "/" + member; }
};

const std::vector<std::string>& kinds() {
  static const std::vector<std::string> k = {
      "production_lower", "production_upper", "production_cost", "production_duration",
      "flow_lower",       "flow_upper",       "flow_cost",       "flow_fixed_cost",
      "lead_time",        "in_transit",       "buy_lower",       "buy_upper",
      "buy_cost",         "sla_minimum",      "sla_window",      "inventory_upper",
      "buffer",           "buffer_fraction",  "holding_cost",    "shortfall_penalty",
      "volume",           "order_quantity",   "price",           "late_penalty",
      "cancel_penalty",   "demand_lower",     "demand_upper",    "unmet_upper"};
  return k;
}

bool is_upper_bound(const std::string& kind) {
  return kind == "volume" || kind.ends_with("_upper");
}

std::vector<TableRef> tables(NetworkModel& m) {
  std::vector<TableRef> out;
  auto real = [&](std::string kind, const std::string& e, const std::string& mem, Series& s) {
    out.push_back({std::move(kind), e, mem, &s, nullptr});
  };
  auto integer = [&](std::string kind, const std::string& e, const std::string& mem, IntSeries& s) {
    out.push_back({std::move(kind), e, mem, nullptr, &s});
  };
  for (Node& n : m.nodes) {
    for (Recipe& r : n.recipes) {
      real("production_lower", n.id, r.id, r.lower);
      real("production_upper", n.id, r.id, r.upper);
      real("production_cost", n.id, r.id, r.cost);
      integer("production_duration", n.id, r.id, r.duration);
    }
    for (size_t i = 0; i < n.materials.size(); ++i) {
      const std::string& mat = m.materials[n.materials[i]];
      if (i < n.supply.size()) {
        SupplyTerms& s = n.supply[i];
        real("buy_lower", n.id, mat, s.lower);
        real("buy_upper", n.id, mat, s.upper);
        real("buy_cost", n.id, mat, s.cost);
        real("sla_minimum", n.id, mat, s.sla_minimum);
        integer("sla_window", n.id, mat, s.sla_window);
      }
      if (i < n.inventory.size()) {
        InventoryTerms& v = n.inventory[i];
        real("inventory_upper", n.id, mat, v.upper);
        real("buffer", n.id, mat, v.buffer);
        real("buffer_fraction", n.id, mat, v.alpha);
        real("holding_cost", n.id, mat, v.holding_cost);
        real("shortfall_penalty", n.id, mat, v.shortfall_penalty);
      }
      if (i < n.demand.size()) {
        DemandTerms& d = n.demand[i];
        real("order_quantity", n.id, mat, d.quantity);
        real("price", n.id, mat, d.price);
        real("late_penalty", n.id, mat, d.late_penalty);
        real("cancel_penalty", n.id, mat, d.cancel_penalty);
        real("demand_lower", n.id, mat, d.lower);
        real("demand_upper", n.id, mat, d.upper);
        real("unmet_upper", n.id, mat, d.unmet_upper);
      }
    }
    if (n.volume) real("volume", n.id, "", *n.volume);
  }
  for (Arc& a : m.arcs) {
    for (ArcMaterial& am : a.materials) {
      const std::string& mat = m.materials[am.material];
      real("flow_lower", a.id, mat, am.lower);
      real("flow_upper", a.id, mat, am.upper);
      real("flow_cost", a.id, mat, am.cost);
      real("flow_fixed_cost", a.id, mat, am.fixed_cost);
      integer("lead_time", a.id, mat, am.lead_time);
      real("in_transit", a.id, mat, am.in_transit);
    }
  }
  return out;
}

std::vector<std::string> split(const std::string& path) {
  std::vector<std::string> parts;
  std::stringstream ss(path);
  std::string item;
  while (std::getline(ss, item, '/')) parts.push_back(item);
  return parts;
}

bool segment_matches(const std::string& pattern, const std::string& value) {
  return pattern == "*" || pattern == value;
}

// Share of the disruption reached in each period: 0 outside the window, 1
// inside it, linear steps across the ramps.
std::vector<double> event_weights(int periods, const DisruptionEvent& e) {
  if (e.start < 0 || e.start > e.end || e.end > periods)
    throw DataError("event on '" + e.target + "': window [" + std::to_string(e.start) + "," +
                    std::to_string(e.end) + ") outside the horizon of " + std::to_string(periods));
  if (e.shape == Shape::Permanent && e.end != periods)
    throw DataError("event on '" + e.target + "': a permanent event must end at the horizon");
  if (e.shape == Shape::Scheduled && e.start == 0)
    throw DataError("event on '" + e.target + "': a scheduled event must start after period 0");
  if (e.ramp_in < 0 || e.ramp_out < 0 || e.ramp_in + e.ramp_out > e.end - e.start)
    throw DataError("event on '" + e.target + "': ramp lengths exceed the event window");
  std::vector<double> w(periods, 0.0);
  for (int t = e.start; t < e.end; ++t) w[t] = 1.0;
  for (int k = 0; k < e.ramp_in; ++k) w[e.start + k] = double(k + 1) / (e.ramp_in + 1);
  for (int k = 0; k < e.ramp_out; ++k) w[e.end - 1 - k] = double(k + 1) / (e.ramp_out + 1);
  return w;
}

double scaled(double nominal, double factor) {
  if (factor == 1.0) return nominal;
  if (std::isinf(nominal)) return factor == 0.0 ? 0.0 : nominal;
  return nominal * factor;
}

void check_event(int periods, const DisruptionEvent& e, const std::string& kind) {
  if (!(e.fraction >= 0.0 && e.fraction <= 1.0))
    throw DataError("event on '" + e.target + "': fraction must lie in [0, 1]");
  if (e.shape == Shape::Custom) {
    if (static_cast<int>(e.custom.size()) != periods)
      throw DataError("event on '" + e.target + "': custom profile needs one factor per period");
    for (double f : e.custom) {
      if (!(f >= 0.0) || !std::isfinite(f))
        throw DataError("event on '" + e.target + "': custom factors must be finite and nonnegative");
      if (f > 1.0 && is_upper_bound(kind) && !e.relaxation)
        throw DataError("event on '" + e.target + "': profile exceeds the nominal bound without the relaxation flag");
    }
  }
  if (e.value && (!(*e.value >= 0.0) || std::isnan(*e.value)))
    throw DataError("event on '" + e.target + "': value must be nonnegative");
}

void apply_to(TableRef& table, const DisruptionEvent& e, int periods) {
  if (table.integer) {
    if (!e.value) throw DataError("event on '" + e.target + "': integer tables need an absolute value");
    if (e.shape == Shape::Custom) throw DataError("event on '" + e.target + "': custom shape needs a real table");
    auto w = event_weights(periods, e);
    for (int t = 0; t < periods; ++t) {
      if (w[t] == 0.0) continue;
      double nominal = (*table.integer)[t];
      (*table.integer)[t] = static_cast<int>(std::lround(nominal + (*e.value - nominal) * w[t]));
    }
    return;
  }
  Series& s = *table.real;
  if (e.value) {
    auto w = event_weights(periods, e);
    for (int t = 0; t < periods; ++t) {
      if (w[t] == 0.0) continue;
      const double nominal = s[t];
      double v = std::isinf(nominal) ? *e.value : nominal + (*e.value - nominal) * w[t];
      if (is_upper_bound(table.kind) && !e.relaxation && v > nominal)
        throw DataError("event on '" + e.target + "': value exceeds the nominal bound without the relaxation flag");
      s[t] = v;
    }
    return;
  }
  auto f = event_factors(periods, e);
  for (int t = 0; t < periods; ++t) s[t] = scaled(s[t], f[t]);
}

}  // namespace

std::vector<std::string> target_kinds() { return kinds(); }

std::vector<double> event_factors(int periods, const DisruptionEvent& event) {
  if (event.shape == Shape::Custom) {
    if (static_cast<int>(event.custom.size()) != periods)
      throw DataError("event on '" + event.target + "': custom profile needs one factor per period");
    return event.custom;
  }
  auto w = event_weights(periods, event);
  std::vector<double> f(periods);
  for (int t = 0; t < periods; ++t) f[t] = 1.0 - (1.0 - event.fraction) * w[t];
  return f;
}

BoundProfile make_profile(const Series& nominal, const DisruptionEvent& event) {
  const int T = static_cast<int>(nominal.size());
  const std::string kind = split(event.target).empty() ? "" : split(event.target)[0];
  check_event(T, event, kind);
  Series copy = nominal;
  TableRef ref{kind, "", "", &copy, nullptr};
  apply_to(ref, event, T);
  return BoundProfile{std::move(copy)};
}

NetworkModel apply_scenario(const NetworkModel& model, const Scenario& scenario,
                            const formulation::ExtensionConfig& config) {
  NetworkModel out = model;
  const int T = out.periods();
  for (const DisruptionEvent& e : scenario.events) {
    auto parts = split(e.target);
    if (parts.empty() || std::find(kinds().begin(), kinds().end(), parts[0]) == kinds().end())
      throw DataError("unknown event target '" + e.target + "'");
    const bool volume = parts[0] == "volume";
    if (parts.size() != (volume ? 2u : 3u))
      throw DataError("event target '" + e.target + "': expected " + (volume ? "volume/<node>" : parts[0] + "/<entity>/<member>"));
    check_event(T, e, parts[0]);
    int hits = 0;
    for (TableRef& table : tables(out)) {
      if (table.kind != parts[0] || !segment_matches(parts[1], table.entity)) continue;
      if (!volume && !segment_matches(parts[2], table.member)) continue;
      apply_to(table, e, T);
      ++hits;
    }
    if (hits == 0) throw DataError("event target '" + e.target + "' matches no parameter table");
  }

  for (const InjectedOrder& o : scenario.orders) {
    const std::string where = "injected order for '" + o.material + "' at '" + o.customer + "'";
    int c = out.node_index(o.customer);
    if (c < 0 || out.nodes[c].kind != NodeKind::Customer) throw DataError(where + ": unknown customer");
    int m = out.material_index(o.material);
    int slot = m < 0 ? -1 : out.nodes[c].slot(m);
    if (slot < 0) throw DataError(where + ": material not at customer");
    if (o.period < 1 || o.period >= T) throw DataError(where + ": period must lie in 1.." + std::to_string(T - 1));
    if (!(o.quantity >= 0.0) || !std::isfinite(o.quantity)) throw DataError(where + ": quantity must be nonnegative");
    if (o.late_penalty.size() != 1 && static_cast<int>(o.late_penalty.size()) != T)
      throw DataError(where + ": late-delivery penalty profile required (one value or one per period)");
    if ((o.no_late || o.no_cancel) && config.terminal != formulation::TerminalMode::Fid)
      throw DataError(where + ": no-late and no-cancel flags require the fid terminal mode");
    DemandTerms& d = out.nodes[c].demand[slot];
    d.quantity[o.period] += o.quantity;
    for (int t = o.period; t < T; ++t)
      d.late_penalty[t] = o.late_penalty.size() == 1 ? o.late_penalty[0] : o.late_penalty[t];
    d.cancel_penalty[o.period] = o.cancel_penalty;
    if (o.price) d.price[o.period] = *o.price;
    if (o.no_late) d.no_late = true;
    if (o.no_cancel) d.no_cancel[o.period] = 1;
  }
  return out;
}

std::vector<Change> diff_models(const NetworkModel& before, const NetworkModel& after) {
  auto same_topology = [&]() {
    if (before.materials != after.materials || before.periods() != after.periods()) return false;
    if (before.nodes.size() != after.nodes.size() || before.arcs.size() != after.arcs.size()) return false;
    for (size_t i = 0; i < before.nodes.size(); ++i) {
      const Node &a = before.nodes[i], &b = after.nodes[i];
      if (a.id != b.id || a.kind != b.kind || a.materials != b.materials || a.recipes.size() != b.recipes.size() ||
          a.volume.has_value() != b.volume.has_value())
        return false;
      for (size_t r = 0; r < a.recipes.size(); ++r)
        if (a.recipes[r].id != b.recipes[r].id) return false;
    }
    for (size_t i = 0; i < before.arcs.size(); ++i) {
      const Arc &a = before.arcs[i], &b = after.arcs[i];
      if (a.id != b.id || a.origin != b.origin || a.destination != b.destination ||
          a.materials.size() != b.materials.size())
        return false;
      for (size_t k = 0; k < a.materials.size(); ++k)
        if (a.materials[k].material != b.materials[k].material) return false;
    }
    return true;
  };
  if (!same_topology()) throw DataError("cannot diff models with different topologies");

  NetworkModel x = before, y = after;
  auto tx = tables(x), ty = tables(y);
  std::vector<Change> out;
  const int T = x.periods();
  for (size_t i = 0; i < tx.size(); ++i) {
    auto at = [&](const TableRef& r, int t) { return r.real ? (*r.real)[t] : double((*r.integer)[t]); };
    const std::string path = tx[i].path();
    for (int t = 0; t < T;) {
      double a = at(tx[i], t), b = at(ty[i], t);
      if (a == b) {
        ++t;
        continue;
      }
      int last = t;
      while (last + 1 < T && at(tx[i], last + 1) == a && at(ty[i], last + 1) == b) ++last;
      out.push_back({path, t, last, a, b});
      t = last + 1;
    }
  }
  return out;
}

}  // namespace scdr::disruption
