#include "json_util.hpp"

namespace scdr::io {

using detail::fail;
using detail::number_json;
using detail::Reader;

namespace {

disruption::DisruptionEvent read_event(const Json& doc, const std::string& where) {
  Reader r(doc, where);
  disruption::DisruptionEvent e;
  e.target = r.string("target");
  try {
    e.shape = disruption::shape_from_string(r.string("shape", "immediate"));
  } catch (const DataError& err) {
    fail(r.at("shape"), err.what());
  }
  e.start = r.integer("start", 0);
  e.end = r.integer("end");
  e.fraction = r.number("fraction", 1.0);
  e.ramp_in = r.integer("ramp_in", 0);
  e.ramp_out = r.integer("ramp_out", 0);
  if (auto* v = r.find("custom")) {
    if (!v->is_array()) fail(r.at("custom"), "expected an array of factors");
    for (size_t t = 0; t < v->size(); ++t)
      e.custom.push_back(detail::as_number((*v)[t], r.at("custom") + "[" + std::to_string(t) + "]"));
  }
  if (auto* v = r.find("value"); v && !v->is_null()) e.value = detail::as_number(*v, r.at("value"));
  e.relaxation = r.boolean("relaxation", false);
  r.finish();
  return e;
}

disruption::InjectedOrder read_order(const Json& doc, const std::string& where) {
  Reader r(doc, where);
  disruption::InjectedOrder o;
  o.material = r.string("material");
  o.customer = r.string("customer");
  o.period = r.integer("period");
  o.quantity = r.number("quantity");
  // Penalty profiles are required: there is no default for an unplanned order.
  const Json& late = r.get("late_penalty");
  if (late.is_array()) {
    for (size_t t = 0; t < late.size(); ++t)
      o.late_penalty.push_back(detail::as_number(late[t], r.at("late_penalty") + "[" + std::to_string(t) + "]"));
  } else {
    o.late_penalty.push_back(detail::as_number(late, r.at("late_penalty")));
  }
  o.cancel_penalty = r.number("cancel_penalty");
  if (auto* v = r.find("price"); v && !v->is_null()) o.price = detail::as_number(*v, r.at("price"));
  o.no_late = r.boolean("no_late", false);
  o.no_cancel = r.boolean("no_cancel", false);
  r.finish();
  return o;
}

formulation::ExtensionConfig read_config(const Json& doc, const std::string& where) {
  Reader r(doc, where);
  formulation::ExtensionConfig c;
  c.patp = r.boolean("patp", c.patp);
  c.ftc = r.boolean("ftc", c.ftc);
  try {
    c.sla = formulation::sla_mode_from_string(r.string("sla", to_string(c.sla)));
    c.terminal = formulation::terminal_mode_from_string(r.string("terminal", to_string(c.terminal)));
    c.inventory_floor = formulation::floor_mode_from_string(r.string("inventory_floor", to_string(c.inventory_floor)));
  } catch (const DataError& e) {
    fail(where, e.what());
  }
  c.shared_volume = r.boolean("shared_volume", c.shared_volume);
  c.enforce_u_upper = r.boolean("enforce_u_upper", c.enforce_u_upper);
  r.finish();
  return c;
}

milp::SolveOptions read_solver(const Json& doc, const std::string& where) {
  Reader r(doc, where);
  milp::SolveOptions o;
  o.feasibility_tolerance = r.number("feasibility_tolerance", o.feasibility_tolerance);
  o.integrality_tolerance = r.number("integrality_tolerance", o.integrality_tolerance);
  o.relative_gap = r.number("relative_gap", o.relative_gap);
  o.absolute_gap = r.number("absolute_gap", o.absolute_gap);
  o.node_limit = static_cast<long>(r.number("node_limit", static_cast<double>(o.node_limit)));
  o.time_limit_seconds = r.number("time_limit_seconds", o.time_limit_seconds);
  o.iteration_limit = static_cast<long>(r.number("iteration_limit", static_cast<double>(o.iteration_limit)));
  r.finish();
  if (o.relative_gap < 0 || o.absolute_gap < 0) fail(where, "gaps must be nonnegative");
  if (!(o.time_limit_seconds > 0)) fail(r.at("time_limit_seconds"), "must be positive");
  return o;
}

Json event_json(const disruption::DisruptionEvent& e) {
  Json j;
  j["target"] = e.target;
  j["shape"] = to_string(e.shape);
  j["start"] = e.start;
  j["end"] = e.end;
  j["fraction"] = number_json(e.fraction);
  j["ramp_in"] = e.ramp_in;
  j["ramp_out"] = e.ramp_out;
  if (!e.custom.empty()) {
    Json c = Json::array();
    for (double f : e.custom) c.push_back(number_json(f));
    j["custom"] = c;
  }
  if (e.value) j["value"] = number_json(*e.value);
  if (e.relaxation) j["relaxation"] = true;
  return j;
}

Json order_json(const disruption::InjectedOrder& o) {
  Json j;
  j["material"] = o.material;
  j["customer"] = o.customer;
  j["period"] = o.period;
  j["quantity"] = number_json(o.quantity);
  Json late = Json::array();
  for (double v : o.late_penalty) late.push_back(number_json(v));
  j["late_penalty"] = late;
  j["cancel_penalty"] = number_json(o.cancel_penalty);
  if (o.price) j["price"] = number_json(*o.price);
  j["no_late"] = o.no_late;
  j["no_cancel"] = o.no_cancel;
  return j;
}

}  // namespace

ScenarioDocument scenario_from_json(const Json& doc, const std::string& origin) {
  Reader r(doc, origin);
  if (!r.has("schema_version")) fail(origin, "missing field 'schema_version'");
  const Json& v = r.get("schema_version");
  if (!v.is_number_integer() || v.get<int>() != kSchemaVersion)
    fail(r.at("schema_version"), "unsupported schema_version " + v.dump() + " (supported: " +
                                     std::to_string(kSchemaVersion) + ")");
  ScenarioDocument out;
  out.scenario.label = r.string("label", "");
  if (auto* events = r.find("events")) {
    if (!events->is_array()) fail(r.at("events"), "expected an array");
    for (size_t k = 0; k < events->size(); ++k)
      out.scenario.events.push_back(read_event((*events)[k], r.at("events") + "[" + std::to_string(k) + "]"));
  }
  if (auto* orders = r.find("orders")) {
    if (!orders->is_array()) fail(r.at("orders"), "expected an array");
    for (size_t k = 0; k < orders->size(); ++k)
      out.scenario.orders.push_back(read_order((*orders)[k], r.at("orders") + "[" + std::to_string(k) + "]"));
  }
  if (auto* c = r.find("config")) out.config = read_config(*c, r.at("config"));
  if (auto* s = r.find("solver")) out.solve = read_solver(*s, r.at("solver"));
  r.finish();
  return out;
}

Json scenario_to_json(const disruption::Scenario& scenario) {
  Json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["label"] = scenario.label;
  Json events = Json::array();
  for (const auto& e : scenario.events) events.push_back(event_json(e));
  doc["events"] = events;
  Json orders = Json::array();
  for (const auto& o : scenario.orders) orders.push_back(order_json(o));
  doc["orders"] = orders;
  return doc;
}

Json scenario_to_json(const ScenarioDocument& d) {
  Json doc = scenario_to_json(d.scenario);
  const auto& c = d.config;
  doc["config"] = {{"patp", c.patp},
                   {"ftc", c.ftc},
                   {"sla", to_string(c.sla)},
                   {"terminal", to_string(c.terminal)},
                   {"inventory_floor", to_string(c.inventory_floor)},
                   {"shared_volume", c.shared_volume},
                   {"enforce_u_upper", c.enforce_u_upper}};
  const auto& s = d.solve;
  doc["solver"] = {{"feasibility_tolerance", s.feasibility_tolerance},
                   {"integrality_tolerance", s.integrality_tolerance},
                   {"relative_gap", s.relative_gap},
                   {"absolute_gap", s.absolute_gap},
                   {"node_limit", s.node_limit},
                   {"time_limit_seconds", s.time_limit_seconds},
                   {"iteration_limit", s.iteration_limit}};
  return doc;
}

ScenarioDocument load_scenario(const std::string& path) { return scenario_from_json(read_json_file(path), path); }

void save_scenario(const ScenarioDocument& doc, const std::string& path) {
  write_file_atomic(path, scenario_to_json(doc).dump(2) + "\n");
}

}  // namespace scdr::io
