#include <filesystem>
#include <fstream>
#include <sstream>

#include "json_util.hpp"

namespace scdr::io {

using detail::fail;
using detail::number_json;
using formulation::Family;

namespace {

constexpr Family kSeriesFamilies[] = {Family::FlowIn, Family::FlowOut, Family::Prod,    Family::ProdIn,
                                      Family::ProdOut, Family::Inv,    Family::Buy,     Family::Dem,
                                      Family::Unmet,   Family::NegDev, Family::Cancel,  Family::FlowOn,
                                      Family::SlaOn,   Family::Below};

Family family_from_label(const std::string& label) {
  for (int f = 0; f <= static_cast<int>(Family::Below); ++f)
    if (label == formulation::to_string(static_cast<Family>(f))) return static_cast<Family>(f);
  throw DataError("unknown column family '" + label + "'");
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> csv_split(const std::string& line, const std::string& where) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') cur += line[++i];
      else if (c == '"') quoted = false;
      else cur += c;
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quoted) fail(where, "unterminated quoted field");
  out.push_back(std::move(cur));
  return out;
}

std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError(path.string() + ": cannot open file");
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    rows.push_back(csv_split(line, path.string()));
  }
  if (rows.empty()) fail(path.string(), "missing header row");
  return rows;
}

double parse_double(const std::string& s, const std::string& where) {
  if (s == "inf") return kInf;
  if (s == "-inf") return -kInf;
  try {
    size_t used = 0;
    double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  fail(where, "malformed number '" + s + "'");
}

}  // namespace

ResultFormat result_format_from_string(const std::string& text) {
  if (text == "tabular") return ResultFormat::Tabular;
  if (text == "structured") return ResultFormat::Structured;
  throw DataError("unknown result format '" + text + "' (expected tabular or structured)");
}

milp::Status status_from_string(const std::string& text) {
  for (auto s : {milp::Status::Optimal, milp::Status::Feasible, milp::Status::Infeasible, milp::Status::Unbounded,
                 milp::Status::Limit})
    if (text == milp::to_string(s)) return s;
  throw DataError("unknown solver status '" + text + "'");
}

const std::vector<std::string>& kpi_columns() {
  static const std::vector<std::string> cols = {"profit",         "canceled_orders", "delayed_material",
                                                "late_delivered", "shipments",       "warehouse_inventory"};
  return cols;
}

Json kpis_to_json(const runner::KpiReport& k) {
  Json j;
  j["profit"] = k.profit;
  j["canceled_orders"] = k.canceled_orders;
  j["delayed_material"] = k.delayed_material;
  j["late_delivered"] = k.late_delivered;
  j["shipments"] = k.shipments;
  j["warehouse_inventory"] = k.warehouse_inventory;
  j["delayed_by_material"] = k.delayed_by_material;
  j["inventory_by_node"] = k.inventory_by_node;
  return j;
}

runner::KpiReport kpis_from_json(const Json& doc) {
  detail::Reader r(doc, "kpis");
  runner::KpiReport k;
  k.profit = r.number("profit");
  k.canceled_orders = r.integer("canceled_orders");
  k.delayed_material = r.number("delayed_material");
  k.late_delivered = r.number("late_delivered");
  k.shipments = r.integer("shipments");
  k.warehouse_inventory = r.number("warehouse_inventory");
  for (const char* key : {"delayed_by_material", "inventory_by_node"}) {
    auto& target = std::string(key) == "delayed_by_material" ? k.delayed_by_material : k.inventory_by_node;
    const Json& m = r.get(key);
    if (!m.is_object()) fail(r.at(key), "expected an object");
    for (auto it = m.begin(); it != m.end(); ++it)
      target[it.key()] = detail::as_number(it.value(), r.at(key) + "." + it.key());
  }
  r.finish();
  return k;
}

Json schedule_to_json(const formulation::ScheduleReport& s) {
  Json j;
  j["periods"] = s.periods;
  j["status"] = milp::to_string(s.status);
  j["objective"] = number_json(s.objective);
  Json series = Json::array();
  for (const auto& ts : s.series) {
    Json e;
    e["family"] = ts.label;
    e["material"] = ts.material;
    e["entity"] = ts.entity;
    e["entity_kind"] = ts.entity_kind;
    e["recipe"] = ts.recipe;
    Json v = Json::array();
    for (double x : ts.values) v.push_back(number_json(x));
    e["values"] = v;
    series.push_back(std::move(e));
  }
  j["series"] = series;
  Json canc = Json::array();
  for (const auto& c : s.cancellations)
    canc.push_back({{"material", c.material}, {"customer", c.customer}, {"period", c.period},
                    {"quantity", number_json(c.quantity)}});
  j["cancellations"] = canc;
  Json dev = Json::array();
  for (const auto& d : s.deviations)
    dev.push_back({{"material", d.material}, {"node", d.node}, {"value", number_json(d.value)}});
  j["deviations"] = dev;
  return j;
}

formulation::ScheduleReport schedule_from_json(const Json& doc) {
  detail::Reader r(doc, "schedule");
  formulation::ScheduleReport s;
  s.periods = r.integer("periods");
  s.status = status_from_string(r.string("status"));
  s.objective = r.number("objective");
  for (const Json& e : r.get("series")) {
    detail::Reader q(e, "schedule.series");
    formulation::TimeSeries ts;
    ts.label = q.string("family");
    ts.family = family_from_label(ts.label);
    ts.material = q.string("material");
    ts.entity = q.string("entity");
    ts.entity_kind = q.string("entity_kind");
    ts.recipe = q.string("recipe");
    for (const Json& v : q.get("values")) ts.values.push_back(detail::as_number(v, q.at("values")));
    q.finish();
    s.series.push_back(std::move(ts));
  }
  for (const Json& e : r.get("cancellations")) {
    detail::Reader q(e, "schedule.cancellations");
    s.cancellations.push_back({q.string("material"), q.string("customer"), q.integer("period"), q.number("quantity")});
    q.finish();
  }
  for (const Json& e : r.get("deviations")) {
    detail::Reader q(e, "schedule.deviations");
    s.deviations.push_back({q.string("material"), q.string("node"), q.number("value")});
    q.finish();
  }
  r.finish();
  return s;
}

void write_kpi_csv(const runner::KpiReport& k, std::ostream& out) {
  const auto& cols = kpi_columns();
  for (size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << "\n"
      << format_number(k.profit) << "," << k.canceled_orders << "," << format_number(k.delayed_material) << ","
      << format_number(k.late_delivered) << "," << k.shipments << "," << format_number(k.warehouse_inventory) << "\n";
}

void save_results(const formulation::ScheduleReport& s, const runner::KpiReport& k, const std::string& path,
                  ResultFormat format) {
  namespace fs = std::filesystem;
  fs::create_directories(path);
  const fs::path dir(path);
  if (format == ResultFormat::Structured) {
    Json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["schedule"] = schedule_to_json(s);
    doc["kpis"] = kpis_to_json(k);
    write_file_atomic((dir / "results.json").string(), doc.dump(2) + "\n");
    return;
  }

  std::ostringstream summary;
  summary << "periods,status,objective\n"
          << s.periods << "," << milp::to_string(s.status) << "," << format_number(s.objective) << "\n";
  write_file_atomic((dir / "summary.csv").string(), summary.str());

  std::ostringstream kpis;
  write_kpi_csv(k, kpis);
  write_file_atomic((dir / "kpis.csv").string(), kpis.str());

  std::ostringstream breakdown;
  breakdown << "breakdown,key,value\n";
  for (const auto& [key, v] : k.delayed_by_material)
    breakdown << "delayed_by_material," << csv_field(key) << "," << format_number(v) << "\n";
  for (const auto& [key, v] : k.inventory_by_node)
    breakdown << "inventory_by_node," << csv_field(key) << "," << format_number(v) << "\n";
  write_file_atomic((dir / "kpi_breakdown.csv").string(), breakdown.str());

  std::ostringstream canc;
  canc << "material,customer,period,quantity\n";
  for (const auto& c : s.cancellations)
    canc << csv_field(c.material) << "," << csv_field(c.customer) << "," << c.period << ","
         << format_number(c.quantity) << "\n";
  write_file_atomic((dir / "cancellations.csv").string(), canc.str());

  std::ostringstream dev;
  dev << "material,node,value\n";
  for (const auto& d : s.deviations)
    dev << csv_field(d.material) << "," << csv_field(d.node) << "," << format_number(d.value) << "\n";
  write_file_atomic((dir / "deviations.csv").string(), dev.str());

  for (Family f : kSeriesFamilies) {
    std::ostringstream os;
    os << "material,entity,entity_kind,recipe";
    for (int t = 0; t < s.periods; ++t) os << "," << t;
    os << "\n";
    for (const auto& ts : s.series) {
      if (ts.family != f) continue;
      os << csv_field(ts.material) << "," << csv_field(ts.entity) << "," << csv_field(ts.entity_kind) << ","
         << csv_field(ts.recipe);
      for (double v : ts.values) os << "," << format_number(v);
      os << "\n";
    }
    write_file_atomic((dir / (std::string(formulation::to_string(f)) + ".csv")).string(), os.str());
  }
}

void load_results(const std::string& path, ResultFormat format, formulation::ScheduleReport& s,
                  runner::KpiReport& k) {
  namespace fs = std::filesystem;
  const fs::path dir(path);
  if (format == ResultFormat::Structured) {
    Json doc = read_json_file((dir / "results.json").string());
    detail::Reader r(doc, "results");
    if (r.integer("schema_version") != kSchemaVersion) fail(r.at("schema_version"), "unsupported schema_version");
    s = schedule_from_json(r.get("schedule"));
    k = kpis_from_json(r.get("kpis"));
    r.finish();
    return;
  }

  s = {};
  k = {};
  auto need = [](const std::vector<std::vector<std::string>>& rows, size_t cols, const std::string& where) {
    for (size_t i = 1; i < rows.size(); ++i)
      if (rows[i].size() != cols) fail(where, "row " + std::to_string(i) + " has the wrong number of fields");
  };
  {
    auto rows = read_csv(dir / "summary.csv");
    if (rows.size() != 2) fail(path, "summary.csv needs one data row");
    need(rows, 3, "summary.csv");
    s.periods = std::stoi(rows[1][0]);
    s.status = status_from_string(rows[1][1]);
    s.objective = parse_double(rows[1][2], "summary.csv");
  }
  {
    auto rows = read_csv(dir / "kpis.csv");
    if (rows.size() != 2 || rows[0] != kpi_columns()) fail(path, "kpis.csv header or row count mismatch");
    need(rows, kpi_columns().size(), "kpis.csv");
    const auto& v = rows[1];
    k.profit = parse_double(v[0], "kpis.csv");
    k.canceled_orders = std::stol(v[1]);
    k.delayed_material = parse_double(v[2], "kpis.csv");
    k.late_delivered = parse_double(v[3], "kpis.csv");
    k.shipments = std::stol(v[4]);
    k.warehouse_inventory = parse_double(v[5], "kpis.csv");
  }
  {
    auto rows = read_csv(dir / "kpi_breakdown.csv");
    need(rows, 3, "kpi_breakdown.csv");
    for (size_t i = 1; i < rows.size(); ++i) {
      double v = parse_double(rows[i][2], "kpi_breakdown.csv");
      if (rows[i][0] == "delayed_by_material") k.delayed_by_material[rows[i][1]] = v;
      else if (rows[i][0] == "inventory_by_node") k.inventory_by_node[rows[i][1]] = v;
      else fail("kpi_breakdown.csv", "unknown breakdown '" + rows[i][0] + "'");
    }
  }
  {
    auto rows = read_csv(dir / "cancellations.csv");
    need(rows, 4, "cancellations.csv");
    for (size_t i = 1; i < rows.size(); ++i)
      s.cancellations.push_back(
          {rows[i][0], rows[i][1], std::stoi(rows[i][2]), parse_double(rows[i][3], "cancellations.csv")});
  }
  {
    auto rows = read_csv(dir / "deviations.csv");
    need(rows, 3, "deviations.csv");
    for (size_t i = 1; i < rows.size(); ++i)
      s.deviations.push_back({rows[i][0], rows[i][1], parse_double(rows[i][2], "deviations.csv")});
  }
  for (Family f : kSeriesFamilies) {
    const std::string name = std::string(formulation::to_string(f)) + ".csv";
    auto rows = read_csv(dir / name);
    need(rows, 4 + static_cast<size_t>(s.periods), name);
    for (size_t i = 1; i < rows.size(); ++i) {
      formulation::TimeSeries ts;
      ts.family = f;
      ts.label = formulation::to_string(f);
      ts.material = rows[i][0];
      ts.entity = rows[i][1];
      ts.entity_kind = rows[i][2];
      ts.recipe = rows[i][3];
      for (int t = 0; t < s.periods; ++t) ts.values.push_back(parse_double(rows[i][4 + t], name));
      s.series.push_back(std::move(ts));
    }
  }
}

void write_grid_csv(const runner::SweepGrid& g, std::ostream& out) {
  out << csv_field(g.axis1_name) << "," << csv_field(g.axis2_name) << ",status";
  for (const auto& c : kpi_columns()) out << "," << c;
  out << ",diagnostic\n";
  for (const auto& c : g.cells) {
    const auto& k = c.kpis;
    out << format_number(c.axis1) << "," << format_number(c.axis2) << "," << milp::to_string(c.status) << ","
        << format_number(k.profit) << "," << k.canceled_orders << "," << format_number(k.delayed_material) << ","
        << format_number(k.late_delivered) << "," << k.shipments << "," << format_number(k.warehouse_inventory)
        << "," << csv_field(c.diagnostic) << "\n";
  }
}

Json grid_to_json(const runner::SweepGrid& g) {
  Json j;
  j["axis1_name"] = g.axis1_name;
  j["axis2_name"] = g.axis2_name;
  j["axis1"] = g.axis1;
  j["axis2"] = g.axis2;
  Json cells = Json::array();
  for (const auto& c : g.cells) {
    Json e;
    e["axis1"] = c.axis1;
    e["axis2"] = c.axis2;
    e["status"] = milp::to_string(c.status);
    e["kpis"] = kpis_to_json(c.kpis);
    e["diagnostic"] = c.diagnostic;
    e["scenario"] = scenario_to_json(c.scenario);
    cells.push_back(std::move(e));
  }
  j["cells"] = cells;
  return j;
}

Json roll_to_json(const runner::RollResult& r, const runner::StitchReport& stitch) {
  Json j;
  j["complete"] = r.complete;
  j["committed_periods"] = r.committed_periods;
  j["diagnostic"] = r.diagnostic;
  Json steps = Json::array();
  for (const auto& s : r.steps)
    steps.push_back({{"offset", s.offset}, {"status", milp::to_string(s.status)}, {"kpis", kpis_to_json(s.kpis)}});
  j["steps"] = steps;
  j["stitch"] = {{"worst", stitch.worst}, {"worst_row", stitch.worst_row}, {"rows_checked", stitch.rows_checked}};
  return j;
}

void write_trajectory_csv(const NetworkModel& m, const runner::Trajectory& tr, std::ostream& out) {
  out << "family,material,entity,recipe,t,value\n";
  for (const auto& [k, v] : tr) {
    const bool on_arc = k.family == Family::FlowIn || k.family == Family::FlowOut || k.family == Family::FlowOn;
    out << formulation::to_string(k.family) << "," << (k.material >= 0 ? csv_field(m.materials[k.material]) : "")
        << "," << csv_field(on_arc ? m.arcs[k.entity].id : m.nodes[k.entity].id) << ","
        << (k.recipe >= 0 ? csv_field(m.nodes[k.entity].recipes[k.recipe].id) : "") << "," << k.t << ","
        << format_number(v) << "\n";
  }
}

}  // namespace scdr::io
