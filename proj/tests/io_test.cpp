#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "scdr/io/documents.hpp"
#include "scdr/runner/runner.hpp"
#include "scdr/runner/synthetic.hpp"
#include "support/networks.hpp"

namespace fs = std::filesystem;
using namespace scdr;
using io::Json;

namespace {

std::string data(const std::string& name) { return std::string(SCDR_DATA_DIR) + "/" + name; }

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("scdr_io_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const DataError& e) {
    return e.what();
  }
  return "";
}

Json minimal_doc() { return io::read_json_file(data("minimal_chain.json")); }

std::vector<std::string> lines_of(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST(ModelDocument, FixturesMatchInCodeModels) {
  EXPECT_EQ(io::load_model(data("minimal_chain.json")), scdr::testing::minimal_chain(4));
  EXPECT_EQ(io::load_model(data("synthetic.json")), runner::synthetic_network(20));
}

TEST(ModelDocument, RoundTripsFixtures) {
  for (const NetworkModel& m : {scdr::testing::minimal_chain(4), scdr::testing::motivating_topology(6), runner::synthetic_network(20)}) {
    EXPECT_EQ(io::model_from_json(io::model_to_json(m)), m);
    // Through text as well: numbers must survive serialization.
    EXPECT_EQ(io::model_from_json(Json::parse(io::model_to_json(m).dump())), m);
  }
}

TEST(ModelDocument, RoundTripsRandomModels) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    auto tc = scdr::testing::random_tiny_case(seed);
    SCOPED_TRACE(seed);
    EXPECT_EQ(io::model_from_json(Json::parse(io::model_to_json(tc.model).dump())), tc.model);
  }
}

TEST(ModelDocument, SaveThenLoad) {
  auto dir = scratch("save");
  auto m = runner::synthetic_network(20);
  io::save_model(m, (dir / "m.json").string());
  EXPECT_FALSE(fs::exists(dir / "m.json.tmp"));
  EXPECT_EQ(io::load_model((dir / "m.json").string()), m);
}

TEST(ModelDocument, InventoryCapacityIsRequired) {
  Json doc = minimal_doc();
  doc["nodes"][1]["materials"]["prod"].erase("upper");
  auto msg = error_of([&] { io::model_from_json(doc, "m"); });
  EXPECT_NE(msg.find("m.nodes[1].materials.prod"), std::string::npos) << msg;
  EXPECT_NE(msg.find("inventory capacity required"), std::string::npos) << msg;

  // A default capacity satisfies the requirement.
  doc["defaults"]["inventory"]["upper"] = 70;
  auto m = io::model_from_json(doc);
  EXPECT_EQ(m.nodes[1].inventory[1].upper, constant_series(4, 70.0));
  EXPECT_EQ(m.nodes[1].inventory[0].upper, constant_series(4, 100.0));
}

TEST(ModelDocument, RejectsUnknownSchemaVersion) {
  Json doc = minimal_doc();
  doc["schema_version"] = 2;
  auto msg = error_of([&] { io::model_from_json(doc); });
  EXPECT_NE(msg.find("unsupported schema_version 2 (supported: 1)"), std::string::npos) << msg;
  doc.erase("schema_version");
  EXPECT_NE(error_of([&] { io::model_from_json(doc); }).find("missing field 'schema_version'"), std::string::npos);
}

TEST(ModelDocument, RejectsUnknownFields) {
  Json doc = minimal_doc();
  doc["arcs"][0]["materials"]["raw"]["leadtime"] = 2;
  auto msg = error_of([&] { io::model_from_json(doc); });
  EXPECT_NE(msg.find("model.arcs[0].materials.raw: unknown field 'leadtime'"), std::string::npos) << msg;
}

TEST(ModelDocument, TablesAreScalarOrFullLength) {
  Json doc = minimal_doc();
  doc["nodes"][2]["materials"]["prod"]["quantity"] = Json::array({0, 5, 6, 7});
  auto m = io::model_from_json(doc);
  EXPECT_EQ(m.nodes[2].demand[0].quantity, (Series{0, 5, 6, 7}));
  doc["nodes"][2]["materials"]["prod"]["quantity"] = Json::array({0, 5, 6});
  auto msg = error_of([&] { io::model_from_json(doc); });
  EXPECT_NE(msg.find("quantity: expected 4 values, got 3"), std::string::npos) << msg;
}

TEST(ModelDocument, InfinitySpellings) {
  Json doc = minimal_doc();
  doc["nodes"][0]["materials"]["raw"]["upper"] = "inf";
  EXPECT_EQ(io::model_from_json(doc).nodes[0].supply[0].upper, constant_series(4, kInf));
  doc["nodes"][0]["materials"]["raw"]["upper"] = nullptr;
  EXPECT_EQ(io::model_from_json(doc).nodes[0].supply[0].upper, constant_series(4, kInf));
  doc["nodes"][0]["materials"]["raw"]["upper"] = "lots";
  EXPECT_FALSE(error_of([&] { io::model_from_json(doc); }).empty());
}

TEST(ModelDocument, OrdersAggregateAndExcludeQuantityTables) {
  Json doc = minimal_doc();
  doc["nodes"][2]["materials"]["prod"].erase("quantity");
  doc["orders"] = Json::array({{{"material", "prod"}, {"customer", "C"}, {"period", 2}, {"quantity", 3}},
                               {{"material", "prod"}, {"customer", "C"}, {"period", 2}, {"quantity", 4}}});
  auto m = io::model_from_json(doc);
  EXPECT_EQ(m.nodes[2].demand[0].quantity, (Series{0, 0, 7, 0}));

  doc["nodes"][2]["materials"]["prod"]["quantity"] = 1;
  auto msg = error_of([&] { io::model_from_json(doc); });
  EXPECT_NE(msg.find("mutually exclusive"), std::string::npos) << msg;
}

TEST(ModelDocument, ValidationFailuresCarryTheReport) {
  Json doc = minimal_doc();
  doc["arcs"][0]["materials"]["raw"]["lower"] = 60;  // above the upper bound of 50
  try {
    io::model_from_json(doc, "m");
    FAIL() << "expected a validation failure";
  } catch (const io::ValidationFailed& e) {
    EXPECT_FALSE(e.report.ok());
    EXPECT_NE(std::string(e.what()).find("validation error(s)"), std::string::npos);
  }
}

TEST(ModelDocument, ParseErrorsNameTheFile) {
  auto dir = scratch("parse");
  std::ofstream(dir / "bad.json") << "{\"schema_version\": 1,";
  auto msg = error_of([&] { io::load_model((dir / "bad.json").string()); });
  EXPECT_NE(msg.find("bad.json: parse error at byte"), std::string::npos) << msg;
  EXPECT_NE(error_of([&] { io::load_model((dir / "absent.json").string()); }).find("cannot open"),
            std::string::npos);
}

TEST(ScenarioDocument, FixturesLoadAndApply) {
  auto model = io::load_model(data("synthetic.json"));
  for (const char* name : {"nominal", "plant_outage", "blocked_route", "forced_order_shutdown"}) {
    SCOPED_TRACE(name);
    auto doc = io::load_scenario(data(std::string("scenarios/") + name + ".json"));
    EXPECT_NO_THROW(disruption::apply_scenario(model, doc.scenario, doc.config));
  }
  auto nominal = io::load_scenario(data("scenarios/nominal.json"));
  EXPECT_TRUE(nominal.scenario.events.empty());
  EXPECT_EQ(nominal.config.terminal, formulation::TerminalMode::Hard);
  auto blocked = io::load_scenario(data("scenarios/blocked_route.json"));
  ASSERT_EQ(blocked.scenario.events.size(), 2u);
  EXPECT_EQ(blocked.scenario.events[0].shape, disruption::Shape::Scheduled);
  EXPECT_EQ(blocked.scenario.events[0].end, 10);
  EXPECT_EQ(blocked.config.terminal, formulation::TerminalMode::Fid);
}

TEST(ScenarioDocument, RoundTrips) {
  io::ScenarioDocument d;
  d.scenario.label = "mixed";
  disruption::DisruptionEvent e;
  e.target = "flow_upper/a4/PX";
  e.shape = disruption::Shape::Custom;
  e.start = 2;
  e.end = 6;
  e.custom = {0.5, 0.25, 0.0, 1.0};
  d.scenario.events.push_back(e);
  disruption::DisruptionEvent v;
  v.target = "lead_time/a2/*";
  v.shape = disruption::Shape::Permanent;
  v.start = 3;
  v.end = 20;
  v.value = 4;
  d.scenario.events.push_back(v);
  disruption::InjectedOrder o;
  o.material = "PY";
  o.customer = "C3";
  o.period = 7;
  o.quantity = 12.5;
  o.late_penalty = {1, 2, 3};
  o.cancel_penalty = kInf;
  o.price = 90;
  o.no_cancel = true;
  d.scenario.orders.push_back(o);
  d.config.patp = true;
  d.config.terminal = formulation::TerminalMode::Fid;
  d.solve.relative_gap = 1e-3;
  d.solve.time_limit_seconds = 12;

  auto back = io::scenario_from_json(Json::parse(io::scenario_to_json(d).dump()));
  EXPECT_EQ(back.scenario, d.scenario);
  EXPECT_EQ(back.config, d.config);
  EXPECT_EQ(back.solve.relative_gap, d.solve.relative_gap);
  EXPECT_EQ(back.solve.time_limit_seconds, d.solve.time_limit_seconds);
  EXPECT_EQ(back.solve.node_limit, d.solve.node_limit);
}

TEST(ScenarioDocument, RejectsBadInput) {
  Json doc = {{"schema_version", 1}, {"events", Json::array({{{"target", "x"}, {"end", 3}, {"shape", "sudden"}}})}};
  EXPECT_NE(error_of([&] { io::scenario_from_json(doc); }).find("scenario.events[0].shape"), std::string::npos);
  doc["events"][0].erase("shape");
  doc["events"][0]["colour"] = "red";
  EXPECT_NE(error_of([&] { io::scenario_from_json(doc); }).find("unknown field 'colour'"), std::string::npos);
  Json order = {{"schema_version", 1},
                {"orders", Json::array({{{"material", "PX"}, {"customer", "C1"}, {"period", 3}, {"quantity", 1}}})}};
  EXPECT_NE(error_of([&] { io::scenario_from_json(order); }).find("missing field 'late_penalty'"),
            std::string::npos);
  EXPECT_NE(error_of([&] { io::scenario_from_json(Json{{"schema_version", 7}}); }).find("unsupported"),
            std::string::npos);
}

class Results : public ::testing::TestWithParam<io::ResultFormat> {};

TEST_P(Results, RoundTripSolvedSchedule) {
  auto model = runner::synthetic_network(20);
  disruption::Scenario s;
  disruption::DisruptionEvent e;
  e.target = "production_upper/*/*";
  e.start = 1;
  e.end = 20;
  e.fraction = 0.0;
  e.shape = disruption::Shape::Permanent;
  s.events.push_back(e);
  formulation::ExtensionConfig c;
  c.terminal = formulation::TerminalMode::Fid;
  auto r = runner::run(model, s, c);
  ASSERT_FALSE(r.schedule.cancellations.empty());

  auto dir = scratch(GetParam() == io::ResultFormat::Tabular ? "tab" : "json");
  io::save_results(r.schedule, r.kpis, dir.string(), GetParam());
  formulation::ScheduleReport back;
  runner::KpiReport kpis;
  io::load_results(dir.string(), GetParam(), back, kpis);
  EXPECT_EQ(kpis, r.kpis);
  EXPECT_EQ(back.periods, r.schedule.periods);
  EXPECT_EQ(back.status, r.schedule.status);
  EXPECT_EQ(back.objective, r.schedule.objective);
  EXPECT_EQ(back.cancellations, r.schedule.cancellations);
  EXPECT_EQ(back.deviations, r.schedule.deviations);
  // The tabular form groups series by family; compare as sets.
  auto key = [](const formulation::TimeSeries& a, const formulation::TimeSeries& b) {
    return std::tie(a.label, a.material, a.entity, a.recipe) < std::tie(b.label, b.material, b.entity, b.recipe);
  };
  auto want = r.schedule.series, got = back.series;
  std::sort(want.begin(), want.end(), key);
  std::sort(got.begin(), got.end(), key);
  EXPECT_EQ(got, want);
}

INSTANTIATE_TEST_SUITE_P(Formats, Results, ::testing::Values(io::ResultFormat::Tabular, io::ResultFormat::Structured));

TEST(ResultsTabular, EmptyScheduleWritesHeaderOnlyFiles) {
  formulation::ScheduleReport s;
  s.periods = 3;
  s.status = milp::Status::Optimal;
  auto dir = scratch("empty");
  io::save_results(s, {}, dir.string(), io::ResultFormat::Tabular);
  auto inv = lines_of(dir / "Inv.csv");
  ASSERT_EQ(inv.size(), 1u);
  EXPECT_EQ(inv[0], "material,entity,entity_kind,recipe,0,1,2");
  EXPECT_EQ(lines_of(dir / "cancellations.csv").size(), 1u);
  EXPECT_FALSE(fs::exists(dir / "Dev.csv"));
  formulation::ScheduleReport back;
  runner::KpiReport k;
  io::load_results(dir.string(), io::ResultFormat::Tabular, back, k);
  EXPECT_EQ(back, s);
}

TEST(ResultsTabular, KpiColumns) {
  EXPECT_EQ(io::kpi_columns(), (std::vector<std::string>{"profit", "canceled_orders", "delayed_material",
                                                          "late_delivered", "shipments", "warehouse_inventory"}));
  runner::KpiReport k;
  k.profit = 1.5;
  k.canceled_orders = 2;
  k.shipments = 7;
  std::ostringstream os;
  io::write_kpi_csv(k, os);
  EXPECT_EQ(os.str(), "profit,canceled_orders,delayed_material,late_delivered,shipments,warehouse_inventory\n"
                      "1.5,2,0,0,7,0\n");
}

TEST(ResultsTabular, GridCsv) {
  runner::SweepGrid g;
  g.axis1_name = "capacity_fraction";
  g.axis2_name = "duration_fraction";
  g.axis1 = {0.5};
  g.axis2 = {0.0, 1.0};
  g.cells.resize(2);
  g.cells[0].axis1 = 0.5;
  g.cells[0].axis2 = 0.0;
  g.cells[0].status = milp::Status::Optimal;
  g.cells[0].kpis.profit = 10;
  g.cells[1].axis1 = 0.5;
  g.cells[1].axis2 = 1.0;
  g.cells[1].status = milp::Status::Limit;
  g.cells[1].diagnostic = "node limit, no incumbent";
  std::ostringstream os;
  io::write_grid_csv(g, os);
  auto text = os.str();
  EXPECT_EQ(text.substr(0, text.find('\n')),
            "capacity_fraction,duration_fraction,status,profit,canceled_orders,delayed_material,late_delivered,"
            "shipments,warehouse_inventory,diagnostic");
  EXPECT_NE(text.find("0.5,0,optimal,10,0,0,0,0,0,\n"), std::string::npos) << text;
  EXPECT_NE(text.find("\"node limit, no incumbent\""), std::string::npos) << text;
  EXPECT_EQ(io::grid_to_json(g)["cells"].size(), 2u);
}

TEST(Numbers, FormatRoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, 123456789.125, -2.5}) EXPECT_EQ(std::stod(io::format_number(v)), v);
  EXPECT_EQ(io::format_number(kInf), "inf");
  EXPECT_EQ(io::format_number(-kInf), "-inf");
}
