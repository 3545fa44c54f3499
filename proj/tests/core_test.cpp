#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "scdr/core/network_model.hpp"
#include "support/networks.hpp"

namespace scdr {
namespace {

using testing::minimal_chain;
using testing::motivating_topology;

bool mentions(const std::vector<std::string>& msgs, const std::string& text) {
  return std::any_of(msgs.begin(), msgs.end(),
                     [&](const std::string& m) { return m.find(text) != std::string::npos; });
}

TEST(Validate, MinimalChainIsClean) {
  auto r = validate(minimal_chain());
  EXPECT_TRUE(r.ok()) << (r.errors.empty() ? "" : r.errors[0]);
  EXPECT_TRUE(r.warnings.empty());
  EXPECT_TRUE(validate(motivating_topology()).ok());
}

TEST(Validate, ArcMaterialMustExistAtEndpoints) {
  NetworkModel m = minimal_chain();
  m.arcs[1].materials[0].material = 0;  // raw is not stocked at the customer
  auto r = validate(m);
  ASSERT_EQ(r.errors.size(), 1u);
  EXPECT_TRUE(mentions(r.errors, "material not at node"));
}

TEST(Validate, FlowBoundOrderCitesTheTriple) {
  NetworkModel m = minimal_chain();
  m.arcs[0].materials[0].lower[2] = 60.0;
  auto r = validate(m);
  ASSERT_EQ(r.errors.size(), 1u);
  EXPECT_EQ(r.errors[0], "arc 'a1' material 'raw' period 2: flow lower bound exceeds upper bound");
}

TEST(Validate, InventoryCapacityRequired) {
  NetworkModel m = minimal_chain();
  m.nodes[1].inventory[0].upper.clear();
  EXPECT_TRUE(mentions(validate(m).errors, "inventory capacity required"));
  EXPECT_THROW(require_valid(m), DataError);
}

TEST(Validate, StructuralErrors) {
  NetworkModel m = minimal_chain();
  m.arcs[0].destination = m.arcs[0].origin;
  EXPECT_TRUE(mentions(validate(m).errors, "origin equals destination"));

  m = minimal_chain();
  m.time.period_count = 1;
  EXPECT_FALSE(validate(m).ok());

  m = minimal_chain();
  m.nodes[1].inventory[0].alpha = constant_series(4, 0.5);
  m.nodes[1].inventory[0].buffer = constant_series(4, 300.0);
  EXPECT_TRUE(mentions(validate(m).errors, "enforced buffer exceeds capacity"));

  m = minimal_chain();
  m.nodes[1].recipes[0].coefficients = {{1, 1.0}};
  EXPECT_FALSE(validate(m).ok());
  m.nodes[1].recipes[0].source_or_sink = true;
  EXPECT_TRUE(validate(m).ok());

  m = minimal_chain();
  m.nodes[2].demand[0].price[1] = -1.0;
  EXPECT_TRUE(mentions(validate(m).errors, "negative value"));

  m = minimal_chain();
  m.nodes[0].sla_required = true;
  m.nodes[0].supply[0].lower[1] = 1.0;
  EXPECT_FALSE(validate(m).ok());
}

TEST(Validate, Warnings) {
  NetworkModel m = minimal_chain();
  m.nodes[2].demand[0].backlog = 0;  // period-0 order no longer covered
  auto r = validate(m);
  EXPECT_TRUE(r.ok());
  EXPECT_TRUE(mentions(r.warnings, "period 0"));

  m = minimal_chain();
  m.arcs.pop_back();
  r = validate(m);
  EXPECT_TRUE(mentions(r.warnings, "unreachable"));
}

TEST(Incidence, Plant1OfMotivatingTopology) {
  NetworkModel m = motivating_topology();
  Incidence inc = incidence(m, "Plant1");
  std::vector<std::string> in, out;
  for (int a : inc.arcs_in) in.push_back(m.nodes[m.arcs[a].origin].id);
  for (int a : inc.arcs_out) out.push_back(m.nodes[m.arcs[a].destination].id);
  EXPECT_EQ(in, (std::vector<std::string>{"SupplierA", "SupplierB"}));
  EXPECT_EQ(out, (std::vector<std::string>{"Warehouse1", "CustDirect"}));
}

TEST(Incidence, IsolatedNodeAndUnknownId) {
  NetworkModel m = minimal_chain();
  add_node(m, "W", NodeKind::Warehouse, {1}, 10.0);
  Incidence inc = incidence(m, "W");
  EXPECT_TRUE(inc.arcs_in.empty());
  EXPECT_TRUE(inc.arcs_out.empty());
  EXPECT_THROW(incidence(m, "nope"), DataError);
}

TEST(Incidence, PartitionsArcs) {
  NetworkModel m = motivating_topology();
  std::vector<int> in_count(m.arcs.size()), out_count(m.arcs.size());
  for (int n = 0; n < static_cast<int>(m.nodes.size()); ++n) {
    Incidence inc = incidence(m, n);
    EXPECT_TRUE(std::is_sorted(inc.arcs_in.begin(), inc.arcs_in.end()));
    for (int a : inc.arcs_in) ++in_count[a];
    for (int a : inc.arcs_out) ++out_count[a];
  }
  for (size_t a = 0; a < m.arcs.size(); ++a) {
    EXPECT_EQ(in_count[a], 1);
    EXPECT_EQ(out_count[a], 1);
  }
}

TEST(Orders, AggregateSumsSharedKeys) {
  auto d = aggregate_orders({{"A", "c1", 5, 10}, {"A", "c1", 5, 7}});
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].quantity, 17);
  EXPECT_TRUE(aggregate_orders({}).empty());
  EXPECT_EQ(aggregate_orders({{"A", "c1", 5, 10}, {"B", "c1", 5, 7}}).size(), 2u);
  EXPECT_THROW(aggregate_orders({{"A", "c1", 5, -1}}), DataError);
}

TEST(Orders, AggregateIsOrderIndependent) {
  std::mt19937 rng(7);
  std::vector<RawOrder> raw;
  for (int i = 0; i < 60; ++i)
    raw.push_back({std::string(1, 'A' + rng() % 3), "c" + std::to_string(rng() % 4),
                   static_cast<int>(rng() % 5), static_cast<double>(rng() % 20)});
  auto base = aggregate_orders(raw);
  for (int k = 0; k < 10; ++k) {
    std::shuffle(raw.begin(), raw.end(), rng);
    EXPECT_EQ(aggregate_orders(raw), base);
  }
  // Associativity: aggregating partial aggregates gives the same book.
  std::vector<RawOrder> left(raw.begin(), raw.begin() + 30), right(raw.begin() + 30, raw.end());
  std::vector<RawOrder> merged;
  for (const auto& part : {aggregate_orders(left), aggregate_orders(right)})
    for (const auto& o : part) merged.push_back({o.key.material, o.key.customer, o.key.period, o.quantity});
  EXPECT_EQ(aggregate_orders(merged), base);
}

TEST(Orders, InstallReplacesOrderBooks) {
  NetworkModel m = minimal_chain();
  install_orders(m, aggregate_orders({{"prod", "C", 2, 4}, {"prod", "C", 2, 3}}));
  EXPECT_EQ(m.nodes[2].demand[0].quantity, (Series{0, 0, 7, 0}));
  EXPECT_THROW(install_orders(m, aggregate_orders({{"raw", "C", 1, 1}})), DataError);
  EXPECT_THROW(install_orders(m, aggregate_orders({{"prod", "C", 9, 1}})), DataError);
}

}  // namespace
}  // namespace scdr
