#include <gtest/gtest.h>

#include <cmath>

#include "scdr/milp/branch_and_bound.hpp"
#include "scdr/milp/simplex.hpp"
#include "scdr/milp/writers.hpp"
#include "support/dense_lp.hpp"
#include "support/generators.hpp"
#include "support/readers.hpp"

namespace scdr::milp {
namespace {

using scdr::testing::dense_lp;
using scdr::testing::random_lp;
using scdr::testing::random_milp;
using scdr::testing::read_lp;
using scdr::testing::read_mps;

Column col(const std::string& name, double lo, double up, double obj, bool binary = false) {
  return Column{name, lo, up, obj, binary};
}

Row row(const std::string& name, std::vector<std::pair<int, double>> entries, Sense sense,
        double rhs) {
  return Row{name, std::move(entries), sense, rhs};
}

SolveOptions exact_gap() {
  SolveOptions o;
  o.relative_gap = 0.0;
  return o;
}

// Reduced-cost signs at an optimal basic solution (maximization).
void expect_certificate(const MilpInstance& inst, const Solution& s) {
  ASSERT_EQ(s.reduced_costs.size(), inst.columns.size());
  for (size_t j = 0; j < inst.columns.size(); ++j) {
    const Column& c = inst.columns[j];
    double d = s.reduced_costs[j];
    if (s.basic[j]) {
      EXPECT_NEAR(d, 0.0, 1e-8) << c.name;
      continue;
    }
    if (c.lower == c.upper) continue;
    bool at_lower = s.values[j] == c.lower;
    bool at_upper = s.values[j] == c.upper;
    if (at_lower && !at_upper) {
      EXPECT_LE(d, 1e-8) << c.name;
    } else if (at_upper && !at_lower) {
      EXPECT_GE(d, -1e-8) << c.name;
    } else if (!at_lower && !at_upper) {
      EXPECT_NEAR(d, 0.0, 1e-8) << c.name;
    }
  }
}

TEST(SolveLp, SingleBoundedVariable) {
  MilpInstance inst;
  inst.add_column(col("x", 0, kInf, 1));
  inst.add_row(row("c", {{0, 1}}, Sense::LessEqual, 3));
  Solution s = solve_lp(inst);
  ASSERT_EQ(s.status, Status::Optimal);
  EXPECT_DOUBLE_EQ(s.objective, 3.0);
}

TEST(SolveLp, TwoVariablesShareCapacity) {
  MilpInstance inst;
  inst.add_column(col("x", 0, kInf, 1));
  inst.add_column(col("y", 0, kInf, 1));
  inst.add_row(row("c", {{0, 1}, {1, 1}}, Sense::LessEqual, 1));
  Solution s = solve_lp(inst);
  ASSERT_EQ(s.status, Status::Optimal);
  EXPECT_NEAR(s.objective, 1.0, 1e-12);
  EXPECT_TRUE(is_feasible(inst, s.values));
}

TEST(SolveLp, DetectsInfeasibility) {
  MilpInstance inst;
  inst.add_column(col("x", 0, 5, 1));
  inst.add_row(row("c", {{0, 1}}, Sense::GreaterEqual, 6));
  EXPECT_EQ(solve_lp(inst).status, Status::Infeasible);
}

TEST(SolveLp, DetectsUnboundedness) {
  MilpInstance inst;
  inst.add_column(col("x", 0, kInf, 1));
  inst.add_column(col("y", 0, kInf, 0));
  inst.add_row(row("c", {{0, 1}, {1, -1}}, Sense::LessEqual, 2));
  EXPECT_EQ(solve_lp(inst).status, Status::Unbounded);
}

TEST(SolveLp, NoRows) {
  MilpInstance inst;
  inst.add_column(col("x", -2, 4, 1));
  inst.add_column(col("y", -2, 4, -1));
  Solution s = solve_lp(inst);
  ASSERT_EQ(s.status, Status::Optimal);
  EXPECT_DOUBLE_EQ(s.objective, 6.0);
}

TEST(SolveLp, FreeAndNegativeColumns) {
  MilpInstance inst;
  inst.add_column(col("x", -kInf, kInf, 1));
  inst.add_column(col("y", -kInf, 0, 2));
  inst.add_row(row("a", {{0, 1}, {1, 1}}, Sense::LessEqual, 4));
  inst.add_row(row("b", {{0, 1}, {1, -1}}, Sense::LessEqual, 6));
  Solution s = solve_lp(inst);
  ASSERT_EQ(s.status, Status::Optimal);
  EXPECT_NEAR(s.objective, 4.0, 1e-9);  // x=4, y=0
  expect_certificate(inst, s);
}

// Beale's cycling example; needs the anti-cycling fallback.
TEST(SolveLp, DegenerateCyclingExample) {
  MilpInstance inst;
  inst.add_column(col("x1", 0, kInf, 0.75));
  inst.add_column(col("x2", 0, kInf, -150));
  inst.add_column(col("x3", 0, kInf, 0.02));
  inst.add_column(col("x4", 0, kInf, -6));
  inst.add_row(row("r1", {{0, 0.25}, {1, -60}, {2, -0.04}, {3, 9}}, Sense::LessEqual, 0));
  inst.add_row(row("r2", {{0, 0.5}, {1, -90}, {2, -0.02}, {3, 3}}, Sense::LessEqual, 0));
  inst.add_row(row("r3", {{2, 1}}, Sense::LessEqual, 1));
  Solution s = solve_lp(inst);
  ASSERT_EQ(s.status, Status::Optimal);
  EXPECT_NEAR(s.objective, 0.05, 1e-9);
}

TEST(SolveLp, MatchesDenseOracleOnRandomInstances) {
  int compared = 0;
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    MilpInstance inst = random_lp(seed, 20, 30);
    Solution s = solve_lp(inst);
    auto oracle = dense_lp(inst);
    ASSERT_EQ(s.status, oracle.status) << "seed " << seed;
    if (s.status != Status::Optimal) continue;
    ++compared;
    EXPECT_NEAR(s.objective, oracle.objective, 1e-8 * std::max(1.0, std::abs(oracle.objective)))
        << "seed " << seed;
    EXPECT_TRUE(is_feasible(inst, s.values)) << "seed " << seed;
    expect_certificate(inst, s);
  }
  EXPECT_EQ(compared, 40);
}

TEST(Solve, BinaryPairUnderFractionalCapacity) {
  MilpInstance inst;
  inst.add_column(col("x", 0, 1, 1, true));
  inst.add_column(col("y", 0, 1, 1, true));
  inst.add_row(row("c", {{0, 1}, {1, 1}}, Sense::LessEqual, 1.5));
  Solution s = solve(inst);
  ASSERT_EQ(s.status, Status::Optimal);
  EXPECT_DOUBLE_EQ(s.objective, 1.0);
}

TEST(Solve, InfeasibleBinary) {
  MilpInstance inst;
  inst.add_column(col("x", 0, 1, 1, true));
  inst.add_row(row("c", {{0, 1}}, Sense::GreaterEqual, 2));
  EXPECT_EQ(solve(inst).status, Status::Infeasible);
}

MilpInstance knapsack() {
  MilpInstance inst;
  inst.add_column(col("a", 0, 1, 10, true));
  inst.add_column(col("b", 0, 1, 13, true));
  inst.add_column(col("c", 0, 1, 7, true));
  inst.add_row(row("w", {{0, 4}, {1, 6}, {2, 3}}, Sense::LessEqual, 9));
  return inst;
}

TEST(BruteForce, KnapsackMatchesHandEnumeration) {
  const double value[] = {10, 13, 7}, weight[] = {4, 6, 3};
  double best = -1;
  for (int k = 0; k < 8; ++k) {
    double v = 0, w = 0;
    for (int i = 0; i < 3; ++i)
      if (k >> i & 1) v += value[i], w += weight[i];
    if (w <= 9) best = std::max(best, v);
  }
  MilpInstance inst = knapsack();
  Solution bf = brute_force(inst);
  ASSERT_EQ(bf.status, Status::Optimal);
  EXPECT_DOUBLE_EQ(bf.objective, best);
  EXPECT_EQ(bf.nodes, 8);
  EXPECT_DOUBLE_EQ(solve(inst, exact_gap()).objective, best);
}

TEST(BruteForce, NoBinariesEqualsLp) {
  MilpInstance inst = random_lp(7, 10, 12);
  Solution lp = solve_lp(inst);
  Solution bf = brute_force(inst);
  ASSERT_EQ(lp.status, Status::Optimal);
  EXPECT_EQ(bf.status, Status::Optimal);
  EXPECT_EQ(bf.objective, lp.objective);
  EXPECT_EQ(bf.values, lp.values);
}

TEST(BruteForce, AllAssignmentsInfeasible) {
  MilpInstance inst;
  inst.add_column(col("x", 0, 1, 1, true));
  inst.add_column(col("y", 0, 1, 1, true));
  inst.add_row(row("c", {{0, 1}, {1, 1}}, Sense::GreaterEqual, 3));
  EXPECT_EQ(brute_force(inst).status, Status::Infeasible);
}

TEST(BruteForce, RejectsTooManyBinaries) {
  MilpInstance inst;
  for (int k = 0; k < 13; ++k) inst.add_column(col("b" + std::to_string(k), 0, 1, 1, true));
  EXPECT_THROW(brute_force(inst), std::invalid_argument);
}

TEST(BruteForce, ParallelEqualsSerial) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    MilpInstance inst = random_milp(seed, 6, 8, 8);
    Solution par = brute_force(inst);
    Solution ser = brute_force_serial(inst);
    ASSERT_EQ(par.status, ser.status);
    EXPECT_EQ(par.objective, ser.objective);
    EXPECT_EQ(par.values, ser.values);
  }
}

TEST(Solve, AgreesWithBruteForceOnRandomMilps) {
  int optimal = 0;
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    MilpInstance inst = random_milp(seed, 6, 10, 8);
    Solution bb = solve(inst, exact_gap());
    Solution bf = brute_force(inst);
    ASSERT_EQ(bb.status, bf.status) << "seed " << seed;
    if (bb.status != Status::Optimal) continue;
    ++optimal;
    EXPECT_NEAR(bb.objective, bf.objective, 1e-8 * std::max(1.0, std::abs(bf.objective)))
        << "seed " << seed;
    EXPECT_TRUE(is_feasible(inst, bb.values)) << "seed " << seed;
  }
  EXPECT_GT(optimal, 30);
}

TEST(Solve, DeterministicAcrossRuns) {
  MilpInstance inst = random_milp(11, 8, 12, 10);
  Solution a = solve(inst);
  Solution b = solve(inst);
  EXPECT_EQ(a.status, b.status);
  EXPECT_EQ(a.objective, b.objective);
  EXPECT_EQ(a.values, b.values);
  EXPECT_EQ(a.nodes, b.nodes);
}

TEST(Solve, ReportedGapNeverIncreases) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Solution s = solve(random_milp(seed, 8, 12, 10), exact_gap());
    for (size_t k = 1; k < s.progress.size(); ++k) {
      EXPECT_LE(s.progress[k].gap, s.progress[k - 1].gap) << "seed " << seed;
      EXPECT_LE(s.progress[k].bound, s.progress[k - 1].bound) << "seed " << seed;
    }
    if (s.status == Status::Optimal) {
      EXPECT_LE(s.gap, 1e-9);
    }
  }
}

TEST(Solve, NodeLimitKeepsIncumbent) {
  MilpInstance inst = knapsack();
  SolveOptions o;
  o.node_limit = 1;
  Solution s = solve(inst, o);
  EXPECT_EQ(s.status, Status::Limit);
}

TEST(ExportMps, SectionsInOrder) {
  std::string text = export_mps(knapsack()).text;
  std::vector<std::string> order = {"NAME", "ROWS", "COLUMNS", "RHS", "BOUNDS", "ENDATA"};
  size_t at = 0;
  for (const auto& section : order) {
    size_t found = text.find("\n" + section, at);
    ASSERT_NE(found, std::string::npos) << section;
    at = found + 1;
  }
  EXPECT_EQ(text.find("RANGES"), std::string::npos);
  EXPECT_NE(text.find("'INTORG'"), std::string::npos);
  EXPECT_NE(text.find("'INTEND'"), std::string::npos);
}

TEST(ExportMps, EmptyConstraintSetHasOnlyObjectiveRow) {
  MilpInstance inst;
  inst.add_column(col("x", 0, 4, 2));
  std::string text = export_mps(inst).text;
  size_t rows = text.find("ROWS\n");
  size_t columns = text.find("COLUMNS\n");
  EXPECT_EQ(text.substr(rows, columns - rows), "ROWS\n N  OBJ\n");
}

TEST(ExportMps, LongNamesRenamedWithMap) {
  MilpInstance inst;
  inst.add_column(col("FIn(raw,a1,3)", 0, 4, 2));
  inst.add_row(row("couple(raw,a1,3)", {{0, 1}}, Sense::LessEqual, 3));
  ExportResult r = export_mps(inst);
  EXPECT_NE(r.text.find("C0000001"), std::string::npos);
  EXPECT_NE(r.text.find("R0000001"), std::string::npos);
  ASSERT_EQ(r.name_map.size(), 2u);
  EXPECT_EQ(r.name_map[0].second, "FIn(raw,a1,3)");
  EXPECT_EQ(r.name_map_text(), "C0000001 FIn(raw,a1,3)\nR0000001 couple(raw,a1,3)\n");
}

TEST(ExportMps, RoundTripAndByteIdenticalReExport) {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    MilpInstance inst = random_milp(seed, 6, 8, 6);
    std::string text = export_mps(inst).text;
    EXPECT_EQ(text, export_mps(inst).text);
    MilpInstance back = read_mps(text);
    EXPECT_EQ(export_mps(back).text, text);
    Solution a = solve(inst, exact_gap());
    Solution b = solve(back, exact_gap());
    ASSERT_EQ(a.status, b.status);
    if (a.status == Status::Optimal) {
      EXPECT_NEAR(a.objective, b.objective, 1e-6 * std::max(1.0, std::abs(a.objective)));
    }
  }
}

TEST(ExportLp, RendersRowsAndHeader) {
  MilpInstance inst;
  inst.add_column(col("x", 0, 1, 1, true));
  inst.add_column(col("y", 0, 1, 1, true));
  inst.add_row(row("c1", {{0, 1}, {1, 1}}, Sense::LessEqual, 1.5));
  std::string text = export_lp_text(inst).text;
  EXPECT_NE(text.find("\nMaximize\n"), std::string::npos);
  EXPECT_NE(text.find(" c1: +1 x + 1 y <= 1.5\n"), std::string::npos);
  EXPECT_NE(text.find("Binaries\n x\n y\n"), std::string::npos);
}

TEST(ExportLp, RoundTripAndByteIdenticalReExport) {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    MilpInstance inst = random_milp(seed, 6, 8, 6);
    inst.columns[0].lower = -kInf;
    inst.columns[1].lower = -2.5;
    std::string text = export_lp_text(inst).text;
    MilpInstance back = read_lp(text);
    EXPECT_EQ(export_lp_text(back).text, text);
    Solution a = solve(inst, exact_gap());
    Solution b = solve(back, exact_gap());
    ASSERT_EQ(a.status, b.status);
    if (a.status == Status::Optimal) {
      EXPECT_NEAR(a.objective, b.objective, 1e-6 * std::max(1.0, std::abs(a.objective)));
    }
  }
}

TEST(FormatNumber, ShortestRoundTrip) {
  EXPECT_EQ(format_number(1.5), "1.5");
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(-3.0), "-3");
  EXPECT_EQ(format_number(1.0 / 3.0, 12).size(), 12u);
  EXPECT_NEAR(std::stod(format_number(1.0 / 3.0, 12)), 1.0 / 3.0, 1e-10);
}

}  // namespace
}  // namespace scdr::milp
