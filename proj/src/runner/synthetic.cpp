#include "scdr/runner/synthetic.hpp"

namespace scdr::runner {

NetworkModel synthetic_network(int periods) {
  const int T = periods;
  NetworkModel m;
  m.time.period_count = T;
  m.time.period_hours = 12.0;
  m.materials = {"RA", "RB", "PX", "PY"};
  const int ra = 0, rb = 1, px = 2, py = 3;

  int s1 = add_node(m, "S1", NodeKind::Supplier, {ra});
  int s2 = add_node(m, "S2", NodeKind::Supplier, {rb});
  int p1 = add_node(m, "P1", NodeKind::Plant, {ra, px}, 200.0);
  int p2 = add_node(m, "P2", NodeKind::Plant, {ra, rb, py}, 200.0);
  int w1 = add_node(m, "W1", NodeKind::Warehouse, {px}, 300.0);
  int w2 = add_node(m, "W2", NodeKind::Warehouse, {px, py}, 300.0);
  int c1 = add_node(m, "C1", NodeKind::Customer, {px});
  int c2 = add_node(m, "C2", NodeKind::Customer, {px, py});
  int c3 = add_node(m, "C3", NodeKind::Customer, {py});

  add_arc(m, "a1", s1, p1, {ra}, 1);
  add_arc(m, "a2", s1, p2, {ra}, 2);
  add_arc(m, "a3", s2, p2, {rb}, 1);
  add_arc(m, "a4", p1, w1, {px}, 1);
  add_arc(m, "a5", p1, w2, {px}, 3);
  add_arc(m, "a6", p1, w2, {px}, 1, "air");
  add_arc(m, "a7", p2, w2, {py}, 1);
  add_arc(m, "a8", w1, c1, {px}, 1);
  add_arc(m, "a9", w2, c2, {px, py}, 1);
  add_arc(m, "a10", w2, c3, {py}, 2);

  for (int s : {s1, s2}) {
    m.nodes[s].supply[0].upper = constant_series(T, 60.0);
    m.nodes[s].supply[0].cost = constant_series(T, 10.0);
  }

  for (int n : {p1, p2, w1, w2}) {
    for (auto& inv : m.nodes[n].inventory) {
      inv.holding_cost = constant_series(T, 0.5);
      inv.buffer = constant_series(T, 10.0);
      inv.alpha = constant_series(T, 0.0);
      inv.shortfall_penalty = constant_series(T, 5.0);
      inv.deviation_penalty = 50.0;
      inv.initial = n == w1 || n == w2 ? 40.0 : 20.0;
    }
  }

  Recipe r1 = default_recipe(T, "R1");
  r1.coefficients = {{ra, -1.0}, {px, 1.0}};
  r1.upper = constant_series(T, 40.0);
  r1.cost = constant_series(T, 5.0);
  r1.duration.assign(T, 1);
  m.nodes[p1].recipes.push_back(r1);

  Recipe r2 = default_recipe(T, "R2");
  r2.coefficients = {{rb, -1.0}, {py, 1.0}};
  r2.upper = constant_series(T, 30.0);
  r2.cost = constant_series(T, 5.0);
  r2.duration.assign(T, 1);
  Recipe r3 = default_recipe(T, "R3");
  r3.coefficients = {{ra, -1.0}, {rb, -1.0}, {py, 2.0}};
  r3.upper = constant_series(T, 15.0);
  r3.cost = constant_series(T, 6.0);
  r3.duration.assign(T, 2);
  m.nodes[p2].recipes = {r2, r3};

  for (auto& a : m.arcs) {
    for (auto& am : a.materials) {
      am.upper = constant_series(T, 80.0);
      am.cost = constant_series(T, a.mode == "air" ? 8.0 : 1.0);
      am.fixed_cost = constant_series(T, a.mode == "air" ? 40.0 : 10.0);
      am.lower = constant_series(T, 5.0);
    }
  }

  for (int c : {c1, c2, c3}) {
    for (auto& d : m.nodes[c].demand) {
      d.price = constant_series(T, 100.0);
      d.late_penalty = constant_series(T, 20.0);
      d.cancel_penalty = constant_series(T, 500.0);
    }
  }
  // Sparse order book, scaled to the horizon so shorter models keep the
  // same rhythm.
  auto order = [&](int c, int mat, double at, double qty) {
    int t = static_cast<int>(at * T / 20.0);
    if (t < 1 || t >= T) return;
    m.nodes[c].demand[m.nodes[c].slot(mat)].quantity[t] += qty;
  };
  order(c1, px, 4, 60);
  order(c1, px, 9, 60);
  order(c1, px, 14, 60);
  order(c1, px, 18, 40);
  order(c2, px, 6, 40);
  order(c2, py, 8, 50);
  order(c2, py, 15, 50);
  order(c3, py, 11, 60);
  order(c3, py, 17, 40);
  return m;
}

}  // namespace scdr::runner
