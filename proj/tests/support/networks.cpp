#include "support/networks.hpp"

#include <random>

#include "scdr/formulation/build.hpp"

namespace scdr::testing {

NetworkModel minimal_chain(int periods) {
  NetworkModel m;
  m.time.period_count = periods;
  m.materials = {"raw", "prod"};
  const int raw = 0, prod = 1;
  int s = add_node(m, "S", NodeKind::Supplier, {raw});
  int p = add_node(m, "P", NodeKind::Plant, {raw, prod}, 100.0);
  int c = add_node(m, "C", NodeKind::Customer, {prod});
  add_arc(m, "a1", s, p, {raw}, 1);
  add_arc(m, "a2", p, c, {prod}, 1);

  auto& sup = m.nodes[s].supply[0];
  sup.upper = constant_series(periods, 100.0);
  sup.cost = constant_series(periods, 1.0);

  for (auto& inv : m.nodes[p].inventory) {
    inv.holding_cost = constant_series(periods, 0.1);
    inv.initial = 10.0;
    inv.deviation_penalty = 1.0;
  }

  Recipe r = default_recipe(periods, "r1");
  r.coefficients = {{raw, -1.0}, {prod, 1.0}};
  r.upper = constant_series(periods, 20.0);
  r.cost = constant_series(periods, 1.0);
  r.duration.assign(periods, 1);
  m.nodes[p].recipes.push_back(r);

  auto& d = m.nodes[c].demand[0];
  d.quantity = constant_series(periods, 5.0);
  d.price = constant_series(periods, 20.0);
  d.late_penalty = constant_series(periods, 2.0);
  d.cancel_penalty = constant_series(periods, 50.0);
  d.backlog = 5.0;  // the period-0 order is carried as backlog

  for (auto& a : m.arcs) {
    a.materials[0].upper = constant_series(periods, 50.0);
    a.materials[0].cost = constant_series(periods, 1.0);
    a.materials[0].fixed_cost = constant_series(periods, 5.0);
  }
  return m;
}

NetworkModel motivating_topology(int periods) {
  NetworkModel m;
  m.time.period_count = periods;
  m.materials = {"RawA", "RawB", "FluidF", "BlendA", "SR1"};
  const int ra = 0, rb = 1, ff = 2, ba = 3, sr = 4;
  int s1 = add_node(m, "SupplierA", NodeKind::Supplier, {ra});
  int s2 = add_node(m, "SupplierB", NodeKind::Supplier, {rb});
  int p1 = add_node(m, "Plant1", NodeKind::Plant, {ra, rb, ff, ba}, 500.0);
  int w1 = add_node(m, "Warehouse1", NodeKind::Warehouse, {ff, ba}, 500.0);
  int w2 = add_node(m, "Warehouse2", NodeKind::Warehouse, {ff, ba}, 500.0);
  int p2 = add_node(m, "Plant2", NodeKind::Plant, {ff, sr}, 500.0);
  int cdp = add_node(m, "CustDirect", NodeKind::Customer, {ba});
  int cw1 = add_node(m, "CustW1", NodeKind::Customer, {ba});
  int cw2 = add_node(m, "CustW2", NodeKind::Customer, {ba});
  int csr = add_node(m, "CustSR", NodeKind::Customer, {sr});

  add_arc(m, "sa_p1", s1, p1, {ra}, 1);
  add_arc(m, "sb_p1", s2, p1, {rb}, 1);
  add_arc(m, "p1_w1", p1, w1, {ff, ba}, 1);
  add_arc(m, "p1_cd", p1, cdp, {ba}, 1);
  add_arc(m, "w1_cw1", w1, cw1, {ba}, 0);
  add_arc(m, "w1_w2_sea", w1, w2, {ff, ba}, 3, "marine");
  add_arc(m, "w1_w2_air", w1, w2, {ff, ba}, 1, "air");
  add_arc(m, "w2_cw2", w2, cw2, {ba}, 0);
  add_arc(m, "w2_p2", w2, p2, {ff}, 1);
  add_arc(m, "p2_csr", p2, csr, {sr}, 1);

  Recipe r1 = default_recipe(periods, "fluid");
  r1.coefficients = {{ra, -1.0}, {rb, -1.0}, {ff, 1.0}};
  r1.upper = constant_series(periods, 40.0);
  Recipe r2 = default_recipe(periods, "blend");
  r2.coefficients = {{ra, -1.0}, {ba, 1.0}};
  r2.upper = constant_series(periods, 40.0);
  m.nodes[p1].recipes = {r1, r2};
  Recipe r3 = default_recipe(periods, "sr");
  r3.coefficients = {{ff, -1.0}, {sr, 1.0}};
  r3.upper = constant_series(periods, 40.0);
  m.nodes[p2].recipes = {r3};

  for (int c : {cdp, cw1, cw2, csr}) {
    auto& d = m.nodes[c].demand[0];
    d.price = constant_series(periods, 50.0);
    d.late_penalty = constant_series(periods, 5.0);
    d.cancel_penalty = constant_series(periods, 200.0);
    d.quantity[periods / 2] = 10.0;
  }
  for (int s : {s1, s2}) m.nodes[s].supply[0].cost = constant_series(periods, 5.0);
  for (auto& a : m.arcs)
    for (auto& am : a.materials) am.cost = constant_series(periods, a.mode == "air" ? 4.0 : 1.0);
  return m;
}

namespace {

int uniform(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

bool coin(std::mt19937_64& rng, double p) { return std::bernoulli_distribution(p)(rng); }

Series random_series(std::mt19937_64& rng, int T, int lo, int hi) {
  Series s(T);
  for (auto& v : s) v = uniform(rng, lo, hi);
  return s;
}

// Counts binaries not fixed by their bounds.
long free_binaries(const milp::MilpInstance& inst) {
  long n = 0;
  for (const auto& c : inst.columns)
    if (c.binary && c.lower != c.upper) ++n;
  return n;
}

TinyCase draw(std::mt19937_64& rng) {
  using formulation::FloorMode;
  using formulation::SlaMode;
  using formulation::TerminalMode;
  const int T = uniform(rng, 2, 3);
  NetworkModel m;
  m.time.period_count = T;
  m.materials = {"raw", "prod"};
  const bool warehouse = coin(rng, 0.3);
  int s = add_node(m, "S", NodeKind::Supplier, {0});
  int p = add_node(m, "P", NodeKind::Plant, {0, 1}, uniform(rng, 10, 40));
  int w = warehouse ? add_node(m, "W", NodeKind::Warehouse, {1}, uniform(rng, 10, 40)) : -1;
  int c = add_node(m, "C", NodeKind::Customer, {1});
  add_arc(m, "a1", s, p, {0}, uniform(rng, 0, 1));
  if (warehouse) {
    add_arc(m, "a2", p, w, {1}, uniform(rng, 0, 1));
    add_arc(m, "a3", w, c, {1}, 0);
  } else {
    add_arc(m, "a2", p, c, {1}, uniform(rng, 0, 1));
  }

  TinyCase tc;
  auto& cfg = tc.config;
  cfg.patp = coin(rng, 0.3);
  cfg.ftc = coin(rng, 0.3);
  cfg.sla = coin(rng, 0.25) ? (coin(rng, 0.5) ? SlaMode::Simple : SlaMode::Window) : SlaMode::Off;
  cfg.terminal = coin(rng, 0.5) ? TerminalMode::Fid : TerminalMode::Hard;
  cfg.inventory_floor = coin(rng, 0.25) ? FloorMode::Nid : FloorMode::Hard;
  cfg.shared_volume = coin(rng, 0.2);
  cfg.enforce_u_upper = coin(rng, 0.2);

  auto& sup = m.nodes[s].supply[0];
  sup.upper = random_series(rng, T, 5, 30);
  sup.cost = random_series(rng, T, 0, 3);
  sup.sla_minimum = random_series(rng, T, 0, 8);
  sup.sla_window.assign(T, uniform(rng, 0, 1));
  m.nodes[s].sla_required = cfg.sla != SlaMode::Off;

  for (int n : {p, w}) {
    if (n < 0) continue;
    for (auto& inv : m.nodes[n].inventory) {
      inv.initial = uniform(rng, 0, static_cast<int>(inv.upper[0]));
      inv.holding_cost = random_series(rng, T, 0, 1);
      inv.buffer = random_series(rng, T, 0, 8);
      inv.alpha = constant_series(T, coin(rng, 0.5) ? 0.5 : 0.0);
      inv.shortfall_penalty = random_series(rng, T, 1, 4);
      inv.deviation_penalty = uniform(rng, 1, 5);
    }
    if (cfg.shared_volume && coin(rng, 0.7)) m.nodes[n].volume = random_series(rng, T, 20, 60);
  }

  Recipe r = default_recipe(T, "r1");
  r.coefficients = {{0, -uniform(rng, 1, 2)}, {1, 1.0}};
  r.upper = random_series(rng, T, 5, 20);
  r.cost = random_series(rng, T, 0, 3);
  r.duration.assign(T, uniform(rng, 0, 1));
  m.nodes[p].recipes.push_back(r);

  auto& d = m.nodes[c].demand[0];
  d.price = random_series(rng, T, 5, 25);
  d.late_penalty = random_series(rng, T, 0, 6);
  d.cancel_penalty = random_series(rng, T, 0, 60);
  d.unmet_upper = random_series(rng, T, 5, 20);
  for (int t = 1; t < T; ++t)
    if (coin(rng, 0.7)) d.quantity[t] = uniform(rng, 1, 15);
  d.no_late = cfg.terminal == TerminalMode::Fid && coin(rng, 0.1);

  for (auto& a : m.arcs) {
    auto& am = a.materials[0];
    am.upper = random_series(rng, T, 5, 30);
    am.lower = random_series(rng, T, 0, 4);
    am.cost = random_series(rng, T, 0, 2);
    am.fixed_cost = random_series(rng, T, 0, 10);
  }
  tc.model = std::move(m);
  return tc;
}

}  // namespace

TinyCase random_tiny_case(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (;;) {
    TinyCase tc = draw(rng);
    if (!validate(tc.model).ok()) continue;
    auto built = formulation::build(tc.model, tc.config);
    if (built.instance.column_count() <= 40 && free_binaries(built.instance) <= 12) return tc;
  }
}

}  // namespace scdr::testing
