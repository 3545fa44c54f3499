#include "scdr/milp/branch_and_bound.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <queue>
#include <stdexcept>

#include "scdr/milp/simplex.hpp"

namespace scdr::milp {

namespace {

using Clock = std::chrono::steady_clock;

struct Node {
  double bound = kInf;
  long sequence = 0;
  std::vector<std::int8_t> fixing;  // per binary: -1 free, 0 or 1 fixed
};

struct WorseNode {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound < b.bound;
    return a.sequence > b.sequence;
  }
};

double prune_tolerance(double incumbent, const SolveOptions& options) {
  return std::max(options.absolute_gap,
                  options.relative_gap * std::max(1.0, std::abs(incumbent)));
}

double relative_gap(double bound, double incumbent) {
  if (!std::isfinite(incumbent)) return kInf;
  return std::max(0.0, bound - incumbent) / std::max(1.0, std::abs(incumbent));
}

std::vector<int> binary_columns(const MilpInstance& instance) {
  std::vector<int> out;
  for (int j = 0; j < instance.column_count(); ++j)
    if (instance.columns[j].binary) out.push_back(j);
  return out;
}

void apply_fixing(const std::vector<int>& binaries, const std::vector<std::int8_t>& fixing,
                  std::vector<double>& lo, std::vector<double>& up) {
  for (size_t k = 0; k < binaries.size(); ++k) {
    if (fixing[k] < 0) continue;
    lo[binaries[k]] = up[binaries[k]] = fixing[k];
  }
}

double elapsed(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

Solution solve(const MilpInstance& instance, const SolveOptions& options) {
  instance.check();
  const auto start = Clock::now();
  const auto deadline =
      start + std::chrono::duration_cast<Clock::duration>(
                  std::chrono::duration<double>(options.time_limit_seconds));
  LpSolver lp(instance);
  const std::vector<int> binaries = binary_columns(instance);
  std::vector<double> base_lo(instance.column_count()), base_up(instance.column_count());
  for (int j = 0; j < instance.column_count(); ++j) {
    base_lo[j] = instance.columns[j].lower;
    base_up[j] = instance.columns[j].upper;
  }

  Solution result;
  double incumbent = -kInf;
  double pruned_bound = -kInf;  // largest bound discarded by the gap tolerance
  long sequence = 0;
  bool hit_limit = false;

  std::priority_queue<Node, std::vector<Node>, WorseNode> open;
  open.push(Node{kInf, sequence++, std::vector<std::int8_t>(binaries.size(), -1)});

  auto record_progress = [&]() {
    double bound = open.empty() ? std::max(incumbent, pruned_bound) : open.top().bound;
    if (std::isfinite(incumbent)) bound = std::max(bound, incumbent);
    ProgressEvent ev{result.nodes, incumbent, bound, relative_gap(bound, incumbent)};
    if (!result.progress.empty()) {
      const ProgressEvent& last = result.progress.back();
      if (last.incumbent == ev.incumbent && last.bound == ev.bound) return;
    }
    result.progress.push_back(ev);
  };

  while (!open.empty()) {
    if (result.nodes >= options.node_limit || Clock::now() > deadline) {
      hit_limit = true;
      result.diagnostic = result.nodes >= options.node_limit ? "node limit" : "time limit";
      break;
    }
    Node node = open.top();
    open.pop();
    if (std::isfinite(incumbent) && node.bound <= incumbent + prune_tolerance(incumbent, options)) {
      // Best-bound order: everything still open is no better.
      pruned_bound = std::max(pruned_bound, node.bound);
      while (!open.empty()) open.pop();
      break;
    }
    ++result.nodes;

    std::vector<double> lo = base_lo, up = base_up;
    apply_fixing(binaries, node.fixing, lo, up);
    Solution relax = lp.solve(lo, up, options, deadline);
    result.iterations += relax.iterations;

    if (relax.status == Status::Infeasible) {
      record_progress();
      continue;
    }
    if (relax.status == Status::Unbounded) {
      result.status = Status::Unbounded;
      result.diagnostic = "LP relaxation unbounded";
      result.wall_seconds = elapsed(start);
      return result;
    }
    if (relax.status != Status::Optimal) {
      hit_limit = true;
      result.diagnostic = relax.diagnostic;
      break;
    }

    double bound = std::min(node.bound, relax.objective);
    if (std::isfinite(incumbent) && bound <= incumbent + prune_tolerance(incumbent, options)) {
      pruned_bound = std::max(pruned_bound, bound);
      record_progress();
      continue;
    }

    int branch = -1;
    double best_frac = options.integrality_tolerance;
    for (size_t k = 0; k < binaries.size(); ++k) {
      double v = relax.values[binaries[k]];
      double frac = std::min(v - std::floor(v), std::ceil(v) - v);
      if (frac > best_frac) {
        best_frac = frac;
        branch = static_cast<int>(k);
      }
    }

    if (branch < 0) {
      // Integral: re-solve with binaries fixed at their rounded values.
      std::vector<std::int8_t> rounded(binaries.size());
      for (size_t k = 0; k < binaries.size(); ++k)
        rounded[k] = static_cast<std::int8_t>(std::lround(relax.values[binaries[k]]));
      std::vector<double> plo = base_lo, pup = base_up;
      apply_fixing(binaries, rounded, plo, pup);
      Solution polished = lp.solve(plo, pup, options, deadline);
      result.iterations += polished.iterations;
      if (polished.status == Status::Optimal && polished.objective > incumbent) {
        incumbent = polished.objective;
        result.values = std::move(polished.values);
        result.objective = incumbent;
      }
      record_progress();
      continue;
    }

    Node down{bound, sequence++, node.fixing};
    down.fixing[branch] = 0;
    Node upper{bound, sequence++, node.fixing};
    upper.fixing[branch] = 1;
    open.push(std::move(down));
    open.push(std::move(upper));
    record_progress();
  }

  double open_bound = open.empty() ? -kInf : open.top().bound;
  result.bound = std::max({incumbent, pruned_bound, open_bound});
  result.wall_seconds = elapsed(start);
  if (hit_limit) {
    result.status = Status::Limit;
    result.gap = relative_gap(result.bound, incumbent);
    return result;
  }
  if (!std::isfinite(incumbent)) {
    result.status = Status::Infeasible;
    result.bound = -kInf;
    return result;
  }
  result.status = Status::Optimal;
  result.gap = relative_gap(result.bound, incumbent);
  record_progress();
  return result;
}

namespace {

struct Enumeration {
  std::vector<int> free;
  std::vector<double> lo, up;
};

Enumeration prepare(const MilpInstance& instance, int max_binaries) {
  instance.check();
  Enumeration e;
  e.lo.resize(instance.column_count());
  e.up.resize(instance.column_count());
  for (int j = 0; j < instance.column_count(); ++j) {
    const Column& c = instance.columns[j];
    e.lo[j] = c.lower;
    e.up[j] = c.upper;
    if (c.binary) {
      e.lo[j] = std::ceil(c.lower);
      e.up[j] = std::floor(c.upper);
      if (e.lo[j] < e.up[j]) e.free.push_back(j);
    }
  }
  if (static_cast<int>(e.free.size()) > max_binaries)
    throw std::invalid_argument("brute force: " + std::to_string(e.free.size()) +
                                " free binaries exceed the limit of " +
                                std::to_string(max_binaries));
  return e;
}

Solution evaluate(const LpSolver& lp, const Enumeration& e, long assignment,
                  const SolveOptions& options) {
  std::vector<double> lo = e.lo, up = e.up;
  for (size_t k = 0; k < e.free.size(); ++k) {
    double v = (assignment >> k) & 1L ? 1.0 : 0.0;
    lo[e.free[k]] = up[e.free[k]] = v;
  }
  return lp.solve(lo, up, options);
}

Solution reduce(std::vector<Solution>& results, Clock::time_point start) {
  Solution best;
  best.status = Status::Infeasible;
  best.objective = -kInf;
  long iterations = 0;
  bool unbounded = false;
  bool limit = false;
  int best_index = -1;
  for (size_t k = 0; k < results.size(); ++k) {
    const Solution& s = results[k];
    iterations += s.iterations;
    if (s.status == Status::Unbounded) unbounded = true;
    if (s.status == Status::Limit) limit = true;
    if (s.status == Status::Optimal && (best_index < 0 || s.objective > results[best_index].objective))
      best_index = static_cast<int>(k);
  }
  if (best_index >= 0) best = std::move(results[best_index]);
  if (unbounded) {
    best = Solution{};
    best.status = Status::Unbounded;
  } else if (best_index < 0) {
    best = Solution{};
    best.status = limit ? Status::Limit : Status::Infeasible;
  } else if (limit) {
    best.status = Status::Limit;
    best.diagnostic = "an assignment hit the LP iteration limit";
  }
  best.iterations = iterations;
  best.nodes = static_cast<long>(results.size());
  best.reduced_costs.clear();
  best.row_duals.clear();
  best.basic.clear();
  if (best.status == Status::Optimal) {
    best.bound = best.objective;
    best.gap = 0.0;
  }
  best.wall_seconds = elapsed(start);
  return best;
}

}  // namespace

Solution brute_force(const MilpInstance& instance, int max_binaries, const SolveOptions& options) {
  const auto start = Clock::now();
  Enumeration e = prepare(instance, max_binaries);
  LpSolver lp(instance);
  const long count = 1L << e.free.size();
  std::vector<Solution> results(count);
#pragma omp parallel for schedule(dynamic)
  for (long k = 0; k < count; ++k) results[k] = evaluate(lp, e, k, options);
  return reduce(results, start);
}

Solution brute_force_serial(const MilpInstance& instance, int max_binaries,
                            const SolveOptions& options) {
  const auto start = Clock::now();
  Enumeration e = prepare(instance, max_binaries);
  LpSolver lp(instance);
  const long count = 1L << e.free.size();
  std::vector<Solution> results(count);
  for (long k = 0; k < count; ++k) results[k] = evaluate(lp, e, k, options);
  return reduce(results, start);
}

}  // namespace scdr::milp
