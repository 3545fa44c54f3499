#include "scdr/milp/simplex.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>

namespace scdr::milp {

namespace {

enum class VarState : std::int8_t { Basic, AtLower, AtUpper, AtZero };

constexpr double kPivotTol = 1e-9;
constexpr double kDualTol = 1e-9;
constexpr double kPrimalTol = 1e-7;
constexpr double kHarrisSlack = 1e-9;
constexpr int kRefactorInterval = 100;
constexpr int kStallThreshold = 30;
constexpr int kMaxSlackResets = 5;

struct Eta {
  int row = 0;
  double pivot = 1.0;
  std::vector<std::pair<int, double>> others;  // off-pivot nonzeros of alpha
};

double initial_value(double lo, double up) {
  if (std::isfinite(lo)) return lo;
  if (std::isfinite(up)) return up;
  return 0.0;
}

VarState initial_state(double lo, double up) {
  if (std::isfinite(lo)) return VarState::AtLower;
  if (std::isfinite(up)) return VarState::AtUpper;
  return VarState::AtZero;
}

}  // namespace

class SimplexRun {
 public:
  SimplexRun(const LpSolver& lp, const std::vector<double>& lower,
             const std::vector<double>& upper, const SolveOptions& options,
             std::optional<std::chrono::steady_clock::time_point> deadline)
      : lp_(lp), m_(lp.m_), n_(lp.n_), options_(options), deadline_(deadline) {
    const int total = n_ + m_;
    lo_.resize(total);
    up_.resize(total);
    cost_.assign(total, 0.0);
    for (int j = 0; j < n_; ++j) {
      lo_[j] = lower[j];
      up_[j] = upper[j];
      cost_[j] = lp.cost_[j];
    }
    for (int i = 0; i < m_; ++i) {
      lo_[n_ + i] = lp.row_lower_[i];
      up_[n_ + i] = lp.row_upper_[i];
    }
    iteration_limit_ = options.iteration_limit > 0 ? options.iteration_limit
                                                   : 10000L + 20L * total;
  }

  Solution run() {
    Solution sol;
    for (int j = 0; j < n_; ++j) {
      if (lo_[j] > up_[j]) {
        sol.status = Status::Infeasible;
        sol.diagnostic = "contradictory column bounds";
        return sol;
      }
    }
    if (m_ == 0) return solve_without_rows();

    slack_basis();
    Status status = iterate();
    sol.status = status;
    sol.iterations = iterations_;
    sol.diagnostic = diagnostic_;
    if (status == Status::Optimal) fill_solution(sol);
    return sol;
  }

 private:
  // Column j of [A -I].
  template <typename F>
  void for_column(int j, F&& f) const {
    if (j < n_) {
      for (int k = lp_.col_start_[j]; k < lp_.col_start_[j + 1]; ++k)
        f(lp_.row_index_[k], lp_.value_[k]);
    } else {
      f(j - n_, -1.0);
    }
  }

  double dot_column(int j, const Eigen::VectorXd& y) const {
    double s = 0.0;
    for_column(j, [&](int i, double a) { s += a * y[i]; });
    return s;
  }

  Solution solve_without_rows() {
    Solution sol;
    sol.values.assign(n_, 0.0);
    sol.reduced_costs.assign(n_, 0.0);
    sol.basic.assign(n_, 0);
    for (int j = 0; j < n_; ++j) {
      double obj = -cost_[j];
      double v;
      if (obj > 0) v = up_[j];
      else if (obj < 0) v = lo_[j];
      else v = initial_value(lo_[j], up_[j]);
      if (!std::isfinite(v)) {
        sol.status = Status::Unbounded;
        sol.values.clear();
        return sol;
      }
      sol.values[j] = v;
      sol.reduced_costs[j] = obj;
    }
    sol.status = Status::Optimal;
    sol.objective = 0.0;
    for (int j = 0; j < n_; ++j) sol.objective += -cost_[j] * sol.values[j];
    sol.bound = sol.objective;
    sol.gap = 0.0;
    return sol;
  }

  void slack_basis() {
    const int total = n_ + m_;
    x_.assign(total, 0.0);
    state_.assign(total, VarState::AtLower);
    head_.resize(m_);
    for (int j = 0; j < n_; ++j) {
      state_[j] = initial_state(lo_[j], up_[j]);
      x_[j] = initial_value(lo_[j], up_[j]);
    }
    for (int i = 0; i < m_; ++i) {
      head_[i] = n_ + i;
      state_[n_ + i] = VarState::Basic;
    }
  }

  bool factor() {
    etas_.clear();
    std::vector<Eigen::Triplet<double>> triplets;
    for (int r = 0; r < m_; ++r)
      for_column(head_[r], [&](int i, double a) { triplets.emplace_back(i, r, a); });
    Eigen::SparseMatrix<double> basis(m_, m_);
    basis.setFromTriplets(triplets.begin(), triplets.end());
    basis.makeCompressed();
    lu_.analyzePattern(basis);
    lu_.factorize(basis);
    return lu_.info() == Eigen::Success;
  }

  void ftran(Eigen::VectorXd& v) const {
    v = lu_.solve(v);
    for (const Eta& e : etas_) {
      double vr = v[e.row] / e.pivot;
      v[e.row] = vr;
      if (vr != 0.0)
        for (const auto& [i, a] : e.others) v[i] -= a * vr;
    }
  }

  void btran(Eigen::VectorXd& c) {
    for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
      double s = c[it->row];
      for (const auto& [i, a] : it->others) s -= a * c[i];
      c[it->row] = s / it->pivot;
    }
    Eigen::VectorXd y = lu_.transpose().solve(c);
    c = y;
  }

  void compute_basic_values() {
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m_);
    for (int j = 0; j < n_ + m_; ++j) {
      if (state_[j] == VarState::Basic || x_[j] == 0.0) continue;
      double xj = x_[j];
      for_column(j, [&](int i, double a) { rhs[i] -= a * xj; });
    }
    ftran(rhs);
    for (int r = 0; r < m_; ++r) x_[head_[r]] = rhs[r];
  }

  // Refactorizes; a singular basis falls back to the slack basis.
  bool refresh() {
    if (!factor()) {
      if (++slack_resets_ > kMaxSlackResets) {
        diagnostic_ = "repeated singular basis";
        return false;
      }
      for (int r = 0; r < m_; ++r) {
        int j = head_[r];
        if (j < n_) {
          state_[j] = initial_state(lo_[j], up_[j]);
          x_[j] = initial_value(lo_[j], up_[j]);
        }
      }
      slack_basis_keep_nonbasic();
      if (!factor()) {
        diagnostic_ = "slack basis factorization failed";
        return false;
      }
    }
    compute_basic_values();
    return true;
  }

  void slack_basis_keep_nonbasic() {
    for (int i = 0; i < m_; ++i) {
      head_[i] = n_ + i;
      state_[n_ + i] = VarState::Basic;
    }
  }

  bool out_of_time() const {
    return deadline_ && std::chrono::steady_clock::now() > *deadline_;
  }

  Status iterate() {
    if (!refresh()) return Status::Limit;
    bool fresh = true;
    bool bland = false;
    int degenerate = 0;
    Eigen::VectorXd y(m_), alpha(m_);
    std::vector<double> phase_cost(m_);

    for (;;) {
      if (iterations_ >= iteration_limit_) {
        diagnostic_ = "iteration limit";
        return Status::Limit;
      }
      if ((iterations_ & 63) == 0 && out_of_time()) {
        diagnostic_ = "time limit";
        return Status::Limit;
      }
      if (static_cast<int>(etas_.size()) >= kRefactorInterval) {
        if (!refresh()) return Status::Limit;
        fresh = true;
      }

      bool infeasible = false;
      for (int r = 0; r < m_; ++r) {
        int j = head_[r];
        double c = 0.0;
        if (x_[j] < lo_[j] - kPrimalTol) c = -1.0;
        else if (x_[j] > up_[j] + kPrimalTol) c = 1.0;
        if (c != 0.0) infeasible = true;
        phase_cost[r] = c;
      }
      for (int r = 0; r < m_; ++r) y[r] = infeasible ? phase_cost[r] : cost_[head_[r]];
      btran(y);

      // Pricing.
      int enter = -1;
      double enter_dir = 0.0;
      double best_score = 0.0;
      for (int j = 0; j < n_ + m_; ++j) {
        VarState s = state_[j];
        if (s == VarState::Basic || lo_[j] == up_[j]) continue;
        double d = (infeasible ? 0.0 : cost_[j]) - dot_column(j, y);
        double dir = 0.0;
        if (s == VarState::AtLower && d < -kDualTol) dir = 1.0;
        else if (s == VarState::AtUpper && d > kDualTol) dir = -1.0;
        else if (s == VarState::AtZero && std::abs(d) > kDualTol) dir = d < 0 ? 1.0 : -1.0;
        if (dir == 0.0) continue;
        if (bland) {
          enter = j;
          enter_dir = dir;
          break;
        }
        if (std::abs(d) > best_score) {
          best_score = std::abs(d);
          enter = j;
          enter_dir = dir;
        }
      }

      if (enter < 0) {
        if (!fresh) {
          if (!refresh()) return Status::Limit;
          fresh = true;
          continue;
        }
        return infeasible ? Status::Infeasible : Status::Optimal;
      }

      alpha.setZero();
      for_column(enter, [&](int i, double a) { alpha[i] = a; });
      ftran(alpha);

      // Ratio test. Basic r moves at rate -dir*alpha[r] per unit step.
      const double span = up_[enter] - lo_[enter];
      int leave = -1;
      bool leave_at_upper = false;
      double theta = kInf;

      auto breakpoint = [&](int r, double slack, double& t, bool& at_upper) {
        int j = head_[r];
        double rate = -enter_dir * alpha[r];
        double xj = x_[j];
        if (rate < 0) {
          double bound;
          if (infeasible && xj > up_[j] + kPrimalTol) {
            bound = up_[j];
            at_upper = true;
          } else if (std::isfinite(lo_[j]) && xj >= lo_[j] - kPrimalTol) {
            bound = lo_[j] - slack;
            at_upper = false;
          } else {
            return false;
          }
          t = std::max(0.0, (xj - bound) / -rate);
          return true;
        }
        double bound;
        if (infeasible && xj < lo_[j] - kPrimalTol) {
          bound = lo_[j];
          at_upper = false;
        } else if (std::isfinite(up_[j]) && xj <= up_[j] + kPrimalTol) {
          bound = up_[j] + slack;
          at_upper = true;
        } else {
          return false;
        }
        t = std::max(0.0, (bound - xj) / rate);
        return true;
      };

      if (bland) {
        for (int r = 0; r < m_; ++r) {
          if (std::abs(alpha[r]) <= kPivotTol) continue;
          double t;
          bool at_upper;
          if (!breakpoint(r, 0.0, t, at_upper)) continue;
          if (t < theta - 1e-12 || (t <= theta + 1e-12 && leave >= 0 && head_[r] < head_[leave])) {
            theta = t;
            leave = r;
            leave_at_upper = at_upper;
          }
        }
      } else {
        double relaxed = kInf;
        for (int r = 0; r < m_; ++r) {
          if (std::abs(alpha[r]) <= kPivotTol) continue;
          double t;
          bool at_upper;
          if (breakpoint(r, kHarrisSlack, t, at_upper)) relaxed = std::min(relaxed, t);
        }
        double best_alpha = 0.0;
        for (int r = 0; r < m_ && std::isfinite(relaxed); ++r) {
          if (std::abs(alpha[r]) <= kPivotTol) continue;
          double t;
          bool at_upper;
          if (!breakpoint(r, 0.0, t, at_upper) || t > relaxed) continue;
          if (std::abs(alpha[r]) > best_alpha) {
            best_alpha = std::abs(alpha[r]);
            leave = r;
            leave_at_upper = at_upper;
            theta = t;
          }
        }
      }

      bool flip = std::isfinite(span) && span <= theta;
      if (flip) theta = span;
      if (leave < 0 && !flip) {
        if (!fresh) {
          if (!refresh()) return Status::Limit;
          fresh = true;
          continue;
        }
        if (infeasible) {
          diagnostic_ = "phase 1 direction without blocking variable";
          return Status::Limit;
        }
        return Status::Unbounded;
      }

      ++iterations_;
      fresh = false;
      if (theta <= 1e-12) {
        if (++degenerate > kStallThreshold) bland = true;
      } else {
        degenerate = 0;
        bland = false;
      }

      if (theta != 0.0) {
        x_[enter] += enter_dir * theta;
        for (int r = 0; r < m_; ++r)
          if (alpha[r] != 0.0) x_[head_[r]] -= enter_dir * theta * alpha[r];
      }

      if (flip) {
        state_[enter] = enter_dir > 0 ? VarState::AtUpper : VarState::AtLower;
        x_[enter] = enter_dir > 0 ? up_[enter] : lo_[enter];
        continue;
      }

      int out = head_[leave];
      state_[out] = leave_at_upper ? VarState::AtUpper : VarState::AtLower;
      x_[out] = leave_at_upper ? up_[out] : lo_[out];
      state_[enter] = VarState::Basic;
      head_[leave] = enter;

      Eta eta;
      eta.row = leave;
      eta.pivot = alpha[leave];
      for (int r = 0; r < m_; ++r)
        if (r != leave && alpha[r] != 0.0) eta.others.emplace_back(r, alpha[r]);
      etas_.push_back(std::move(eta));
    }
  }

  void fill_solution(Solution& sol) {
    sol.values.assign(x_.begin(), x_.begin() + n_);
    // Nonbasic values sit exactly on their bounds; clamp basic noise too.
    for (int j = 0; j < n_; ++j) sol.values[j] = std::clamp(sol.values[j], lo_[j], up_[j]);
    Eigen::VectorXd y(m_);
    for (int r = 0; r < m_; ++r) y[r] = cost_[head_[r]];
    btran(y);
    sol.row_duals.resize(m_);
    for (int i = 0; i < m_; ++i) sol.row_duals[i] = -y[i];
    sol.reduced_costs.resize(n_);
    sol.basic.assign(n_, 0);
    for (int j = 0; j < n_; ++j) {
      sol.reduced_costs[j] = -(cost_[j] - dot_column(j, y));
      sol.basic[j] = state_[j] == VarState::Basic ? 1 : 0;
    }
    double obj = 0.0;
    for (int j = 0; j < n_; ++j) obj += -cost_[j] * sol.values[j];
    sol.objective = obj;
    sol.bound = obj;
    sol.gap = 0.0;
  }

  const LpSolver& lp_;
  int m_;
  int n_;
  SolveOptions options_;
  std::optional<std::chrono::steady_clock::time_point> deadline_;
  long iteration_limit_ = 0;
  long iterations_ = 0;
  int slack_resets_ = 0;
  std::string diagnostic_;

  std::vector<double> lo_, up_, cost_, x_;
  std::vector<VarState> state_;
  std::vector<int> head_;
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu_;
  std::vector<Eta> etas_;
};

LpSolver::LpSolver(const MilpInstance& instance)
    : m_(instance.row_count()), n_(instance.column_count()) {
  col_start_.assign(n_ + 1, 0);
  for (const auto& row : instance.rows)
    for (const auto& [j, a] : row.entries)
      if (a != 0.0) ++col_start_[j + 1];
  for (int j = 0; j < n_; ++j) col_start_[j + 1] += col_start_[j];
  row_index_.resize(col_start_[n_]);
  value_.resize(col_start_[n_]);
  std::vector<int> fill(col_start_.begin(), col_start_.end() - 1);
  for (int i = 0; i < m_; ++i) {
    for (const auto& [j, a] : instance.rows[i].entries) {
      if (a == 0.0) continue;
      row_index_[fill[j]] = i;
      value_[fill[j]] = a;
      ++fill[j];
    }
  }
  cost_.resize(n_);
  col_lower_.resize(n_);
  col_upper_.resize(n_);
  for (int j = 0; j < n_; ++j) {
    const Column& c = instance.columns[j];
    cost_[j] = -c.objective;
    col_lower_[j] = c.lower;
    col_upper_[j] = c.upper;
  }
  row_lower_.resize(m_);
  row_upper_.resize(m_);
  for (int i = 0; i < m_; ++i) {
    const Row& r = instance.rows[i];
    row_lower_[i] = r.sense == Sense::LessEqual ? -kInf : r.rhs;
    row_upper_[i] = r.sense == Sense::GreaterEqual ? kInf : r.rhs;
  }
}

Solution LpSolver::solve(const std::vector<double>& lower, const std::vector<double>& upper,
                         const SolveOptions& options,
                         std::optional<std::chrono::steady_clock::time_point> deadline) const {
  auto start = std::chrono::steady_clock::now();
  SimplexRun run(*this, lower, upper, options, deadline);
  Solution sol = run.run();
  sol.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return sol;
}

Solution LpSolver::solve(const SolveOptions& options) const {
  return solve(col_lower_, col_upper_, options);
}

Solution solve_lp(const MilpInstance& instance, const SolveOptions& options) {
  instance.check();
  LpSolver solver(instance);
  return solver.solve(options);
}

}  // namespace scdr::milp
