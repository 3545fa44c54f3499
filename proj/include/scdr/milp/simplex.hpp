#pragma once

#include <chrono>
#include <optional>
#include <vector>

#include "scdr/milp/instance.hpp"

namespace scdr::milp {

/// Bounded-variable revised primal simplex over the LP relaxation of an
/// instance. The constraint matrix is stored once; `solve` is const and keeps
/// its working state local, so one solver may serve several threads.
class LpSolver {
 public:
  explicit LpSolver(const MilpInstance& instance);

  /// Solves with the given column bounds (same length as the column list).
  Solution solve(const std::vector<double>& lower, const std::vector<double>& upper,
                 const SolveOptions& options,
                 std::optional<std::chrono::steady_clock::time_point> deadline = {}) const;

  Solution solve(const SolveOptions& options) const;

  int rows() const { return m_; }
  int cols() const { return n_; }

 private:
  friend class SimplexRun;

  int m_ = 0;
  int n_ = 0;
  std::vector<int> col_start_;  // CSC of the structural columns
  std::vector<int> row_index_;
  std::vector<double> value_;
  std::vector<double> cost_;  // minimization costs (negated objective)
  std::vector<double> row_lower_;
  std::vector<double> row_upper_;
  std::vector<double> col_lower_;
  std::vector<double> col_upper_;
};

/// LP relaxation: binaries are treated as continuous in their bounds.
Solution solve_lp(const MilpInstance& instance, const SolveOptions& options = {});

}  // namespace scdr::milp
