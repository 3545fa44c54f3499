#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace scdr::milp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Sense { LessEqual, Equal, GreaterEqual };

const char* to_string(Sense sense);

struct Column {
  std::string name;
  double lower = 0.0;
  double upper = kInf;
  double objective = 0.0;
  bool binary = false;
};

struct Row {
  std::string name;
  std::vector<std::pair<int, double>> entries;  // (column, coefficient), ascending column
  Sense sense = Sense::Equal;
  double rhs = 0.0;
};

/// Thrown when an instance cannot be assembled (bad config, big-M without
/// a finite bound, malformed entries).
class BuildError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sparse MILP in maximization form.
struct MilpInstance {
  std::string name = "scdr";
  std::vector<Column> columns;
  std::vector<Row> rows;

  int add_column(Column column);
  int add_row(Row row);

  int column_count() const { return static_cast<int>(columns.size()); }
  int row_count() const { return static_cast<int>(rows.size()); }
  int binary_count() const;
  long nonzero_count() const;

  /// Throws BuildError when an invariant is violated.
  void check() const;
};

enum class Status { Optimal, Feasible, Infeasible, Unbounded, Limit };

const char* to_string(Status status);

struct SolveOptions {
  double feasibility_tolerance = 1e-6;
  double integrality_tolerance = 1e-6;
  double relative_gap = 1e-6;
  double absolute_gap = 1e-9;
  long node_limit = 1'000'000;
  double time_limit_seconds = 3600.0;
  long iteration_limit = 0;  // per LP; 0 picks a size-dependent default
};

struct ProgressEvent {
  long nodes = 0;
  double incumbent = -kInf;
  double bound = kInf;
  double gap = kInf;
};

struct Solution {
  Status status = Status::Limit;
  double objective = 0.0;
  std::vector<double> values;
  double bound = kInf;  // best dual bound (maximization)
  double gap = kInf;
  long nodes = 0;
  long iterations = 0;
  double wall_seconds = 0.0;
  std::string diagnostic;

  // Filled by LP solves at optimality, in maximization sign.
  std::vector<double> reduced_costs;
  std::vector<double> row_duals;
  std::vector<std::int8_t> basic;  // 1 if the column is basic

  std::vector<ProgressEvent> progress;

  /// Optimal, feasible, and limit-with-incumbent solutions carry values.
  bool has_point() const { return !values.empty(); }
};

double objective_value(const MilpInstance& instance, const std::vector<double>& values);
double row_activity(const Row& row, const std::vector<double>& values);

struct ResidualReport {
  double worst_row = 0.0;     // max violation scaled by 1/(1+|rhs|)
  int worst_row_index = -1;
  double worst_bound = 0.0;   // max column bound violation
  double worst_integrality = 0.0;
};

ResidualReport residuals(const MilpInstance& instance, const std::vector<double>& values);

/// True when every row holds within tol·(1+|rhs|), bounds within tol and
/// binaries within tol of {0,1}.
bool is_feasible(const MilpInstance& instance, const std::vector<double>& values,
                 double tol = 1e-6);

}  // namespace scdr::milp
