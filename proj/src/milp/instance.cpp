#include "scdr/milp/instance.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace scdr::milp {

const char* to_string(Sense sense) {
  switch (sense) {
    case Sense::LessEqual: return "<=";
    case Sense::Equal: return "=";
    case Sense::GreaterEqual: return ">=";
  }
  return "?";
}

const char* to_string(Status status) {
  switch (status) {
    case Status::Optimal: return "optimal";
    case Status::Feasible: return "feasible";
    case Status::Infeasible: return "infeasible";
    case Status::Unbounded: return "unbounded";
    case Status::Limit: return "limit";
  }
  return "?";
}

int MilpInstance::add_column(Column column) {
  columns.push_back(std::move(column));
  return static_cast<int>(columns.size()) - 1;
}

int MilpInstance::add_row(Row row) {
  std::sort(row.entries.begin(), row.entries.end());
  rows.push_back(std::move(row));
  return static_cast<int>(rows.size()) - 1;
}

int MilpInstance::binary_count() const {
  return static_cast<int>(std::count_if(columns.begin(), columns.end(),
                                        [](const Column& c) { return c.binary; }));
}

long MilpInstance::nonzero_count() const {
  long total = 0;
  for (const auto& r : rows) total += static_cast<long>(r.entries.size());
  return total;
}

void MilpInstance::check() const {
  std::unordered_set<std::string> names;
  for (const auto& c : columns) {
    if (std::isnan(c.lower) || std::isnan(c.upper) || !std::isfinite(c.objective))
      throw BuildError("column '" + c.name + "': NaN or infinite data");
    if (c.lower > c.upper) throw BuildError("column '" + c.name + "': lower bound above upper bound");
    if (c.lower == kInf || c.upper == -kInf)
      throw BuildError("column '" + c.name + "': bounds exclude every finite value");
    if (c.binary && (c.lower < 0.0 || c.upper > 1.0))
      throw BuildError("column '" + c.name + "': binary bounds must lie in [0,1]");
    if (!names.insert(c.name).second) throw BuildError("duplicate column name '" + c.name + "'");
  }
  names.clear();
  const int n = column_count();
  for (const auto& r : rows) {
    if (!std::isfinite(r.rhs)) throw BuildError("row '" + r.name + "': rhs not finite");
    int previous = -1;
    for (const auto& [j, a] : r.entries) {
      if (j < 0 || j >= n) throw BuildError("row '" + r.name + "': column index out of range");
      if (j == previous) throw BuildError("row '" + r.name + "': repeated column");
      if (!std::isfinite(a)) throw BuildError("row '" + r.name + "': coefficient not finite");
      previous = j;
    }
    if (!names.insert(r.name).second) throw BuildError("duplicate row name '" + r.name + "'");
  }
}

double objective_value(const MilpInstance& instance, const std::vector<double>& values) {
  double total = 0.0;
  for (size_t j = 0; j < instance.columns.size(); ++j)
    total += instance.columns[j].objective * values[j];
  return total;
}

double row_activity(const Row& row, const std::vector<double>& values) {
  double total = 0.0;
  for (const auto& [j, a] : row.entries) total += a * values[j];
  return total;
}

ResidualReport residuals(const MilpInstance& instance, const std::vector<double>& values) {
  ResidualReport report;
  for (size_t i = 0; i < instance.rows.size(); ++i) {
    const Row& row = instance.rows[i];
    double lhs = row_activity(row, values);
    double violation = 0.0;
    if (row.sense != Sense::GreaterEqual) violation = std::max(violation, lhs - row.rhs);
    if (row.sense != Sense::LessEqual) violation = std::max(violation, row.rhs - lhs);
    double scaled = violation / (1.0 + std::abs(row.rhs));
    if (scaled > report.worst_row) {
      report.worst_row = scaled;
      report.worst_row_index = static_cast<int>(i);
    }
  }
  for (size_t j = 0; j < instance.columns.size(); ++j) {
    const Column& c = instance.columns[j];
    double v = values[j];
    report.worst_bound = std::max({report.worst_bound, c.lower - v, v - c.upper});
    if (c.binary)
      report.worst_integrality = std::max(report.worst_integrality, std::abs(v - std::round(v)));
  }
  return report;
}

bool is_feasible(const MilpInstance& instance, const std::vector<double>& values, double tol) {
  if (values.size() != instance.columns.size()) return false;
  ResidualReport r = residuals(instance, values);
  return r.worst_row <= tol && r.worst_bound <= tol && r.worst_integrality <= tol;
}

}  // namespace scdr::milp
