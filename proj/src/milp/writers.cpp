#include "scdr/milp/writers.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <unordered_set>

namespace scdr::milp {

std::string format_number(double value, int width) {
  if (value == 0.0) return "0";
  char buf[64];
  std::string shortest;
  for (int p = 1; p <= 17; ++p) {
    std::snprintf(buf, sizeof buf, "%.*g", p, value);
    if (std::strtod(buf, nullptr) == value) {
      shortest = buf;
      break;
    }
  }
  if (shortest.empty()) {
    std::snprintf(buf, sizeof buf, "%.17g", value);
    shortest = buf;
  }
  if (width <= 0 || static_cast<int>(shortest.size()) <= width) return shortest;
  for (int p = 16; p >= 1; --p) {
    std::snprintf(buf, sizeof buf, "%.*g", p, value);
    if (static_cast<int>(std::string(buf).size()) <= width) return buf;
  }
  return shortest;
}

std::string ExportResult::name_map_text() const {
  std::string out;
  for (const auto& [exported, original] : name_map) out += exported + " " + original + "\n";
  return out;
}

namespace {

bool mps_name_ok(const std::string& name) {
  if (name.empty() || name.size() > 8) return false;
  for (char c : name)
    if (c <= ' ' || c > '~') return false;
  return true;
}

bool lp_name_ok(const std::string& name) {
  static const std::string extra = "!\"#$%&()/,.;?@_`'{}|~";
  if (name.empty() || name.size() > 255) return false;
  char first = name[0];
  if (std::isdigit(static_cast<unsigned char>(first)) || first == '.') return false;
  for (char c : name) {
    if (std::isalnum(static_cast<unsigned char>(c))) continue;
    if (extra.find(c) == std::string::npos) return false;
  }
  return true;
}

template <typename Valid>
std::vector<std::string> export_names(const std::vector<std::string>& original, Valid valid,
                                      const std::string& reserved, char prefix,
                                      std::vector<std::pair<std::string, std::string>>& map) {
  bool all_ok = true;
  std::unordered_set<std::string> seen;
  for (const auto& n : original) {
    if (!valid(n) || n == reserved || !seen.insert(n).second) {
      all_ok = false;
      break;
    }
  }
  if (all_ok) return original;
  std::vector<std::string> out(original.size());
  char buf[32];
  for (size_t i = 0; i < original.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%c%07zu", prefix, i + 1);
    out[i] = buf;
    map.emplace_back(out[i], original[i]);
  }
  return out;
}

std::vector<std::string> column_names(const MilpInstance& inst) {
  std::vector<std::string> out;
  for (const auto& c : inst.columns) out.push_back(c.name);
  return out;
}

std::vector<std::string> row_names(const MilpInstance& inst) {
  std::vector<std::string> out;
  for (const auto& r : inst.rows) out.push_back(r.name);
  return out;
}

std::string pad(const std::string& s, size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

std::string mps_line(const std::string& a, const std::string& b, const std::string& value) {
  return "    " + pad(a, 8) + "  " + pad(b, 8) + "  " + value + "\n";
}

std::string mps_bound(const char* type, const std::string& col, const std::string& value) {
  std::string line = " " + std::string(type) + " " + pad("BND", 8) + "  ";
  line += value.empty() ? col : pad(col, 8) + "  " + value;
  return line + "\n";
}

const char* mps_sense(Sense s) {
  switch (s) {
    case Sense::LessEqual: return "L";
    case Sense::GreaterEqual: return "G";
    case Sense::Equal: return "E";
  }
  return "E";
}

}  // namespace

ExportResult export_mps(const MilpInstance& instance) {
  ExportResult result;
  const auto cols = export_names(column_names(instance), mps_name_ok, "", 'C', result.name_map);
  const auto rows = export_names(row_names(instance), mps_name_ok, "OBJ", 'R', result.name_map);
  const int n = instance.column_count();

  // Row entries regrouped per column.
  std::vector<std::vector<std::pair<int, double>>> by_column(n);
  for (int i = 0; i < instance.row_count(); ++i)
    for (const auto& [j, a] : instance.rows[i].entries)
      if (a != 0.0) by_column[j].emplace_back(i, a);

  std::ostringstream os;
  os << "* objective negated: the model maximizes, this file minimizes\n";
  os << "NAME          " << (mps_name_ok(instance.name) ? instance.name : std::string("SCDR")) << "\n";
  os << "ROWS\n";
  os << " N  OBJ\n";
  for (int i = 0; i < instance.row_count(); ++i)
    os << " " << mps_sense(instance.rows[i].sense) << "  " << rows[i] << "\n";

  os << "COLUMNS\n";
  bool in_integer = false;
  for (int j = 0; j < n; ++j) {
    const Column& c = instance.columns[j];
    if (c.binary != in_integer) {
      os << "    MARKER                 'MARKER'                 "
         << (c.binary ? "'INTORG'" : "'INTEND'") << "\n";
      in_integer = c.binary;
    }
    double obj = c.objective == 0.0 ? 0.0 : -c.objective;
    os << mps_line(cols[j], "OBJ", format_number(obj, 12));
    for (const auto& [i, a] : by_column[j]) os << mps_line(cols[j], rows[i], format_number(a, 12));
  }
  if (in_integer) os << "    MARKER                 'MARKER'                 'INTEND'\n";

  os << "RHS\n";
  for (int i = 0; i < instance.row_count(); ++i)
    if (instance.rows[i].rhs != 0.0)
      os << mps_line("RHS", rows[i], format_number(instance.rows[i].rhs, 12));

  os << "BOUNDS\n";
  for (int j = 0; j < n; ++j) {
    const Column& c = instance.columns[j];
    const std::string& name = cols[j];
    if (c.binary && c.lower == 0.0 && c.upper == 1.0) {
      os << mps_bound("BV", name, "");
    } else if (c.lower == c.upper) {
      os << mps_bound("FX", name, format_number(c.lower, 12));
    } else if (std::isinf(c.lower) && std::isinf(c.upper)) {
      os << mps_bound("FR", name, "");
    } else {
      if (std::isinf(c.lower)) os << mps_bound("MI", name, "");
      else if (c.lower != 0.0 || c.binary) os << mps_bound("LO", name, format_number(c.lower, 12));
      if (!std::isinf(c.upper)) os << mps_bound("UP", name, format_number(c.upper, 12));
      else if (c.binary) os << mps_bound("PL", name, "");
    }
  }
  os << "ENDATA\n";
  result.text = os.str();
  return result;
}

namespace {

std::string lp_terms(const std::vector<std::pair<int, double>>& entries,
                     const std::vector<std::string>& cols) {
  std::string out;
  bool first = true;
  for (const auto& [j, a] : entries) {
    if (a == 0.0) continue;
    std::string mag = format_number(std::abs(a));
    if (first) out += (a < 0 ? "-" : "+") + mag + " " + cols[j];
    else out += std::string(a < 0 ? " - " : " + ") + mag + " " + cols[j];
    first = false;
  }
  if (first) out = cols.empty() ? "0" : "0 " + cols[0];
  return out;
}

std::string lp_bound_value(double v) {
  if (v == kInf) return "+inf";
  if (v == -kInf) return "-inf";
  return format_number(v);
}

}  // namespace

ExportResult export_lp_text(const MilpInstance& instance) {
  ExportResult result;
  const auto cols = export_names(column_names(instance), lp_name_ok, "", 'x', result.name_map);
  const auto rows = export_names(row_names(instance), lp_name_ok, "obj", 'c', result.name_map);

  std::ostringstream os;
  os << "\\ " << instance.name << "\n";
  os << "Maximize\n";
  std::vector<std::pair<int, double>> objective;
  for (int j = 0; j < instance.column_count(); ++j)
    if (instance.columns[j].objective != 0.0) objective.emplace_back(j, instance.columns[j].objective);
  os << " obj: " << lp_terms(objective, cols) << "\n";

  os << "Subject To\n";
  for (int i = 0; i < instance.row_count(); ++i) {
    const Row& r = instance.rows[i];
    os << " " << rows[i] << ": " << lp_terms(r.entries, cols) << " " << to_string(r.sense) << " "
       << format_number(r.rhs) << "\n";
  }

  os << "Bounds\n";
  for (int j = 0; j < instance.column_count(); ++j) {
    // Every column is listed, so the section also records column order.
    const Column& c = instance.columns[j];
    if (c.lower == c.upper) os << " " << cols[j] << " = " << format_number(c.lower) << "\n";
    else if (std::isinf(c.lower) && std::isinf(c.upper)) os << " " << cols[j] << " free\n";
    else
      os << " " << lp_bound_value(c.lower) << " <= " << cols[j] << " <= " << lp_bound_value(c.upper)
         << "\n";
  }

  bool any_binary = false;
  for (int j = 0; j < instance.column_count(); ++j) {
    if (!instance.columns[j].binary) continue;
    if (!any_binary) os << "Binaries\n";
    any_binary = true;
    os << " " << cols[j] << "\n";
  }
  os << "End\n";
  result.text = os.str();
  return result;
}

}  // namespace scdr::milp
