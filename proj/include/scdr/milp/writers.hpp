#pragma once

#include <string>
#include <utility>
#include <vector>

#include "scdr/milp/instance.hpp"

namespace scdr::milp {

struct ExportResult {
  std::string text;
  // (exported name, original name) for every renamed row or column; empty
  // when all original names fit the format.
  std::vector<std::pair<std::string, std::string>> name_map;

  std::string name_map_text() const;
};

/// Fixed-format MPS. The instance maximizes, so the objective row is written
/// negated and the file minimizes.
ExportResult export_mps(const MilpInstance& instance);

/// Algebraic LP text with a Maximize header.
ExportResult export_lp_text(const MilpInstance& instance);

/// Shortest decimal form of `value` that parses back exactly, limited to
/// `width` characters when given (precision is dropped to fit).
std::string format_number(double value, int width = 0);

}  // namespace scdr::milp
