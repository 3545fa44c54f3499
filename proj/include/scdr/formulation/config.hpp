#pragma once

#include <string>

namespace scdr::formulation {

enum class SlaMode { Off, Simple, Window };
enum class TerminalMode { Hard, Fid };
enum class FloorMode { Hard, Nid };

/// Optional constraint families layered over the base model.
struct ExtensionConfig {
  bool patp = false;  // production across time periods
  bool ftc = false;   // fixed transport cost with minimum shipment
  SlaMode sla = SlaMode::Off;
  TerminalMode terminal = TerminalMode::Hard;
  FloorMode inventory_floor = FloorMode::Hard;
  bool shared_volume = false;
  bool enforce_u_upper = false;

  bool operator==(const ExtensionConfig&) const = default;
};

const char* to_string(SlaMode mode);
const char* to_string(TerminalMode mode);
const char* to_string(FloorMode mode);

// Parsers throw scdr::DataError on unknown names.
SlaMode sla_mode_from_string(const std::string& text);
TerminalMode terminal_mode_from_string(const std::string& text);
FloorMode floor_mode_from_string(const std::string& text);

}  // namespace scdr::formulation
