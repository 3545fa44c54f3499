#include "scdr/formulation/catalog.hpp"

#include <stdexcept>

#include "scdr/core/network_model.hpp"
#include "scdr/formulation/config.hpp"

namespace scdr::formulation {

const char* to_string(Family family) {
  switch (family) {
    case Family::FlowIn: return "FIn";
    case Family::FlowOut: return "FOut";
    case Family::Prod: return "Prod";
    case Family::ProdIn: return "ProdIn";
    case Family::ProdOut: return "ProdOut";
    case Family::Inv: return "Inv";
    case Family::Buy: return "Buy";
    case Family::Dem: return "Dem";
    case Family::Unmet: return "Unmet";
    case Family::Deviation: return "Dev";
    case Family::NegDev: return "K";
    case Family::Cancel: return "y";
    case Family::FlowOn: return "x";
    case Family::SlaOn: return "w";
    case Family::Below: return "z";
  }
  return "?";
}

bool is_binary(Family family) {
  return family == Family::Cancel || family == Family::FlowOn || family == Family::SlaOn ||
         family == Family::Below;
}

int VariableCatalog::add(const VarKey& key) {
  int column = static_cast<int>(keys_.size());
  if (!index_.emplace(key, column).second) throw std::logic_error("duplicate variable key");
  keys_.push_back(key);
  return column;
}

int VariableCatalog::find(const VarKey& key) const {
  auto it = index_.find(key);
  return it == index_.end() ? -1 : it->second;
}

int VariableCatalog::at(const VarKey& key) const {
  int column = find(key);
  if (column < 0)
    throw std::out_of_range(std::string("no column for ") + to_string(key.family) + " key");
  return column;
}

const char* to_string(SlaMode mode) {
  switch (mode) {
    case SlaMode::Off: return "off";
    case SlaMode::Simple: return "simple";
    case SlaMode::Window: return "window";
  }
  return "?";
}

const char* to_string(TerminalMode mode) { return mode == TerminalMode::Hard ? "hard" : "fid"; }
const char* to_string(FloorMode mode) { return mode == FloorMode::Hard ? "hard" : "nid"; }

SlaMode sla_mode_from_string(const std::string& text) {
  if (text == "off") return SlaMode::Off;
  if (text == "simple") return SlaMode::Simple;
  if (text == "window") return SlaMode::Window;
  throw DataError("unknown sla mode '" + text + "' (expected off, simple or window)");
}

TerminalMode terminal_mode_from_string(const std::string& text) {
  if (text == "hard") return TerminalMode::Hard;
  if (text == "fid") return TerminalMode::Fid;
  throw DataError("unknown terminal mode '" + text + "' (expected hard or fid)");
}

FloorMode floor_mode_from_string(const std::string& text) {
  if (text == "hard") return FloorMode::Hard;
  if (text == "nid") return FloorMode::Nid;
  throw DataError("unknown inventory floor mode '" + text + "' (expected hard or nid)");
}

}  // namespace scdr::formulation
