#pragma once

#include <compare>
#include <map>
#include <string>
#include <vector>

namespace scdr::formulation {

// Declaration order is the column sort order; binaries come last.
enum class Family : int {
  FlowIn,
  FlowOut,
  Prod,
  ProdIn,
  ProdOut,
  Inv,
  Buy,
  Dem,
  Unmet,
  Deviation,
  NegDev,   // K
  Cancel,   // y
  FlowOn,   // x
  SlaOn,    // w
  Below,    // z
};

const char* to_string(Family family);
bool is_binary(Family family);

/// Typed column key. `entity` is an arc index for flow families, a plant
/// index for production families and a node index otherwise. `material` is
/// -1 for production families; `recipe` is -1 outside them; `t` is 0 for
/// Deviation.
struct VarKey {
  Family family = Family::FlowIn;
  int material = -1;
  int entity = -1;
  int recipe = -1;
  int t = 0;

  auto operator<=>(const VarKey&) const = default;
};

/// Bijection between column indices and typed keys.
class VariableCatalog {
 public:
  int add(const VarKey& key);  // throws std::logic_error on duplicates
  int find(const VarKey& key) const;  // -1 when absent
  int at(const VarKey& key) const;    // throws std::out_of_range
  const VarKey& key(int column) const { return keys_[column]; }
  int size() const { return static_cast<int>(keys_.size()); }
  const std::vector<VarKey>& keys() const { return keys_; }

 private:
  std::vector<VarKey> keys_;
  std::map<VarKey, int> index_;
};

}  // namespace scdr::formulation
