#pragma once

#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace scdr {

/// One value per period of the horizon.
using Series = std::vector<double>;
using IntSeries = std::vector<int>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline Series constant_series(int periods, double value) {
  return Series(static_cast<size_t>(periods), value);
}

/// Thrown for malformed or inconsistent input data.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TimeGrid {
  int period_count = 2;        // periods are indexed 0..period_count-1
  double period_hours = 24.0;  // metadata only

  bool operator==(const TimeGrid&) const = default;
};

enum class NodeKind { Supplier, Plant, Warehouse, Customer };

const char* to_string(NodeKind kind);
NodeKind node_kind_from_string(const std::string& text);

/// Purchasing terms of one material at a supplier.
struct SupplyTerms {
  Series lower;        // B^L
  Series upper;        // B^U, may be kInf
  Series cost;         // lambda^B
  Series sla_minimum;  // B^SLA
  IntSeries sla_window;  // tau^SLA
  double preplanned = 0.0;  // B^0

  bool operator==(const SupplyTerms&) const = default;
};

/// Storage terms of one material at a plant or warehouse.
struct InventoryTerms {
  Series upper;               // I^U, must be finite
  Series buffer;              // SS
  Series alpha;               // enforced fraction of SS
  Series holding_cost;        // lambda^I
  Series shortfall_penalty;   // lambda^K
  double deviation_penalty = 0.0;  // lambda^Dev
  double initial = 0.0;            // I^0
  // Terminal reference state. Equals `initial` unless a rolling horizon
  // shifted the initial state forward.
  std::optional<double> target;

  double terminal_target() const { return target.value_or(initial); }
  bool operator==(const InventoryTerms&) const = default;
};

/// Order book and delivery terms of one material at a customer.
struct DemandTerms {
  Series quantity;        // delta (aggregated orders)
  Series price;           // lambda^D
  Series late_penalty;    // lambda^U
  Series cancel_penalty;  // lambda^delta
  Series lower;           // D^L
  Series upper;           // D^U, may be kInf
  Series unmet_lower;     // U^L, stored only
  Series unmet_upper;     // U^U, may be kInf
  std::vector<char> no_cancel;  // y fixed to 0 where set
  bool no_late = false;         // U fixed to 0 for every t >= 1
  double preplanned = 0.0;      // D^0
  double backlog = 0.0;         // U at period 0

  bool operator==(const DemandTerms&) const = default;
};

struct Recipe {
  std::string id;
  // (material index, phi): positive produced, negative consumed.
  std::vector<std::pair<int, double>> coefficients;
  Series lower;
  Series upper;
  Series cost;
  IntSeries duration;  // tau^P, used with production across periods
  double preplanned = 0.0;                 // P^0
  std::optional<double> preplanned_out;    // completions at period 0
  Series in_progress;                      // completions of starts before period 0
  bool source_or_sink = false;

  double coefficient(int material) const;
  bool operator==(const Recipe&) const = default;
};

struct Node {
  std::string id;
  NodeKind kind = NodeKind::Warehouse;
  std::vector<int> materials;  // sorted material indices (M_n)
  bool sla_required = false;

  // Exactly one of these is populated, matching `kind`, with one entry per
  // element of `materials`.
  std::vector<SupplyTerms> supply;
  std::vector<InventoryTerms> inventory;
  std::vector<DemandTerms> demand;

  std::vector<Recipe> recipes;  // plants only
  std::optional<Series> volume;  // shared facility volume I^U_total

  /// Position of `material` in `materials`, or -1.
  int slot(int material) const;
  bool holds_inventory() const {
    return kind == NodeKind::Plant || kind == NodeKind::Warehouse;
  }
  bool operator==(const Node&) const = default;
};

/// Per-material transport terms of an arc.
struct ArcMaterial {
  int material = -1;
  IntSeries lead_time;
  Series lower;       // F^L, minimum shipment under fixed transport costs
  Series upper;       // F^U, may be kInf
  Series cost;        // lambda^F
  Series fixed_cost;  // lambda^Ffix
  double preplanned_in = 0.0;   // F^{In,0}
  double preplanned_out = 0.0;  // F^{Out,0}
  Series in_transit;  // arrivals of dispatches made before period 0

  bool operator==(const ArcMaterial&) const = default;
};

struct Arc {
  std::string id;
  int origin = -1;
  int destination = -1;
  std::string mode;
  std::vector<ArcMaterial> materials;  // sorted by material index (M_a)

  int slot(int material) const;
  bool operator==(const Arc&) const = default;
};

/// Reference to a recipe through its plant.
struct RecipeRef {
  int plant = -1;
  int slot = -1;
  bool operator==(const RecipeRef&) const = default;
};

/// The full supply chain: graph, horizon and every parameter table.
struct NetworkModel {
  int schema_version = 1;
  TimeGrid time;
  std::vector<std::string> materials;
  std::vector<Node> nodes;
  std::vector<Arc> arcs;

  int periods() const { return time.period_count; }
  int material_index(const std::string& id) const;  // -1 if unknown
  int node_index(const std::string& id) const;
  int arc_index(const std::string& id) const;

  /// Flat list of all recipes, plant-major.
  std::vector<RecipeRef> recipe_refs() const;
  const Recipe& recipe(RecipeRef ref) const {
    return nodes[ref.plant].recipes[ref.slot];
  }

  bool operator==(const NetworkModel&) const = default;
};

/// Terms with the default tables: zero lower bounds, unbounded upper bounds,
/// zero costs and penalties. Inventory capacity has no default.
SupplyTerms default_supply_terms(int periods);
InventoryTerms default_inventory_terms(int periods, double capacity);
DemandTerms default_demand_terms(int periods);
ArcMaterial default_arc_material(int periods, int material);
Recipe default_recipe(int periods, std::string id);

/// Appends a node with default terms for each of `materials` (sorted here).
int add_node(NetworkModel& model, std::string id, NodeKind kind, std::vector<int> materials,
             double capacity = 0.0);
/// Appends an arc carrying `materials` with constant lead time `lead`.
int add_arc(NetworkModel& model, std::string id, int origin, int destination,
            std::vector<int> materials, int lead = 0, std::string mode = "road");

struct ValidationReport {
  std::vector<std::string> errors;
  std::vector<std::string> warnings;

  bool ok() const { return errors.empty(); }
};

ValidationReport validate(const NetworkModel& model);

/// Throws DataError listing every error when the model is invalid.
void require_valid(const NetworkModel& model);

struct Incidence {
  std::vector<int> arcs_in;
  std::vector<int> arcs_out;
};

/// Arcs entering and leaving `node`, in ascending arc index order.
Incidence incidence(const NetworkModel& model, int node);
Incidence incidence(const NetworkModel& model, const std::string& node_id);

struct RawOrder {
  std::string material;
  std::string customer;
  int period = 0;
  double quantity = 0.0;
};

struct OrderKey {
  std::string material;
  std::string customer;
  int period = 0;
  auto operator<=>(const OrderKey&) const = default;
};

struct OrderDelta {
  OrderKey key;
  double quantity = 0.0;
  bool operator==(const OrderDelta&) const = default;
};

/// Sums raw orders sharing (material, customer, period); sorted by key.
std::vector<OrderDelta> aggregate_orders(const std::vector<RawOrder>& raw);

/// Writes aggregated quantities into the customers' order books, replacing
/// the quantity tables of every customer.
void install_orders(NetworkModel& model, const std::vector<OrderDelta>& deltas);

}  // namespace scdr
