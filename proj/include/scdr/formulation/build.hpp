#pragma once

#include "scdr/core/network_model.hpp"
#include "scdr/formulation/catalog.hpp"
#include "scdr/formulation/config.hpp"
#include "scdr/milp/instance.hpp"

namespace scdr::formulation {

struct DimensionReport {
  long continuous = 0;
  long binary = 0;
  long constraints = 0;
  long nonzeros = 0;

  bool operator==(const DimensionReport&) const = default;
};

DimensionReport dimensions(const milp::MilpInstance& instance);

struct BuiltModel {
  milp::MilpInstance instance;
  VariableCatalog catalog;
};

/// Compiles the model into a maximization MILP. Period 0 columns are fixed
/// to the pre-planned state and rows start at period 1.
/// Throws milp::BuildError when a big-M bound is unbounded and DataError when
/// the model does not validate.
BuiltModel build(const NetworkModel& model, const ExtensionConfig& config);

/// Counts the columns, rows and nonzeros `build` produces, by enumerating
/// index sets without building.
DimensionReport expected_dimensions(const NetworkModel& model, const ExtensionConfig& config);

/// Dispatch periods whose shipment on arc `arc`, material slot `slot`
/// arrives at each period (index = arrival period). Arrivals past the
/// horizon are dropped.
std::vector<std::vector<int>> arrivals(const NetworkModel& model, int arc, int slot);

/// Same for production starts of a recipe.
std::vector<std::vector<int>> completions(const NetworkModel& model, RecipeRef ref);

/// Buffer threshold alpha*SS at period t.
double floor_threshold(const InventoryTerms& inv, int t);

}  // namespace scdr::formulation
