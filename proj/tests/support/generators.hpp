#pragma once

#include <cstdint>
#include <random>

#include "scdr/milp/instance.hpp"

namespace scdr::testing {

/// Feasible, bounded random LP: a random interior point is drawn first and
/// every row is built to hold at that point.
scdr::milp::MilpInstance random_lp(std::uint64_t seed, int rows, int cols);

/// Small random MILP with big-M links between binaries and continuous
/// columns. Not guaranteed feasible.
scdr::milp::MilpInstance random_milp(std::uint64_t seed, int rows, int continuous, int binaries);

}  // namespace scdr::testing
