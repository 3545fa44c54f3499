#pragma once

#include "scdr/core/network_model.hpp"

namespace scdr::runner {

/// Two suppliers, two plants, two warehouses and three customers over four
/// materials, with a sparse order book the nominal capacities can serve on
/// time.
NetworkModel synthetic_network(int periods = 20);

}  // namespace scdr::runner
