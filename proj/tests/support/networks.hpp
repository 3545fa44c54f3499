#pragma once

#include <cstdint>

#include "scdr/core/network_model.hpp"
#include "scdr/formulation/config.hpp"

namespace scdr::testing {

/// Supplier S -> plant P (recipe r1: raw -> prod) -> customer C, lead time 1
/// on both arcs, an order of 5 prod in every period.
NetworkModel minimal_chain(int periods = 4);

/// Two suppliers, two plants, two warehouses and local customers, shaped
/// like the motivating case: P1 sells directly and ships to W1, W1 feeds W2
/// by sea and air, W2 feeds plant P2.
NetworkModel motivating_topology(int periods = 6);

struct TinyCase {
  NetworkModel model;
  formulation::ExtensionConfig config;
};

/// Random tiny network with random extensions whose instance stays within
/// 40 columns and 12 free binaries. Deterministic in `seed`.
TinyCase random_tiny_case(std::uint64_t seed);

}  // namespace scdr::testing
