#pragma once

#include "scdr/milp/instance.hpp"

namespace scdr::milp {

/// Best-bound branch and bound over the binary columns. Branches on the most
/// fractional binary (lowest index on ties); equal bounds are explored in
/// creation order.
Solution solve(const MilpInstance& instance, const SolveOptions& options = {});

/// Enumerates every assignment of the free binaries and keeps the best LP
/// value (strictly greater wins, so the lowest assignment index breaks ties).
/// Assignments are evaluated in parallel with OpenMP.
Solution brute_force(const MilpInstance& instance, int max_binaries = 12,
                     const SolveOptions& options = {});

/// Sequential reference for brute_force.
Solution brute_force_serial(const MilpInstance& instance, int max_binaries = 12,
                            const SolveOptions& options = {});

}  // namespace scdr::milp
