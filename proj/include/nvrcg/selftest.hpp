#pragma once

#include <cstdint>
#include <ostream>

namespace nvrcg {

/// Quick property checks on random instances: phi (subadditivity,
/// monotonicity, 1-Lipschitz), retraction/transport against finite
/// differences, gradient consistency, subproblem against the grid oracle, and
/// line-search acceptance along v(x). Prints one line per check.
bool run_selftest(std::ostream& log, std::uint64_t seed = 2024);

}  // namespace nvrcg
