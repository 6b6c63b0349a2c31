#pragma once

#include <cstdint>

#include "rmc/protograph.hpp"

namespace rmc {

// Exact number of simple cycles of length two_ell (4, 6, or 8) in the
// bipartite Tanner graph of a sparse binary matrix. Ground truth for the
// condition-based counters; guarded to desk scale because the path search
// grows with degree^(2*ell).
std::int64_t tanner_cycle_count(const QcCode& h, int two_ell);

}  // namespace rmc
