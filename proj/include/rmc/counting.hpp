#pragma once

#include <cstdint>

#include "rmc/candidates.hpp"
#include "rmc/matrix.hpp"

namespace rmc {

struct CycleWeights {
    double w4 = 0.0;
    double w6 = 0.0;
    double w8 = 0.0;

    double at(int ell) const { return ell == 2 ? w4 : (ell == 3 ? w6 : w8); }
};

// Activation of one candidate traversal (2*ell flat entries, alternating +/-
// signs starting positive): the alternating component sum must vanish; any
// unassigned entry (-1) keeps the candidate inactive.
bool is_active_partitioned(const std::int32_t* entries, int ell, const IntMat& K);

// Lifted activation: partition condition plus the alternating circulant-power
// sum vanishing modulo z.
bool is_active_lifted(const std::int32_t* entries, int ell, const IntMat& K, const IntMat& T,
                      int z);

struct ActiveCounts {
    std::int64_t c4 = 0;
    std::int64_t c6 = 0;
    std::int64_t c8 = 0;
    double weighted = 0.0;

    std::int64_t at(int ell) const { return ell == 2 ? c4 : (ell == 3 ? c6 : c8); }
};

// Per-length counts of candidates (enumerated over K's support) that stay
// active after partitioning, plus their weighted sum. Counts are per
// candidate, independent of the coupling length.
ActiveCounts count_active_candidates(const IntMat& K, const CycleWeights& w);

// Same activation count for a prebuilt list (kernel-backed scan).
std::int64_t count_active_in_list(const CandidateList& c, const IntMat& K);

// Exact number of simple cycles of length 2*ell in the L-replica coupled
// protograph defined by K (no lifting), via closed-trail analysis.
std::int64_t count_cycles_coupled(const IntMat& K, int L, int ell);

// Exact number of simple cycles of length 2*ell in the lifted Tanner graph
// of the SC code (K, T, z, L). Equals tanner_cycle_count on the expanded
// matrix; trails never get materialized, so this scales to full designs.
std::int64_t count_cycles_lifted(const IntMat& K, const IntMat& T, int z, int L, int ell);

}  // namespace rmc
