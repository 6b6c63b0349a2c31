#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "rmc/matrix.hpp"

namespace rmc {

// Number of cycle candidates of length 2*ell in the complete gamma x kappa
// base matrix, i.e. subgraphs that can carry a cycle once the matrix is
// partitioned and lifted.
std::uint64_t candidate_census(int ell, int gamma, int kappa);

// A candidate of half-length ell is stored as its canonical traversal:
// 2*ell flat entry indices (row * cols + col), starting at the smallest
// entry and taking the row move first. Entries at positions (2k, 2k+1)
// share a row, (2k+1, 2k+2) and (last, 0) share a column.
using CandidateVisitor = std::function<void(const std::int32_t*)>;

// Enumerates every candidate with all 2*ell entries distinct and inside the
// support (mask of 0/1). Each candidate is visited exactly once, in its
// canonical traversal order.
void enumerate_candidates(const IntMat& support, int ell, const CandidateVisitor& visit);

// Enumerates closed trails of length 2*ell: alternating row/column walks
// whose 2*ell steps are pairwise distinct as lifted edges but may revisit a
// base entry (possible only for ell >= 4). Each trail is visited once, in
// lexicographically smallest traversal order; `automorphisms` receives the
// number of traversal symmetries fixing that canonical order (1 for trails
// without repeated entries).
using TrailVisitor = std::function<void(const std::int32_t*, int automorphisms)>;
void enumerate_trails(const IntMat& support, int ell, const TrailVisitor& visit);

// Candidate entries in slot-major layout: slot s of candidate i is
// slots[s * count + i]. Cache-friendly for the activation kernels that scan
// all candidates per slot.
struct CandidateList {
    int ell = 0;
    std::int64_t count = 0;
    std::vector<std::int32_t> slots;

    const std::int32_t* slot(int s) const { return slots.data() + static_cast<std::size_t>(s) * count; }
};

CandidateList collect_candidates(const IntMat& support, int ell);

}  // namespace rmc
