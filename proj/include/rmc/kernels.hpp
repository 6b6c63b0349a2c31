#pragma once

#include <cstdint>

#include "rmc/candidates.hpp"

namespace rmc {

// Counts candidates that are active for the given value matrices, flattened
// row-major and indexed by the candidates' entry indices:
//   - kvals non-null: every entry must be assigned (value >= 0) and the
//     alternating sum over the traversal must be exactly 0;
//   - tvals non-null: the alternating sum must be 0 modulo z.
// Either array may be null to skip its test. This is the hot scan of the
// finite-length optimizer, so it exists as a scalar reference and a SIMD
// variant chosen at runtime; both produce identical counts.
std::int64_t count_active_scan(const CandidateList& c, const int* kvals, const int* tvals, int z);

std::int64_t count_active_scan_scalar(const CandidateList& c, const int* kvals, const int* tvals,
                                      int z);

// Name of the variant count_active_scan dispatches to ("scalar" or "avx2").
const char* active_scan_kernel_name();

// True when the SIMD variant is compiled in and the CPU supports it.
bool active_scan_has_simd();

}  // namespace rmc
