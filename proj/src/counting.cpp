#include "rmc/counting.hpp"

#include <algorithm>
#include <stdexcept>

#include "rmc/kernels.hpp"

namespace rmc {

bool is_active_partitioned(const std::int32_t* entries, int ell, const IntMat& K) {
    int sum = 0;
    for (int s = 0; s < 2 * ell; ++s) {
        const int v = K.v[entries[s]];
        if (v < 0) return false;
        sum += (s & 1) ? -v : v;
    }
    return sum == 0;
}

bool is_active_lifted(const std::int32_t* entries, int ell, const IntMat& K, const IntMat& T,
                      int z) {
    if (!is_active_partitioned(entries, ell, K)) return false;
    int sum = 0;
    for (int s = 0; s < 2 * ell; ++s) sum += (s & 1) ? -T.v[entries[s]] : T.v[entries[s]];
    return sum % z == 0;
}

ActiveCounts count_active_candidates(const IntMat& K, const CycleWeights& w) {
    ActiveCounts out;
    const IntMat sup = K.support();
    for (int ell = 2; ell <= 4; ++ell) {
        std::int64_t n = 0;
        enumerate_candidates(sup, ell, [&](const std::int32_t* e) {
            if (is_active_partitioned(e, ell, K)) ++n;
        });
        (ell == 2 ? out.c4 : ell == 3 ? out.c6 : out.c8) = n;
        out.weighted += w.at(ell) * static_cast<double>(n);
    }
    return out;
}

std::int64_t count_active_in_list(const CandidateList& c, const IntMat& K) {
    return count_active_scan(c, K.v.data(), nullptr, 0);
}

namespace {

// Walks one canonical closed trail against (K, T): computes the per-visit
// column-replica offsets and circulant offsets, and decides how many simple
// cycles the trail contributes across replica positions and circulant
// shifts. Contributions are returned scaled by 24/automorphisms so the
// caller can accumulate exactly in integers (automorphism groups here have
// order 1, 2, 3, 4, 6, or 8).
std::int64_t trail_contribution24(const std::int32_t* e, int autos, int ell, const IntMat& K,
                                  const IntMat& T, int z, int L) {
    int delta[5] = {0, 0, 0, 0, 0};  // column-replica offset per variable-node visit
    int sigma[5] = {0, 0, 0, 0, 0};  // circulant offset per variable-node visit
    for (int k = 0; k < ell; ++k) {
        const std::int32_t plus = e[2 * k], minus = e[2 * k + 1];
        delta[k + 1] = delta[k] + K.v[plus] - K.v[minus];
        sigma[k + 1] = sigma[k] + T.v[plus] - T.v[minus];
    }
    if (delta[ell] != 0) return 0;       // replica walk does not close
    if (sigma[ell] % z != 0) return 0;   // circulant walk does not close
    int lo = 0, hi = 0;
    for (int k = 0; k < ell; ++k) {
        lo = std::min(lo, delta[k]);
        hi = std::max(hi, delta[k]);
    }
    if (hi - lo >= L) return 0;
    // Simple-cycle test: visits sharing a base column (or row) must land on
    // different lifted vertices; offsets are start-independent, so one check
    // covers every placement.
    const int cols = K.cols;
    for (int k = 0; k < ell; ++k)
        for (int k2 = k + 1; k2 < ell; ++k2) {
            const bool same_col = e[2 * k] % cols == e[2 * k2] % cols;
            if (same_col && delta[k] == delta[k2] && (sigma[k] - sigma[k2]) % z == 0) return 0;
            const bool same_row = e[2 * k] / cols == e[2 * k2] / cols;
            if (same_row) {
                const int rho = delta[k] + K.v[e[2 * k]], rho2 = delta[k2] + K.v[e[2 * k2]];
                const int tau = sigma[k] + T.v[e[2 * k]], tau2 = sigma[k2] + T.v[e[2 * k2]];
                if (rho == rho2 && (tau - tau2) % z == 0) return 0;
            }
        }
    const std::int64_t placements = static_cast<std::int64_t>(z) * (L - (hi - lo));
    return placements * (24 / autos);
}

}  // namespace

std::int64_t count_cycles_lifted(const IntMat& K, const IntMat& T, int z, int L, int ell) {
    if (z < 1 || L < 1) throw std::invalid_argument("need z >= 1 and L >= 1");
    std::int64_t total24 = 0;
    enumerate_trails(K.support(), ell, [&](const std::int32_t* e, int autos) {
        total24 += trail_contribution24(e, autos, ell, K, T, z, L);
    });
    if (total24 % 24 != 0) throw std::logic_error("trail contributions did not divide evenly");
    return total24 / 24;
}

std::int64_t count_cycles_coupled(const IntMat& K, int L, int ell) {
    const IntMat zero(K.rows, K.cols, 0);
    return count_cycles_lifted(K, zero, 1, L, ell);
}

}  // namespace rmc
