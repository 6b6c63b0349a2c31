#include "rmc/candidates.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

namespace rmc {

namespace {

std::uint64_t binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / i;
    return r;
}

constexpr int kMaxHalf = 4;

// Shared DFS over alternating row/column walks. Entries at even positions
// open a row pair, odd positions close it; the final entry is forced back
// into the root column. `allow_repeats` switches between candidate mode
// (all entries pairwise distinct, every non-root entry strictly above the
// root, so the canonical traversal comes out directly) and trail mode
// (entries >= root, repeats allowed, canonical order checked afterwards).
struct WalkEnum {
    const IntMat& sup;
    int ell;
    bool allow_repeats;
    std::array<std::int32_t, 2 * kMaxHalf> path{};
    const CandidateVisitor* cand_visit = nullptr;
    const TrailVisitor* trail_visit = nullptr;

    explicit WalkEnum(const IntMat& s) : sup(s), ell(0), allow_repeats(false) {}

    bool seen_before(std::int32_t e, int upto) const {
        for (int k = 0; k < upto; ++k)
            if (path[k] == e) return true;
        return false;
    }

    void run(int half, bool repeats) {
        ell = half;
        allow_repeats = repeats;
        if (ell < 2 || ell > kMaxHalf) throw std::invalid_argument("cycle half-length out of range");
        const int n = sup.rows * sup.cols;
        for (std::int32_t root = 0; root < n; ++root) {
            if (!sup.v[root]) continue;
            path[0] = root;
            descend(1);
        }
    }

    void descend(int pos) {
        const int last = 2 * ell - 1;
        const std::int32_t root = path[0];
        const std::int32_t prev = path[pos - 1];
        const int prev_row = prev / sup.cols;
        const int prev_col = prev % sup.cols;

        if (pos == last) {
            // Closing row move: column forced back to the root's column.
            const int root_col = root % sup.cols;
            if (root_col == prev_col) return;
            const std::int32_t e = static_cast<std::int32_t>(prev_row) * sup.cols + root_col;
            if (!sup.v[e] || e < root) return;
            // The closing column move pairs this entry with the root.
            if (e / sup.cols == root / sup.cols) return;
            if (!allow_repeats && seen_before(e, pos)) return;
            path[pos] = e;
            emit();
            return;
        }

        if (pos % 2 == 1) {
            // Row move: same row, any other column.
            const std::int32_t base = static_cast<std::int32_t>(prev_row) * sup.cols;
            for (int c = 0; c < sup.cols; ++c) {
                if (c == prev_col) continue;
                const std::int32_t e = base + c;
                if (!sup.v[e] || e < root) continue;
                if (!allow_repeats && seen_before(e, pos)) continue;
                path[pos] = e;
                descend(pos + 1);
            }
        } else {
            // Column move: same column, any other row.
            for (int r = 0; r < sup.rows; ++r) {
                if (r == prev_row) continue;
                const std::int32_t e = static_cast<std::int32_t>(r) * sup.cols + prev_col;
                if (!sup.v[e] || e < root) continue;
                if (!allow_repeats && seen_before(e, pos)) continue;
                path[pos] = e;
                descend(pos + 1);
            }
        }
    }

    void emit() {
        if (!allow_repeats) {
            (*cand_visit)(path.data());
            return;
        }
        // Trail mode: keep only the lexicographically smallest of the 2*ell
        // row-first traversals (rotations by two slots, in both directions),
        // and report how many of them coincide with it.
        const int len = 2 * ell;
        std::array<std::int32_t, 2 * kMaxHalf> rep{};
        int autos = 0;
        for (int dir = 0; dir < 2; ++dir) {
            for (int shift = 0; shift < len; shift += 2) {
                for (int k = 0; k < len; ++k) {
                    const int src = dir == 0 ? (shift + k) % len : (shift - k + 2 * len) % len;
                    rep[k] = path[src];
                }
                int cmp = 0;
                for (int k = 0; k < len && cmp == 0; ++k)
                    cmp = rep[k] < path[k] ? -1 : (rep[k] > path[k] ? 1 : 0);
                if (cmp < 0) return;  // a smaller traversal exists; that one is canonical
                if (cmp == 0) ++autos;
            }
        }
        (*trail_visit)(path.data(), autos);
    }
};

}  // namespace

std::uint64_t candidate_census(int ell, int gamma, int kappa) {
    const std::uint64_t g2 = binom(gamma, 2), g3 = binom(gamma, 3), g4 = binom(gamma, 4);
    const std::uint64_t k2 = binom(kappa, 2), k3 = binom(kappa, 3), k4 = binom(kappa, 4);
    switch (ell) {
        case 2:
            return g2 * k2;
        case 3:
            return 6 * g3 * k3;
        case 4:
            return 6 * g2 * k4 + 6 * g4 * k2 + 36 * g3 * k4 + 36 * g4 * k3 + 72 * g4 * k4;
        default:
            throw std::invalid_argument("census known for cycle lengths 4, 6, 8 only");
    }
}

void enumerate_candidates(const IntMat& support, int ell, const CandidateVisitor& visit) {
    WalkEnum w(support);
    w.cand_visit = &visit;
    w.run(ell, false);
}

void enumerate_trails(const IntMat& support, int ell, const TrailVisitor& visit) {
    WalkEnum w(support);
    w.trail_visit = &visit;
    w.run(ell, true);
}

CandidateList collect_candidates(const IntMat& support, int ell) {
    // First pass counts so the slot-major buffer can be laid out up front.
    std::int64_t n = 0;
    enumerate_candidates(support, ell, [&](const std::int32_t*) { ++n; });
    CandidateList list;
    list.ell = ell;
    list.count = n;
    list.slots.resize(static_cast<std::size_t>(2 * ell) * n);
    std::int64_t i = 0;
    enumerate_candidates(support, ell, [&](const std::int32_t* e) {
        for (int s = 0; s < 2 * ell; ++s) list.slots[static_cast<std::size_t>(s) * n + i] = e[s];
        ++i;
    });
    return list;
}

}  // namespace rmc
