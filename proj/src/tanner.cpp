#include "rmc/tanner.hpp"

#include <stdexcept>
#include <vector>

namespace rmc {

namespace {

// Rooted path search: cycles are counted from their smallest variable node,
// walking toward the smaller of the two adjacent check nodes first, so each
// simple cycle is found exactly once.
struct CycleSearch {
    const QcCode& h;
    int ell;
    std::vector<char> vused, cused, v0adj;
    std::int64_t count = 0;
    int v0 = 0, c0 = 0;

    explicit CycleSearch(const QcCode& code, int half)
        : h(code), ell(half), vused(code.cols, 0), cused(code.rows, 0), v0adj(code.rows, 0) {}

    void run() {
        for (v0 = 0; v0 < h.cols; ++v0) {
            for (int k = h.col_ptr[v0]; k < h.col_ptr[v0 + 1]; ++k) v0adj[h.col_idx[k]] = 1;
            vused[v0] = 1;
            for (int k = h.col_ptr[v0]; k < h.col_ptr[v0 + 1]; ++k) {
                c0 = h.col_idx[k];
                cused[c0] = 1;
                extend(c0, 1);
                cused[c0] = 0;
            }
            vused[v0] = 0;
            for (int k = h.col_ptr[v0]; k < h.col_ptr[v0 + 1]; ++k) v0adj[h.col_idx[k]] = 0;
        }
    }

    void extend(int cn, int depth) {
        for (int k = h.row_ptr[cn]; k < h.row_ptr[cn + 1]; ++k) {
            const int v = h.row_idx[k];
            if (v <= v0 || vused[v]) continue;
            vused[v] = 1;
            for (int k2 = h.col_ptr[v]; k2 < h.col_ptr[v + 1]; ++k2) {
                const int c = h.col_idx[k2];
                if (cused[c]) continue;
                if (depth + 1 == ell) {
                    if (c > c0 && v0adj[c]) ++count;
                } else {
                    cused[c] = 1;
                    extend(c, depth + 1);
                    cused[c] = 0;
                }
            }
            vused[v] = 0;
        }
    }
};

}  // namespace

std::int64_t tanner_cycle_count(const QcCode& h, int two_ell) {
    if (two_ell != 4 && two_ell != 6 && two_ell != 8)
        throw std::invalid_argument("cycle length must be 4, 6, or 8");
    const std::int64_t guard = two_ell == 8 ? 50000 : 150000;
    if (h.ones() > guard)
        throw std::runtime_error("matrix too large for exhaustive cycle search");
    CycleSearch search(h, two_ell / 2);
    search.run();
    return search.count;
}

}  // namespace rmc
