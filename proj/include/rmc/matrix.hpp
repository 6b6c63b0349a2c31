#pragma once

#include <cstdint>
#include <vector>

namespace rmc {

// Dense row-major integer matrix. Used for base-matrix supports, component
// assignments (-1 marks an unassigned entry) and circulant powers.
struct IntMat {
    int rows = 0;
    int cols = 0;
    std::vector<int> v;

    IntMat() = default;
    IntMat(int r, int c, int fill = 0)
        : rows(r), cols(c), v(static_cast<std::size_t>(r) * c, fill) {}

    int& at(int r, int c) { return v[static_cast<std::size_t>(r) * cols + c]; }
    int at(int r, int c) const { return v[static_cast<std::size_t>(r) * cols + c]; }

    bool operator==(const IntMat& o) const {
        return rows == o.rows && cols == o.cols && v == o.v;
    }

    static IntMat ones(int r, int c) { return IntMat(r, c, 1); }

    // Support mask: 1 where this matrix is >= 0 (assigned), else 0.
    IntMat support() const {
        IntMat s(rows, cols, 0);
        for (std::size_t i = 0; i < v.size(); ++i) s.v[i] = v[i] >= 0 ? 1 : 0;
        return s;
    }

    int count_nonnegative() const {
        int n = 0;
        for (int x : v) n += x >= 0 ? 1 : 0;
        return n;
    }
};

}  // namespace rmc
