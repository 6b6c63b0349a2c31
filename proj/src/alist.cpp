#include "rmc/alist.hpp"

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace rmc {

void write_alist(const QcCode& code, std::ostream& out) {
    const int n = code.cols, m = code.rows;
    int max_col = 0, max_row = 0;
    for (int j = 0; j < n; ++j) max_col = std::max(max_col, code.col_ptr[j + 1] - code.col_ptr[j]);
    for (int i = 0; i < m; ++i) max_row = std::max(max_row, code.row_ptr[i + 1] - code.row_ptr[i]);
    out << n << ' ' << m << '\n' << max_col << ' ' << max_row << '\n';
    for (int j = 0; j < n; ++j) out << (code.col_ptr[j + 1] - code.col_ptr[j]) << (j + 1 < n ? ' ' : '\n');
    for (int i = 0; i < m; ++i) out << (code.row_ptr[i + 1] - code.row_ptr[i]) << (i + 1 < m ? ' ' : '\n');
    for (int j = 0; j < n; ++j) {
        int written = 0;
        for (int k = code.col_ptr[j]; k < code.col_ptr[j + 1]; ++k, ++written)
            out << (code.col_idx[k] + 1) << ' ';
        for (; written < max_col; ++written) out << 0 << ' ';
        out << '\n';
    }
    for (int i = 0; i < m; ++i) {
        int written = 0;
        for (int k = code.row_ptr[i]; k < code.row_ptr[i + 1]; ++k, ++written)
            out << (code.row_idx[k] + 1) << ' ';
        for (; written < max_row; ++written) out << 0 << ' ';
        out << '\n';
    }
}

QcCode read_alist(std::istream& in) {
    int n = 0, m = 0, max_col = 0, max_row = 0;
    if (!(in >> n >> m >> max_col >> max_row) || n <= 0 || m <= 0)
        throw std::runtime_error("alist: bad header");
    std::vector<int> col_deg(n), row_deg(m);
    for (int& d : col_deg)
        if (!(in >> d) || d < 0 || d > max_col) throw std::runtime_error("alist: bad column degree");
    for (int& d : row_deg)
        if (!(in >> d) || d < 0 || d > max_row) throw std::runtime_error("alist: bad row degree");
    std::vector<std::pair<std::int32_t, std::int32_t>> edges;
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < max_col; ++k) {
            int r = 0;
            if (!(in >> r)) throw std::runtime_error("alist: truncated column list");
            if (r == 0) continue;
            if (r < 1 || r > m) throw std::runtime_error("alist: row index out of range");
            edges.emplace_back(r - 1, j);
        }
    }
    // The per-row lists are redundant with the per-column lists; consume and
    // range-check them without rebuilding edges.
    for (int i = 0; i < m; ++i) {
        for (int k = 0; k < max_row; ++k) {
            int c = 0;
            if (!(in >> c)) throw std::runtime_error("alist: truncated row list");
            if (c < 0 || c > n) throw std::runtime_error("alist: column index out of range");
        }
    }
    if (edges.size() != static_cast<std::size_t>(std::accumulate(col_deg.begin(), col_deg.end(), 0)))
        throw std::runtime_error("alist: degree/list mismatch");
    return qc_from_edges(m, n, 1, std::move(edges));
}

}  // namespace rmc
