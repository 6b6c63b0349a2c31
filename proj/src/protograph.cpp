#include "rmc/protograph.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace rmc {

void DesignPlan::finalize() {
    if (gamma < 4) throw std::invalid_argument("base matrix needs at least 4 rows");
    if (kappa <= gamma) throw std::invalid_argument("base matrix needs more columns than rows");
    if (z < 2) throw std::invalid_argument("lifting size must be at least 2");
    if (L < 1) throw std::invalid_argument("coupling length must be at least 1");
    if (stages.empty()) throw std::invalid_argument("plan needs at least one stage");
    int mf = 0;
    double rf = 0.0;
    bool any_mass = false, all_mass = true;
    for (std::size_t d = 0; d < stages.size(); ++d) {
        StageSpec& s = stages[d];
        s.index = static_cast<int>(d);
        if (s.m_new < 1) throw std::invalid_argument("every stage must add memory");
        s.m_fixed = mf;
        s.r_fixed = rf;
        mf = s.memory();
        if (s.r_new >= 0.0) {
            any_mass = true;
            rf += s.r_new;
        } else {
            all_mass = false;
        }
    }
    if (any_mass && !all_mass)
        throw std::invalid_argument("stage masses must be given for all stages or none");
    if (all_mass && std::abs(rf - 1.0) > 1e-12)
        throw std::invalid_argument("stage masses must sum to 1");
}

double EdgeDistribution::sum() const {
    double s = 0.0;
    for (double w : weights) s += w;
    return s;
}

QcCode qc_from_edges(int rows, int cols, int z,
                     std::vector<std::pair<std::int32_t, std::int32_t>> edges) {
    QcCode code;
    code.rows = rows;
    code.cols = cols;
    code.z = z;
    code.row_ptr.assign(rows + 1, 0);
    code.col_ptr.assign(cols + 1, 0);
    for (const auto& [r, c] : edges) {
        ++code.row_ptr[r + 1];
        ++code.col_ptr[c + 1];
    }
    for (int r = 0; r < rows; ++r) code.row_ptr[r + 1] += code.row_ptr[r];
    for (int c = 0; c < cols; ++c) code.col_ptr[c + 1] += code.col_ptr[c];
    code.row_idx.resize(edges.size());
    code.col_idx.resize(edges.size());
    std::sort(edges.begin(), edges.end());
    std::vector<std::int32_t> cfill(code.col_ptr.begin(), code.col_ptr.end() - 1);
    std::size_t k = 0;
    for (const auto& [r, c] : edges) {
        code.row_idx[k++] = c;  // row-sorted order fills row_idx directly
        code.col_idx[cfill[c]++] = r;
    }
    return code;
}

std::vector<IntMat> components_from_partition(const IntMat& K) {
    int m = 0;
    for (int v : K.v) m = std::max(m, v);
    std::vector<IntMat> comps(m + 1, IntMat(K.rows, K.cols, 0));
    for (int i = 0; i < K.rows; ++i)
        for (int j = 0; j < K.cols; ++j)
            if (K.at(i, j) >= 0) comps[K.at(i, j)].at(i, j) = 1;
    return comps;
}

IntMat expand_coupled_protograph(const std::vector<IntMat>& components, int L) {
    if (components.empty()) throw std::invalid_argument("no components");
    const int gamma = components[0].rows, kappa = components[0].cols;
    const int m = static_cast<int>(components.size()) - 1;
    IntMat overlap(gamma, kappa, 0);
    for (const IntMat& h : components) {
        if (h.rows != gamma || h.cols != kappa)
            throw std::invalid_argument("component dimensions differ");
        for (int i = 0; i < gamma * kappa; ++i) overlap.v[i] += h.v[i];
    }
    for (int i = 0; i < gamma * kappa; ++i)
        if (overlap.v[i] > 1)
            throw std::invalid_argument("components overlap at entry " + std::to_string(i));
    IntMat out(gamma * (L + m), kappa * L, 0);
    for (int r = 0; r < L; ++r)
        for (int k = 0; k <= m; ++k)
            for (int i = 0; i < gamma; ++i)
                for (int j = 0; j < kappa; ++j)
                    if (components[k].at(i, j)) out.at((r + k) * gamma + i, r * kappa + j) = 1;
    return out;
}

QcCode lift(const IntMat& protograph, const IntMat& powers, int z) {
    if (powers.rows != protograph.rows || powers.cols != protograph.cols)
        throw std::invalid_argument("power matrix dimensions differ from protograph");
    std::vector<std::pair<std::int32_t, std::int32_t>> edges;
    for (int i = 0; i < protograph.rows; ++i)
        for (int j = 0; j < protograph.cols; ++j) {
            if (!protograph.at(i, j)) continue;
            const int t = powers.at(i, j);
            if (t < 0 || t >= z) throw std::invalid_argument("circulant power out of range");
            for (int a = 0; a < z; ++a) {
                const int col = ((a - t) % z + z) % z;
                edges.emplace_back(i * z + a, j * z + col);
            }
        }
    return qc_from_edges(protograph.rows * z, protograph.cols * z, z, std::move(edges));
}

QcCode build_sc_code(const IntMat& K, const IntMat& T, int z, int L) {
    const std::vector<IntMat> comps = components_from_partition(K);
    const IntMat proto = expand_coupled_protograph(comps, L);
    IntMat powers(proto.rows, proto.cols, -1);
    for (int r = 0; r < L; ++r)
        for (int i = 0; i < K.rows; ++i)
            for (int j = 0; j < K.cols; ++j) {
                const int k = K.at(i, j);
                if (k < 0) continue;
                powers.at((r + k) * K.rows + i, r * K.cols + j) = T.at(i, j);
            }
    return lift(proto, powers, z);
}

std::pair<std::int64_t, Rational> code_rate_and_length(const DesignPlan& plan, int stage) {
    if (stage < 0 || stage >= plan.num_stages()) throw std::invalid_argument("no such stage");
    const std::int64_t length =
        static_cast<std::int64_t>(plan.kappa) * plan.z * plan.L;
    const std::int64_t m = plan.stages[stage].memory();
    const std::int64_t kl = static_cast<std::int64_t>(plan.kappa) * plan.L;
    const Rational rate(kl - plan.gamma * (plan.L + m), kl);
    return {length, rate};
}

EdgeDistribution assemble_stage_distribution(const EdgeDistribution& p, const EdgeDistribution& q,
                                             double r_f, double r_n) {
    if (r_f <= 0.0 || r_n <= 0.0) throw std::invalid_argument("masses must be positive");
    if (q.offset != p.offset + p.size())
        throw std::invalid_argument("new window must start right after the fixed window");
    const double total = r_f + r_n;
    EdgeDistribution u;
    u.offset = p.offset;
    u.weights.reserve(p.weights.size() + q.weights.size());
    for (double w : p.weights) u.weights.push_back(w * r_f / total);
    for (double w : q.weights) u.weights.push_back(w * r_n / total);
    return u;
}

double hardware_sharing_savings(const std::vector<IntMat>& stage_bases) {
    if (stage_bases.empty()) throw std::invalid_argument("no stage bases");
    std::int64_t total = 0;
    for (std::size_t d = 0; d < stage_bases.size(); ++d) {
        const IntMat& b = stage_bases[d];
        if (d > 0) {
            const IntMat& prev = stage_bases[d - 1];
            if (prev.rows != b.rows || prev.cols != b.cols)
                throw std::invalid_argument("stage base dimensions differ");
            for (std::size_t i = 0; i < b.v.size(); ++i)
                if (prev.v[i] > b.v[i]) throw std::invalid_argument("stage bases are not nested");
        }
        for (int x : b.v) total += x ? 1 : 0;
    }
    std::int64_t final_ones = 0;
    for (int x : stage_bases.back().v) final_ones += x ? 1 : 0;
    return 1.0 - static_cast<double>(final_ones) / static_cast<double>(total);
}

}  // namespace rmc
