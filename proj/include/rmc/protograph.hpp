#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "rmc/laurent.hpp"
#include "rmc/matrix.hpp"
#include "rmc/rational.hpp"

namespace rmc {

// One design stage: stage 0 spans component indices 0..m_new (memory m_new),
// every later stage appends m_new fresh indices on top of the m_fixed it
// inherits. Stage-d memory is m_fixed + m_new either way.
struct StageSpec {
    int index = 0;
    int m_new = 0;
    double r_new = -1.0;  // mass of the new window; < 0 until assigned
    int m_fixed = 0;
    double r_fixed = 0.0;

    int window_lo() const { return index == 0 ? 0 : m_fixed + 1; }
    int window_hi() const { return m_fixed + m_new; }
    int window_size() const { return window_hi() - window_lo() + 1; }
    int memory() const { return m_fixed + m_new; }
};

struct DesignPlan {
    int gamma = 0;
    int kappa = 0;
    int z = 0;
    int L = 0;
    std::vector<StageSpec> stages;

    int num_stages() const { return static_cast<int>(stages.size()); }
    int total_memory() const { return stages.empty() ? 0 : stages.back().memory(); }

    // Fills m_fixed/r_fixed from the stage chain and checks the §-level
    // constraints (gamma >= 4, kappa > gamma, positive windows, masses that
    // either are all unset or sum to 1).
    void finalize();
};

// Probability vector over a contiguous range of component indices.
struct EdgeDistribution {
    int offset = 0;
    std::vector<double> weights;

    int size() const { return static_cast<int>(weights.size()); }
    double sum() const;
    LaurentPoly poly() const { return LaurentPoly::from_coeffs(offset, weights); }
};

// Partitioning and lifting state of one stage. K holds component indices,
// T circulant powers; -1 in both marks entries outside the stage's base
// matrix. fixed_mask marks entries inherited from earlier stages.
struct StageMatrices {
    IntMat K;
    IntMat T;
    IntMat fixed_mask;
};

// Lifted quasi-cyclic parity-check matrix in both adjacency directions.
struct QcCode {
    int rows = 0;
    int cols = 0;
    int z = 1;
    std::vector<std::int32_t> row_ptr, row_idx;  // check node -> variable nodes
    std::vector<std::int32_t> col_ptr, col_idx;  // variable node -> check nodes

    std::int64_t ones() const { return static_cast<std::int64_t>(row_idx.size()); }
};

QcCode qc_from_edges(int rows, int cols, int z, std::vector<std::pair<std::int32_t, std::int32_t>> edges);

// Splits K into per-component indicator matrices H_0..H_max.
std::vector<IntMat> components_from_partition(const IntMat& K);

// Coupled protograph: replica r (0-indexed) places H_k at block-row r+k,
// block-column r; result is gamma*(L+m) x kappa*L.
IntMat expand_coupled_protograph(const std::vector<IntMat>& components, int L);

// Replaces each protograph 1 by the z x z circulant of the aligned power
// (identity with columns shifted t units cyclically left: entry (a, j) is 1
// iff j = a - t mod z), each 0 by a zero block.
QcCode lift(const IntMat& protograph, const IntMat& powers, int z);

// Full SC code build: couple K's components over L replicas, then lift with
// the base powers T repeated per replica (time-invariant lifting).
QcCode build_sc_code(const IntMat& K, const IntMat& T, int z, int L);

// Length kappa*z*L and exact design rate 1 - gamma(L+m)/(kappa L) at the
// given stage's memory.
std::pair<std::int64_t, Rational> code_rate_and_length(const DesignPlan& plan, int stage);

// u = [ r_f/(r_f+r_n) * p , r_n/(r_f+r_n) * q ]; q must start right after p.
EdgeDistribution assemble_stage_distribution(const EdgeDistribution& p, const EdgeDistribution& q,
                                             double r_f, double r_n);

// 1 - ones(final base) / sum of ones over stage bases: the protograph-edge
// fraction saved by one nested design versus separate per-stage codes.
// Bases must be entrywise nested.
double hardware_sharing_savings(const std::vector<IntMat>& stage_bases);

}  // namespace rmc
