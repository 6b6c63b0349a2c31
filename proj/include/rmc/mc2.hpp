#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "rmc/counting.hpp"
#include "rmc/grade.hpp"
#include "rmc/matrix.hpp"
#include "rmc/protograph.hpp"

namespace rmc {

// Candidate pool for the chain, grouped by half-length (group g holds the
// cycle-(2g+4) candidates), candidate-major: candidate i of group g occupies
// entries[g][i*(2g+4) .. i*(2g+4)+2g+3].
struct Mc2CandidateSet {
    int entry_count = 0;  // flat size of the underlying matrix
    std::array<std::int64_t, 3> counts{};
    std::array<std::vector<std::int32_t>, 3> entries;

    std::int64_t total() const { return counts[0] + counts[1] + counts[2]; }
    static constexpr int width(int g) { return 2 * g + 4; }
};

// Collects candidates over the support for the requested groups. When
// K_filter is given only candidates active under that partitioning are kept
// (the lifting phase never needs the rest).
Mc2CandidateSet collect_mc2_candidates(const IntMat& support, const std::array<bool, 3>& want,
                                       const IntMat* K_filter = nullptr);

struct Mc2Config {
    int b = 3;                          // entries updated per transition
    std::int64_t max_transitions = 10000;
    CycleWeights weights{100.0, 10.0, 1.0};
    std::array<bool, 3> frozen_zero{};  // groups whose active count is pinned at 0
    long budget_linf = -1;              // partitioning only; <0 picks the value span
    long budget_l1 = -1;                // <0 picks ceil(optimizable * span / 4)
    double theta0 = 1.0;                // Gibbs temperature, decayed per sweep
    double theta_decay = 0.99;
    std::uint64_t seed = 1;
    int chains = 1;                     // independent restarts, best result kept
    int threads = 1;
    std::int64_t trace_stride = 1;      // 0 disables the transition trace
};

// One chain input: the full flat matrix (-1 outside the stage base), the
// immutability mask, the value set [value_lo, value_hi], and the activation
// rule (modulus 0 means the alternating sum must vanish exactly, as in
// partitioning; modulus z reads it cyclically, as in lifting). vn_memories,
// when nonempty, lists cumulative memories whose per-column degree must stay
// >= vn_min_degree (used only when designing the full-memory reference).
struct Mc2Context {
    IntMat x_init;
    IntMat fixed_mask;
    int value_lo = 0;
    int value_hi = 0;
    int modulus = 0;
    std::vector<int> vn_memories;
    int vn_min_degree = 3;
};

struct Mc2TraceRow {
    std::int64_t transition = 0;
    double c_current = 0.0;
    double c_opt = 0.0;
};

struct Mc2Result {
    double c_opt = 1.0;  // best normalized weighted count seen
    IntMat x_opt;
    std::int64_t transitions = 0;
    std::array<std::int64_t, 3> active_opt{};  // per-group active counts at x_opt
    std::vector<Mc2TraceRow> trace;
};

// One b-tuple per optimizable entry: the entry itself plus its b-1 most
// correlated optimizable peers (most shared candidates, ties to the lowest
// flat index). Returned flattened, b indices per tuple.
std::vector<std::int32_t> build_correlation_tuples(const Mc2CandidateSet& cands,
                                                   const std::vector<std::int32_t>& optimizable,
                                                   int b);

// The chain itself. Every transition evaluates all completions of one tuple,
// zeroes the probability of states leaving the constraint set (fixed entries,
// norm budgets around x_init in the partitioning phase, pinned-zero groups,
// column-degree floors), samples from the Gibbs distribution over the rest,
// and tracks the best state evaluated anywhere. Returns immediately when the
// weighted count reaches zero. An empty candidate pool yields c_opt = 0 at
// transition 0.
Mc2Result mc2_optimize(const Mc2Context& ctx, const Mc2CandidateSet& cands,
                       const Mc2Config& cfg);

// Initial partitioning state: fixed entries are copied from fixed_K (mask 1),
// remaining support entries get values value_lo.. apportioned to q by largest
// remainder and placed uniformly at random.
IntMat init_partition_state(const IntMat& support, const IntMat& fixed_K,
                            const IntMat& fixed_mask, int value_lo,
                            const EdgeDistribution& q, std::uint64_t seed);

struct LiftInit {
    IntMat T;
    std::int64_t attempts = 0;
    std::int64_t residual_c4 = 0;  // active cycle-4 candidates left (0 on success)
};

// Initial lifting state: fixed entries inherited, the rest seeded at random
// and then greedily re-drawn (entry by entry, each set to a value minimizing
// the active cycle-4 candidates through it) until none stays active or the
// attempt budget runs out.
LiftInit init_lift_state(const IntMat& K, const IntMat& fixed_T, const IntMat& fixed_mask,
                         int z, std::uint64_t seed, std::int64_t attempt_budget = 1000000);

struct KStarResult {
    IntMat K;
    Mc2Result chain;
};

// Full-memory partitioning that fixes the stage supports: values over
// 0..total_memory, initialized from the reference distribution, with every
// column keeping degree >= 3 inside each stage's cumulative window (checked
// for the initial state and preserved by the chain).
KStarResult design_reference_K_star(const DesignPlan& plan, const EdgeDistribution& p_star,
                                    const Mc2Config& cfg);

// Stage-d indicator matrices from the reference partitioning: H_n marks the
// entries whose K* value falls in the stage window, H_f the entries of all
// earlier windows (zero at stage 0).
std::pair<IntMat, IntMat> derive_stage_base(const IntMat& k_star, int m_fixed, int m_new,
                                            int stage_index);

// Baseline with the same base matrices: entries with K* value <= memory keep
// their K*/T* values, the rest become -1. fixed_mask marks the kept support.
StageMatrices derive_sf_baseline(const IntMat& k_star, const IntMat& t_star, int memory);

struct LiftOutcome {
    IntMat T;
    std::int64_t init_attempts = 0;
    bool cycle4_cleared = false;
    bool cycle6_cleared = false;
    std::array<std::int64_t, 3> active{};  // final active candidate counts
    Mc2Result chain6;                      // cycle-6 phase
    Mc2Result chain8;                      // cycle-8 phase (empty when skipped)
};

// Staged lifting: clear cycle-4 candidates first (greedy init, then a chain
// on the cycle-4 objective if needed), minimize cycle-6 with cycle-4 pinned
// at zero, and - once cycle-6 hits zero and t8 > 0 - minimize cycle-8 with
// both shorter lengths pinned. Budgets t6/t8 are transitions per phase.
LiftOutcome run_staged_lifting(const IntMat& K, const IntMat& fixed_T, const IntMat& fixed_mask,
                               int z, const Mc2Config& cfg, std::int64_t t6, std::int64_t t8);

}  // namespace rmc
