#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rmc/grade.hpp"
#include "rmc/mc2.hpp"
#include "rmc/plan.hpp"

namespace rmc {

// One designed code of the nested family.
struct StageArtifact {
    int stage = 0;
    double r_f = 0.0;
    double r_n = 0.0;
    EdgeDistribution q;  // window distribution from the gradient stage
    EdgeDistribution u;  // cumulative distribution up to this stage's memory
    double e6 = 0.0;     // window expectations at q
    double e8 = 0.0;
    StageMatrices rmc;
    double partition_c = 1.0;  // normalized weighted count after partitioning
    std::int64_t partition_transitions = 0;
    bool cycle4_cleared = false;
    bool cycle6_cleared = false;
    std::int64_t lift_attempts = 0;
    std::int64_t c6 = -1;  // lifted cycle counts; -1 = not counted
    std::int64_t c8 = -1;
    std::int64_t length = 0;
    Rational rate;
};

// Straightforward baseline at one memory: the full-memory design thresholded.
struct BaselineArtifact {
    int stage = 0;
    StageMatrices sf;
    std::int64_t c6 = -1;
    std::int64_t c8 = -1;
};

struct DesignArtifact {
    PlanFile plan;  // stage masses resolved
    EdgeDistribution p_star;
    IntMat k_star;
    IntMat t_star;
    double kstar_c = 1.0;
    std::int64_t kstar_transitions = 0;
    std::vector<StageArtifact> stages;
    std::vector<BaselineArtifact> baselines;  // empty until the baseline step
    double hw_savings = -1.0;
    int failed_stage = -1;  // -1 when the whole chain succeeded
    std::string failure;
};

// End-to-end chain: gradient pipeline -> full-memory reference partitioning
// K* (and its lifting T*) -> per-stage partitioning over the stage windows
// with earlier stages pinned -> per-stage staged lifting -> lifted cycle
// counts. A stage that cannot clear its cycle-4 candidates stops the chain;
// everything designed so far stays in the artifact with failed_stage set.
DesignArtifact run_design(const PlanFile& plan, bool count_cycles8 = true);

// Thresholds (K*, T*) at every stage memory and counts its lifted cycles.
// Pure post-processing: never re-runs optimization.
void add_baseline(DesignArtifact& art, bool count_cycles8 = true);

std::string design_to_json(const DesignArtifact& art);
DesignArtifact design_from_json(const std::string& text);

// design.json plus one alist per designed matrix and a summary table.
void save_design(const DesignArtifact& art, const std::string& dir);
DesignArtifact load_design(const std::string& dir);

// Paired cycle-count rows (code, rate, memory, RMC counts, SF counts,
// reduction percentages), one line per stage.
std::string summary_table(const DesignArtifact& art);

}  // namespace rmc
