#pragma once

#include <vector>

#include "rmc/protograph.hpp"

namespace rmc {

struct GradeConfig {
    double w6 = 10.0;  // cycle-6 weight
    double w8 = 1.0;   // cycle-8 weight; keep w6 > 1 whenever w8 = 1
    double epsilon = 1e-8;
    double alpha = 0.05;
    long max_iterations = 100000;
    // Initialization policy: empty selects the uniform distribution over the
    // stage window; otherwise must match the window size and sum to 1.
    std::vector<double> init_q;
};

struct GradeResult {
    EdgeDistribution q;
    double e6 = 0.0;  // expectations at q under the stage masses,
    double e8 = 0.0;  // independent of the objective weights
    long iterations = 0;
    std::vector<double> objective_trace;  // accepted values only; non-increasing
    double kkt_residual = 0.0;            // centered-gradient infinity norm at q
    double lagrange_c = 0.0;              // mean uncentered gradient at q
    long projections = 0;                 // entries clipped back into the simplex
    long halvings = 0;                    // step-size backtracks
    bool converged = false;
};

// Minimizes w6*E6 + w8*E8 over the stage-d window by projected gradient
// descent: center the gradient (sum-free step keeps the simplex), take a
// normalized step of size alpha, clip negatives to 1e-9 and renormalize.
// A step that increases the objective is rejected and alpha halved (at most
// 60 times). Stops when an accepted step changes the objective by at most
// epsilon. p is the fixed distribution over components 0..m_fixed from the
// previous stage (empty at stage 0); the stage masses r_fixed/r_new must be
// assigned in the plan.
GradeResult rmc_grade(const DesignPlan& plan, int stage, const EdgeDistribution& p,
                      const GradeConfig& cfg);

// Stage-0 run: no fixed part, distribution over components 0..m_new. If the
// plan leaves the stage-0 mass unassigned the code is treated as standalone
// (r_new = 1).
GradeResult run_stage0(const DesignPlan& plan, const GradeConfig& cfg);

// Splits a full-memory reference distribution into per-stage masses: r_n,d is
// the mass falling inside stage d's component window. p_star must cover
// 0..total_memory of the finalized plan.
std::vector<double> derive_stage_masses(const std::vector<double>& p_star,
                                        const DesignPlan& plan);

struct GradeStageRun {
    int stage = 0;
    double r_f = 0.0;
    double r_n = 0.0;
    GradeResult result;
    EdgeDistribution u;  // cumulative distribution over components 0..memory(d)
};

struct PipelineResult {
    DesignPlan plan;        // stage masses filled in
    GradeResult reference;  // single-window run over the full memory (p*)
    bool masses_derived = false;
    std::vector<GradeStageRun> stages;

    const EdgeDistribution& p_star() const { return reference.q; }
};

// Full recursive design: a reference run over the total memory yields p*,
// stage masses are taken from the plan or derived as p* window sums, then
// stage d optimizes its window given p = u_{d-1} and feeds the reassembled
// u_d = [r_f/(r_f+r_n) p, r_n/(r_f+r_n) q] forward.
PipelineResult run_pipeline(const DesignPlan& plan, const GradeConfig& cfg);

}  // namespace rmc
