#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "rmc/candidates.hpp"
#include "rmc/expectation.hpp"
#include "rmc/grade.hpp"
#include "rmc/protograph.hpp"

using rmc::candidate_census;
using rmc::DesignPlan;
using rmc::EdgeDistribution;
using rmc::GradeConfig;
using rmc::GradeResult;
using rmc::LaurentPoly;
using rmc::StageSpec;

namespace {

DesignPlan plan_for(int gamma, int kappa, const std::vector<int>& stage_memories,
                    const std::vector<double>& masses = {}) {
    DesignPlan p;
    p.gamma = gamma;
    p.kappa = kappa;
    p.z = 7;
    p.L = 5;
    for (std::size_t i = 0; i < stage_memories.size(); ++i) {
        StageSpec s;
        s.index = static_cast<int>(i);
        s.m_new = stage_memories[i];
        if (!masses.empty()) s.r_new = masses[i];
        p.stages.push_back(s);
    }
    p.finalize();
    return p;
}

}  // namespace

TEST_CASE("degenerate one-component window needs no search") {
    const DesignPlan p = plan_for(4, 6, {1, 1}, {0.6, 0.4});
    EdgeDistribution prev;
    prev.offset = 0;
    prev.weights = {0.5, 0.5};
    const GradeResult r = rmc_grade(p, 1, prev, GradeConfig{});
    REQUIRE(r.q.size() == 1);
    CHECK(r.q.offset == 2);
    CHECK(r.q.weights[0] == doctest::Approx(1.0));
    CHECK(r.converged);
}

TEST_CASE("standalone stage-0 equals an explicit unit mass") {
    const DesignPlan unset = plan_for(4, 6, {2});
    const DesignPlan assigned = plan_for(4, 6, {2}, {1.0});
    GradeConfig cfg;
    const GradeResult a = rmc::run_stage0(unset, cfg);
    const GradeResult b = rmc_grade(assigned, 0, EdgeDistribution{}, cfg);
    REQUIRE(a.q.size() == b.q.size());
    for (int k = 0; k < a.q.size(); ++k)
        CHECK(a.q.weights[static_cast<std::size_t>(k)] ==
              doctest::Approx(b.q.weights[static_cast<std::size_t>(k)]));
    CHECK(a.e6 == doctest::Approx(b.e6));
}

TEST_CASE("simplex invariants and reported expectations") {
    const DesignPlan p = plan_for(4, 7, {3});
    GradeConfig cfg;
    const GradeResult r = rmc::run_stage0(p, cfg);
    CHECK(r.converged);

    double total = 0.0;
    for (double w : r.q.weights) {
        CHECK(w >= 0.0);
        total += w;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));

    for (std::size_t i = 1; i < r.objective_trace.size(); ++i)
        CHECK(r.objective_trace[i] <= r.objective_trace[i - 1] + 1e-12);

    // Reported expectations re-evaluate exactly at the returned point.
    const LaurentPoly one = LaurentPoly::one();
    const double e6 = rmc::expected_cycles_expanded(3, candidate_census(3, 4, 7), 0.0, one, 1.0,
                                                    r.q.poly());
    const double e8 = rmc::expected_cycles_expanded(4, candidate_census(4, 4, 7), 0.0, one, 1.0,
                                                    r.q.poly());
    CHECK(r.e6 == doctest::Approx(e6).epsilon(1e-9));
    CHECK(r.e8 == doctest::Approx(e8).epsilon(1e-9));

    // The centered gradient shrinks to a small fraction of the objective
    // scale at an interior optimum.
    CHECK(r.kkt_residual < 0.05 * (cfg.w6 * r.e6 + cfg.w8 * r.e8 + 1.0));
}

TEST_CASE("stage-0 optimum inherits the objective's index symmetry") {
    // Reversing component indices preserves every alternating sum, so from a
    // symmetric (uniform) start the iterates stay symmetric.
    const DesignPlan p = plan_for(4, 6, {2});
    const GradeResult r = rmc::run_stage0(p, GradeConfig{});
    REQUIRE(r.q.size() == 3);
    CHECK(std::fabs(r.q.weights[0] - r.q.weights[2]) < 1e-6);
    // Edge components carry more mass than the middle one: they participate
    // in fewer vanishing alternating-sum patterns.
    CHECK(r.q.weights[0] > r.q.weights[1]);
}

TEST_CASE("explicit initialization is validated") {
    const DesignPlan p = plan_for(4, 6, {2});
    GradeConfig cfg;
    cfg.init_q = {0.5, 0.5};  // window needs 3 entries
    CHECK_THROWS_AS(rmc::run_stage0(p, cfg), std::invalid_argument);
    cfg.init_q = {0.5, 0.4, 0.2};  // does not sum to 1
    CHECK_THROWS_AS(rmc::run_stage0(p, cfg), std::invalid_argument);
    cfg.init_q = {0.4, 0.2, 0.4};
    CHECK_NOTHROW(rmc::run_stage0(p, cfg));
}

TEST_CASE("stage masses split the reference distribution by window") {
    const DesignPlan p = plan_for(7, 35, {8, 3, 4});
    const std::vector<double> uniform(16, 1.0 / 16.0);
    const std::vector<double> masses = rmc::derive_stage_masses(uniform, p);
    REQUIRE(masses.size() == 3);
    CHECK(masses[0] == doctest::Approx(0.5625));
    CHECK(masses[1] == doctest::Approx(0.1875));
    CHECK(masses[2] == doctest::Approx(0.25));

    const DesignPlan single = plan_for(4, 6, {2});
    const std::vector<double> lone = rmc::derive_stage_masses({0.3, 0.3, 0.4}, single);
    REQUIRE(lone.size() == 1);
    CHECK(lone[0] == doctest::Approx(1.0));

    CHECK_THROWS_AS(rmc::derive_stage_masses({0.5, 0.5}, p), std::invalid_argument);
}

TEST_CASE("pipeline threads stage outputs forward") {
    const DesignPlan p = plan_for(5, 8, {1, 1});
    const rmc::PipelineResult pipe = rmc::run_pipeline(p, GradeConfig{});
    CHECK(pipe.masses_derived);
    REQUIRE(pipe.stages.size() == 2);

    // Masses must match the reference split.
    const std::vector<double> masses =
        rmc::derive_stage_masses(pipe.reference.q.weights, pipe.plan);
    CHECK(pipe.stages[0].r_n == doctest::Approx(masses[0]));
    CHECK(pipe.stages[1].r_n == doctest::Approx(masses[1]));
    CHECK(pipe.stages[1].r_f == doctest::Approx(masses[0]));

    // Stage 1's window has one component, so u_1 concatenates the scaled
    // stage-0 distribution with the scaled unit mass.
    const rmc::GradeStageRun& s0 = pipe.stages[0];
    const rmc::GradeStageRun& s1 = pipe.stages[1];
    REQUIRE(s1.result.q.size() == 1);
    REQUIRE(s1.u.size() == 3);
    const double denom = s1.r_f + s1.r_n;
    CHECK(s1.u.weights[0] == doctest::Approx(s1.r_f / denom * s0.u.weights[0]));
    CHECK(s1.u.weights[1] == doctest::Approx(s1.r_f / denom * s0.u.weights[1]));
    CHECK(s1.u.weights[2] == doctest::Approx(s1.r_n / denom));

    // Stage-0 u is the stage-0 window distribution itself.
    REQUIRE(s0.u.size() == 2);
    CHECK(s0.u.weights[0] == doctest::Approx(s0.result.q.weights[0]));
    CHECK(s0.u.offset == 0);
}
