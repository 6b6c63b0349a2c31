// Acceptance gate: one criterion per invocation (argv[1] = 1..12), each
// printing a single PASS/FAIL line plus indented diagnostics. Exit code 0
// iff the requested criterion passed. Tolerances are pinned below next to
// the criterion they guard. Criteria 9, 11 and 12 share one designed code
// family, cached under ./acceptance_cache relative to the working directory
// and rebuilt whenever the embedded plan or the cached artifact is stale.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <string>
#include <vector>

#include "rmc/artifact.hpp"
#include "rmc/candidates.hpp"
#include "rmc/counting.hpp"
#include "rmc/expectation.hpp"
#include "rmc/fer.hpp"
#include "rmc/grade.hpp"
#include "rmc/kernels.hpp"
#include "rmc/laurent.hpp"
#include "rmc/matrix.hpp"
#include "rmc/mc2.hpp"
#include "rmc/plan.hpp"
#include "rmc/protograph.hpp"
#include "rmc/rng.hpp"
#include "rmc/tanner.hpp"

namespace {

using namespace rmc;

// ---------------------------------------------------------------------------
// shared fixtures

// The (7,23) three-stage family driving criteria 8, 9, 11 and 12. The
// simulate section only affects criterion 11 and is excluded from the cache
// key, so the error-rate grid can be retuned without redesigning the codes.
const char* kGroup1Plan = R"(# three-stage nested family at gamma 7, kappa 23
gamma 7
kappa 23
z 23
L 12
stage 6
stage 2
stage 3
grade.w6 10
grade.w8 1
mc2.b 2
mc2.transitions 40000
mc2.w4 100
mc2.w6 10
mc2.w8 0
mc2.budget_linf 2
mc2.budget_l1 40
mc2.seed 5
mc2.trace_stride 1000
lift.transitions 120000
lift.t8 0
lift.b 2
simulate.channel awgn
simulate.grid -0.7 -0.45 -0.2
simulate.min_errors 200
simulate.max_frames 6000
simulate.iterations 30
simulate.seed 11
)";

const char* kCacheDir = "acceptance_cache/group1";

// Canonical text of the design-relevant plan content: derived stage masses
// and the simulate section are cleared so a cached artifact (whose masses
// were resolved during the run) keys equal to the embedded plan.
std::string design_key(PlanFile plan) {
    for (StageSpec& st : plan.design.stages) st.r_new = -1.0;
    plan.simulate = SimulateSection{};
    return format_plan(plan);
}

DesignArtifact ensure_group1() {
    const PlanFile plan = parse_plan_text(kGroup1Plan);
    const std::string key = design_key(plan);
    try {
        DesignArtifact art = load_design(kCacheDir);
        if (design_key(art.plan) == key && art.failed_stage == -1 &&
            art.stages.size() == 3 && art.baselines.size() == 3) {
            std::printf("  cache: reusing %s\n", kCacheDir);
            return art;
        }
        std::printf("  cache: stale artifact under %s, redesigning\n", kCacheDir);
    } catch (const std::exception&) {
        std::printf("  cache: no artifact under %s, designing\n", kCacheDir);
    }
    DesignArtifact art = run_design(plan, true);
    if (art.failed_stage == -1) {
        add_baseline(art, true);
        save_design(art, kCacheDir);
        std::printf("  cache: saved %s\n", kCacheDir);
    } else {
        std::printf("  design failed at stage %d: %s\n", art.failed_stage, art.failure.c_str());
    }
    return art;
}

LaurentPoly random_distribution(std::mt19937_64& gen, int min_deg, int span) {
    std::vector<double> c(static_cast<std::size_t>(span));
    double total = 0.0;
    for (double& v : c) {
        v = 0.05 + uniform_unit(gen);
        total += v;
    }
    for (double& v : c) v /= total;
    return LaurentPoly::from_coeffs(min_deg, c);
}

LaurentPoly bump(const LaurentPoly& g, int k, double h) {
    std::vector<double> c = g.coeffs();
    c[static_cast<std::size_t>(k)] += h;
    return LaurentPoly::from_coeffs(g.min_degree(), c);
}

// ---------------------------------------------------------------------------
// 1. census closed forms vs direct enumeration

bool crit_census() {
    // Frozen closed-form candidate counts for the three shapes, ell = 2, 3, 4.
    struct Row {
        int gamma, kappa;
        std::uint64_t a[3];
    };
    const Row rows[] = {
        {4, 6, {90ULL, 480ULL, 4590ULL}},
        {5, 8, {280ULL, 3360ULL, 65520ULL}},
        {7, 12, {1386ULL, 46200ULL, 2224530ULL}},
    };
    bool ok = true;
    for (const Row& r : rows) {
        const IntMat support = IntMat::ones(r.gamma, r.kappa);
        for (int ell = 2; ell <= 4; ++ell) {
            std::uint64_t enumerated = 0;
            enumerate_candidates(support, ell, [&](const std::int32_t*) { ++enumerated; });
            const std::uint64_t formula = candidate_census(ell, r.gamma, r.kappa);
            const std::uint64_t frozen = r.a[ell - 2];
            const bool match = enumerated == formula && formula == frozen;
            ok = ok && match;
            std::printf("  (%d,%d) ell=%d: enumerated=%llu formula=%llu frozen=%llu%s\n",
                        r.gamma, r.kappa, ell, static_cast<unsigned long long>(enumerated),
                        static_cast<unsigned long long>(formula),
                        static_cast<unsigned long long>(frozen), match ? "" : "  MISMATCH");
        }
    }
    return ok;
}

// ---------------------------------------------------------------------------
// 2. general expectation vs separated closed forms

bool crit_lemma_theorem() {
    const double kRelTol = 1e-9;
    std::mt19937_64 gen = make_engine(derive_key(0xACC, 2));
    bool ok = true;
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const int m_f = static_cast<int>(uniform_below(gen, 7));      // 0..6
        const int m_n = 1 + static_cast<int>(uniform_below(gen, 4));  // 1..4
        const double r_f = trial % 10 == 0 ? 0.0 : 0.2 + 0.6 * uniform_unit(gen);
        const double r_n = 1.0 - r_f;
        const LaurentPoly f =
            m_f == 0 ? LaurentPoly::one() : random_distribution(gen, 0, m_f + 1);
        const LaurentPoly g = random_distribution(gen, m_f + 1, m_n);
        for (int ell : {2, 3, 4}) {
            const std::uint64_t a = candidate_census(ell, 7, 12);
            const double direct = expected_cycles(ell, a, r_f, f, r_n, g);
            const double expanded = expected_cycles_expanded(ell, a, r_f, f, r_n, g);
            const double denom = std::max({std::fabs(direct), std::fabs(expanded), 1e-12});
            const double rel = std::fabs(direct - expanded) / denom;
            worst = std::max(worst, rel);
            if (rel >= kRelTol) {
                std::printf("  trial %d ell=%d: %.17g vs %.17g rel=%.3e\n", trial, ell, direct,
                            expanded, rel);
                ok = false;
            }
        }
    }
    std::printf("  100 instances, worst relative gap %.3e (tol %.0e)\n", worst, kRelTol);
    return ok;
}

// ---------------------------------------------------------------------------
// 3. analytic gradient vs central finite differences

bool crit_gradient() {
    const double kFdTol = 1e-5;
    const double kExpTol = 1e-9;
    const double h = 1e-6;
    std::mt19937_64 gen = make_engine(derive_key(0xACC, 3));
    bool ok = true;
    double worst_fd = 0.0, worst_exp = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const int m_f = static_cast<int>(uniform_below(gen, 7));
        const int m_n = 1 + static_cast<int>(uniform_below(gen, 4));
        const double r_f = m_f == 0 ? 0.0 : 0.2 + 0.5 * uniform_unit(gen);
        const double r_n = 0.3 + 0.5 * uniform_unit(gen);
        const LaurentPoly f =
            m_f == 0 ? LaurentPoly::one() : random_distribution(gen, 0, m_f + 1);
        const LaurentPoly g = random_distribution(gen, m_f + 1, m_n);
        for (int ell : {2, 3, 4}) {
            const std::uint64_t a = candidate_census(ell, 7, 23);
            const std::vector<double> grad = grad_expected_cycles(ell, a, r_f, f, r_n, g);
            double gnorm = 0.0;
            for (double v : grad) gnorm = std::max(gnorm, std::fabs(v));
            for (int k = 0; k < m_n; ++k) {
                const double up = expected_cycles(ell, a, r_f, f, r_n, bump(g, k, h));
                const double dn = expected_cycles(ell, a, r_f, f, r_n, bump(g, k, -h));
                const double fd = (up - dn) / (2.0 * h);
                const double denom = std::max(
                    {std::fabs(grad[static_cast<std::size_t>(k)]), std::fabs(fd), 1e-6 * gnorm, 1e-12});
                const double rel = std::fabs(fd - grad[static_cast<std::size_t>(k)]) / denom;
                worst_fd = std::max(worst_fd, rel);
                if (rel >= kFdTol) {
                    std::printf("  trial %d ell=%d k=%d: grad=%.12g fd=%.12g rel=%.3e\n", trial,
                                ell, k, grad[static_cast<std::size_t>(k)], fd, rel);
                    ok = false;
                }
            }
        }
        const std::uint64_t a4 = candidate_census(2, 7, 23);
        const std::vector<double> direct = grad_expected_cycles(2, a4, r_f, f, r_n, g);
        const std::vector<double> expanded = grad_cycle4_expanded(a4, r_f, f, r_n, g);
        for (std::size_t k = 0; k < direct.size(); ++k) {
            const double denom = std::max({std::fabs(direct[k]), std::fabs(expanded[k]), 1.0});
            const double rel = std::fabs(direct[k] - expanded[k]) / denom;
            worst_exp = std::max(worst_exp, rel);
            if (rel >= kExpTol) {
                std::printf("  trial %d expansion k=%zu: %.17g vs %.17g\n", trial, k, direct[k],
                            expanded[k]);
                ok = false;
            }
        }
    }
    std::printf("  50 instances: worst fd gap %.3e (tol %.0e), worst expansion gap %.3e (tol %.0e)\n",
                worst_fd, kFdTol, worst_exp, kExpTol);
    return ok;
}

// ---------------------------------------------------------------------------
// 4. expectations vs i.i.d. sampling

bool crit_sampling() {
    const int kGamma = 4, kKappa = 6;
    const std::int64_t kSamples = 100000;
    struct Dist {
        double r_f;
        std::vector<double> f;  // over 0..m_f
        std::vector<double> g;  // over m_f+1..m_f+m_n
    };
    const Dist dists[] = {
        {0.60, {0.7, 0.3}, {1.0}},
        {0.50, {0.5, 0.3, 0.2}, {0.55, 0.45}},
        {0.45, {0.4, 0.3, 0.2, 0.1}, {0.5, 0.25, 0.25}},
        {0.00, {1.0}, {0.4, 0.1, 0.2, 0.3}},
        {0.80, {0.3, 0.25, 0.2, 0.15, 0.1}, {1.0}},
    };

    const IntMat support = IntMat::ones(kGamma, kKappa);
    CandidateList lists[3];
    for (int ell = 2; ell <= 4; ++ell) lists[ell - 2] = collect_candidates(support, ell);

    bool ok = true;
    std::mt19937_64 gen = make_engine(derive_key(0xACC, 4));
    for (std::size_t di = 0; di < std::size(dists); ++di) {
        const Dist& d = dists[di];
        const int m_f = static_cast<int>(d.f.size()) - 1;
        const double r_n = 1.0 - d.r_f;
        const LaurentPoly f = LaurentPoly::from_coeffs(0, d.f);
        const LaurentPoly g = LaurentPoly::from_coeffs(m_f + 1, d.g);

        // mixture over component indices, cumulative for inversion sampling
        std::vector<int> comp;
        std::vector<double> cum;
        double acc = 0.0;
        for (std::size_t k = 0; k < d.f.size(); ++k) {
            acc += d.r_f * d.f[k];
            comp.push_back(static_cast<int>(k));
            cum.push_back(acc);
        }
        for (std::size_t k = 0; k < d.g.size(); ++k) {
            acc += r_n * d.g[k];
            comp.push_back(m_f + 1 + static_cast<int>(k));
            cum.push_back(acc);
        }
        cum.back() = 1.0;

        double sum[3] = {0, 0, 0}, sumsq[3] = {0, 0, 0};
        IntMat K(kGamma, kKappa);
        for (std::int64_t s = 0; s < kSamples; ++s) {
            for (int& v : K.v) {
                const double u = uniform_unit(gen);
                const std::size_t j = static_cast<std::size_t>(
                    std::lower_bound(cum.begin(), cum.end(), u) - cum.begin());
                v = comp[std::min(j, cum.size() - 1)];
            }
            for (int e = 0; e < 3; ++e) {
                const double c =
                    static_cast<double>(count_active_scan(lists[e], K.v.data(), nullptr, 1));
                sum[e] += c;
                sumsq[e] += c * c;
            }
        }
        for (int e = 0; e < 3; ++e) {
            const int ell = e + 2;
            const double mean = sum[e] / static_cast<double>(kSamples);
            const double var =
                (sumsq[e] - static_cast<double>(kSamples) * mean * mean) /
                static_cast<double>(kSamples - 1);
            const double se = std::sqrt(std::max(var, 0.0) / static_cast<double>(kSamples));
            const std::uint64_t a = candidate_census(ell, kGamma, kKappa);
            const double expected = expected_cycles(ell, a, d.r_f, f, r_n, g);
            const double tol = std::max(3.0 * se, 1e-9);
            const bool match = std::fabs(mean - expected) <= tol;
            ok = ok && match;
            std::printf("  dist %zu ell=%d: mean=%.4f expected=%.4f se=%.4f z=%+.2f%s\n", di, ell,
                        mean, expected, se, se > 0 ? (mean - expected) / se : 0.0,
                        match ? "" : "  OUTSIDE 3 SE");
        }
    }
    return ok;
}

// ---------------------------------------------------------------------------
// 5. three-stage (7,35) schedule against its published reference values

bool crit_example1() {
    const double kExpRelTol = 0.02;   // per-stage expectation targets
    const double kEntryTol = 0.01;    // per-entry distribution deviation
    const double kFallback = 1.02;    // objective ratio when another basin is hit

    // Reference stage distributions for the (7,35) schedule (8,3,4), frozen
    // to four decimals, plus the E6/E8 values published alongside them and
    // the cumulative edge masses of each stage.
    const std::vector<double> u0 = {0.2494, 0.0925, 0.0685, 0.0605, 0.0582,
                                    0.0604, 0.0688, 0.0920, 0.2497};
    const std::vector<double> u1 = {0.2086, 0.0774, 0.0573, 0.0506, 0.0487, 0.0506,
                                    0.0576, 0.0769, 0.2088, 0.0018, 0.0472, 0.1148};
    const std::vector<double> u2 = {0.1324, 0.0491, 0.0364, 0.0321, 0.0309, 0.0321,
                                    0.0365, 0.0488, 0.1325, 0.0011, 0.0300, 0.0729,
                                    0.0004, 0.0691, 0.0863, 0.2096};
    const std::vector<double>* refs[3] = {&u0, &u1, &u2};
    const double target6[3] = {1580.0, 3780.0, 41201.0};
    const double target8[3] = {35193.0, 202422.0, 5431700.0};
    const double mass[3] = {0.5322, 0.6366, 1.0};

    DesignPlan plan;
    plan.gamma = 7;
    plan.kappa = 35;
    plan.z = 29;
    plan.L = 16;
    plan.stages.resize(3);
    plan.stages[0].m_new = 8;
    plan.stages[1].m_new = 3;
    plan.stages[2].m_new = 4;
    plan.finalize();

    GradeConfig cfg;
    cfg.w6 = 1.0;  // cycle-6-only objective reproduces the reference basin
    cfg.w8 = 0.0;

    const PipelineResult pipe = run_pipeline(plan, cfg);
    bool ok = true;
    for (int d = 0; d < 3; ++d) {
        const GradeStageRun& st = pipe.stages[static_cast<std::size_t>(d)];
        const std::vector<double>& ref = *refs[d];
        if (st.u.weights.size() != ref.size()) {
            std::printf("  stage %d: distribution length %zu, reference %zu\n", d,
                        st.u.weights.size(), ref.size());
            return false;
        }
        double maxdev = 0.0;
        for (std::size_t k = 0; k < ref.size(); ++k)
            maxdev = std::max(maxdev, std::fabs(st.u.weights[k] - ref[k]));
        const double rel6 = st.result.e6 / target6[d] - 1.0;
        const double rel8 = st.result.e8 / target8[d] - 1.0;
        const bool primary = std::fabs(rel6) <= kExpRelTol && std::fabs(rel8) <= kExpRelTol &&
                             maxdev <= kEntryTol;

        // objective of the reference distribution under the same mass
        // convention: E6 of the cumulative mixture scaled to its edge mass
        const LaurentPoly uref = LaurentPoly::from_coeffs(0, ref);
        const double ref_obj = expected_cycles(3, candidate_census(3, 7, 35), 0.0,
                                               LaurentPoly::one(), mass[d], uref);
        const double achieved = st.result.e6;
        const bool fallback = achieved <= kFallback * ref_obj;

        ok = ok && (primary || fallback);
        std::printf(
            "  stage %d: e6=%.1f (%+.2f%%) e8=%.1f (%+.2f%%) maxdev=%.4f -> primary %s; "
            "objective %.1f vs reference %.1f (ratio %.4f) -> fallback %s\n",
            d, st.result.e6, 100.0 * rel6, st.result.e8, 100.0 * rel8, maxdev,
            primary ? "pass" : "miss", achieved, ref_obj, achieved / ref_obj,
            fallback ? "pass" : "miss");
    }
    std::printf("  reference run: %ld iterations, converged=%d\n", pipe.reference.iterations,
                pipe.reference.converged ? 1 : 0);
    return ok;
}

// ---------------------------------------------------------------------------
// 6. condition-based lifted counts vs explicit Tanner-graph enumeration

bool crit_counting_oracle() {
    const int kGamma = 3, kKappa = 5, kZ = 5, kL = 4;
    std::mt19937_64 gen = make_engine(derive_key(0xACC, 6));
    bool ok = true;
    for (int draw = 0; draw < 5; ++draw) {
        IntMat K(kGamma, kKappa), T(kGamma, kKappa);
        for (int& v : K.v) v = static_cast<int>(uniform_below(gen, 2));  // memory 1
        for (int& v : T.v) v = static_cast<int>(uniform_below(gen, kZ));
        const QcCode code = build_sc_code(K, T, kZ, kL);
        for (int ell : {2, 3, 4}) {
            const std::int64_t fast = count_cycles_lifted(K, T, kZ, kL, ell);
            const std::int64_t slow = tanner_cycle_count(code, 2 * ell);
            const bool match = fast == slow;
            ok = ok && match;
            std::printf("  draw %d ell=%d: condition=%lld tanner=%lld%s\n", draw, ell,
                        static_cast<long long>(fast), static_cast<long long>(slow),
                        match ? "" : "  MISMATCH");
        }
    }
    return ok;
}

// ---------------------------------------------------------------------------
// 7. chain optimality on the exhaustively searchable toy

bool crit_mc2_toy() {
    const int kGamma = 3, kKappa = 5;
    const int kSeeds = 10, kNeed = 9;
    const IntMat support = IntMat::ones(kGamma, kKappa);
    const CycleWeights weights{100.0, 10.0, 1.0};

    // exhaustive minimum of the weighted active count over all 2^15 states
    CandidateList lists[3];
    for (int ell = 2; ell <= 4; ++ell) lists[ell - 2] = collect_candidates(support, ell);
    const int n = kGamma * kKappa;
    std::int64_t best = -1;
    IntMat K(kGamma, kKappa);
    for (std::uint32_t state = 0; state < (1u << n); ++state) {
        for (int e = 0; e < n; ++e) K.v[static_cast<std::size_t>(e)] = (state >> e) & 1u;
        std::int64_t wsum = 0;
        wsum += 100 * count_active_scan(lists[0], K.v.data(), nullptr, 1);
        wsum += 10 * count_active_scan(lists[1], K.v.data(), nullptr, 1);
        wsum += count_active_scan(lists[2], K.v.data(), nullptr, 1);
        if (best < 0 || wsum < best) best = wsum;
    }
    std::printf("  exhaustive minimum weighted count: %lld\n", static_cast<long long>(best));

    const Mc2CandidateSet cands = collect_mc2_candidates(support, {true, true, true});
    const IntMat none(kGamma, kKappa, -1);
    const IntMat mask(kGamma, kKappa, 0);
    EdgeDistribution q;
    q.offset = 0;
    q.weights = {0.5, 0.5};

    int hits = 0;
    for (int s = 0; s < kSeeds; ++s) {
        Mc2Config cfg;
        cfg.b = 3;
        cfg.max_transitions = 5000;
        cfg.weights = weights;
        cfg.budget_linf = 10;    // wide open: the toy has no drift constraints
        cfg.budget_l1 = 100000;
        cfg.seed = derive_key(0xACC, 7, static_cast<std::uint64_t>(s));
        cfg.trace_stride = 0;

        Mc2Context ctx;
        ctx.x_init = init_partition_state(support, none, mask, 0, q, cfg.seed);
        ctx.fixed_mask = mask;
        ctx.value_lo = 0;
        ctx.value_hi = 1;
        ctx.modulus = 0;

        const Mc2Result res = mc2_optimize(ctx, cands, cfg);
        const std::int64_t achieved = 100 * res.active_opt[0] + 10 * res.active_opt[1] +
                                      res.active_opt[2];
        const bool hit = achieved == best;
        hits += hit ? 1 : 0;
        std::printf("  seed %d: weighted=%lld after %lld transitions%s\n", s,
                    static_cast<long long>(achieved), static_cast<long long>(res.transitions),
                    hit ? "" : "  (not optimal)");
    }
    std::printf("  optimum reached in %d/%d runs (need >= %d)\n", hits, kSeeds, kNeed);
    return hits >= kNeed;
}

// ---------------------------------------------------------------------------
// 8. staged lifting on the (7,23) stage-0 base

bool crit_lifting_staging() {
    const std::int64_t kLiftBudget = 200000;
    const PlanFile plan = parse_plan_text(kGroup1Plan);

    const PipelineResult pipe = run_pipeline(plan.design, plan.grade);

    Mc2Config kcfg = plan.mc2;
    kcfg.seed = derive_key(plan.mc2.seed, 1, 0);
    const KStarResult kstar = design_reference_K_star(pipe.plan, pipe.p_star(), kcfg);

    const StageSpec& st0 = pipe.plan.stages[0];
    const auto [h_n, h_f] = derive_stage_base(kstar.K, st0.m_fixed, st0.m_new, 0);
    int base_entries = 0;
    for (int v : h_n.v) base_entries += v != 0 ? 1 : 0;
    std::printf("  stage-0 base: %d of %d entries, memory %d\n", base_entries,
                pipe.plan.gamma * pipe.plan.kappa, st0.memory());

    Mc2Config pcfg = plan.mc2;
    pcfg.seed = derive_key(plan.mc2.seed, 3, 0);
    const IntMat none(kstar.K.rows, kstar.K.cols, -1);
    const IntMat x0 =
        init_partition_state(h_n, none, h_f, st0.window_lo(), pipe.stages[0].result.q, pcfg.seed);

    Mc2Context ctx;
    ctx.x_init = x0;
    ctx.fixed_mask = h_f;
    ctx.value_lo = st0.window_lo();
    ctx.value_hi = st0.window_hi();
    ctx.modulus = 0;

    std::array<bool, 3> want{};
    for (int g = 0; g < 3; ++g) want[static_cast<std::size_t>(g)] = pcfg.weights.at(g + 2) > 0.0;
    const Mc2CandidateSet cands = collect_mc2_candidates(h_n, want);
    const Mc2Result part = mc2_optimize(ctx, cands, pcfg);
    std::printf("  partitioning: c=%.6f actives c4=%lld c6=%lld after %lld transitions\n",
                part.c_opt, static_cast<long long>(part.active_opt[0]),
                static_cast<long long>(part.active_opt[1]),
                static_cast<long long>(part.transitions));

    bool all_c4 = true;
    int c6_clear = 0;
    for (int s = 0; s < 3; ++s) {
        Mc2Config lcfg = plan.mc2;
        lcfg.b = plan.lift_b;
        lcfg.seed = derive_key(plan.mc2.seed, 40, static_cast<std::uint64_t>(s));
        const IntMat no_T(kstar.K.rows, kstar.K.cols, -1);
        const IntMat no_mask(kstar.K.rows, kstar.K.cols, 0);
        const LiftOutcome out = run_staged_lifting(part.x_opt, no_T, no_mask, pipe.plan.z, lcfg,
                                                   kLiftBudget, 0);
        all_c4 = all_c4 && out.cycle4_cleared;
        c6_clear += out.cycle6_cleared ? 1 : 0;
        std::printf("  lift seed %d: init attempts=%lld c4 cleared=%d active c6=%lld%s\n", s,
                    static_cast<long long>(out.init_attempts), out.cycle4_cleared ? 1 : 0,
                    static_cast<long long>(out.active[1]),
                    out.cycle6_cleared ? "  (cleared)" : "");
    }
    std::printf("  cycle-4 cleared in all runs: %s; cycle-6 cleared in %d/3 (need >= 1)\n",
                all_c4 ? "yes" : "no", c6_clear);
    return all_c4 && c6_clear >= 1;
}

// ---------------------------------------------------------------------------
// 9. nested designs beat the truncation baseline at the reduced memories

bool crit_rmc_vs_sf() {
    DesignArtifact art = ensure_group1();
    if (art.failed_stage != -1) {
        std::printf("  design incomplete (failed stage %d)\n", art.failed_stage);
        return false;
    }
    if (art.stages.size() != 3 || art.baselines.size() != 3) {
        std::printf("  expected 3 stages with baselines, got %zu/%zu\n", art.stages.size(),
                    art.baselines.size());
        return false;
    }
    std::printf("%s", summary_table(art).c_str());
    bool ok = true;
    for (int d = 0; d < 2; ++d) {
        const bool lower = art.stages[static_cast<std::size_t>(d)].c6 <
                           art.baselines[static_cast<std::size_t>(d)].c6;
        ok = ok && lower;
        std::printf("  stage %d: nested c6=%lld vs truncated c6=%lld -> %s\n", d,
                    static_cast<long long>(art.stages[static_cast<std::size_t>(d)].c6),
                    static_cast<long long>(art.baselines[static_cast<std::size_t>(d)].c6),
                    lower ? "strictly lower" : "NOT LOWER");
    }
    const StageArtifact& last = art.stages[2];
    const BaselineArtifact& lastb = art.baselines[2];
    const bool same = last.c6 == lastb.c6 && last.c8 == lastb.c8 &&
                      last.rmc.K == lastb.sf.K && last.rmc.T == lastb.sf.T;
    ok = ok && same;
    std::printf("  stage 2: counts %lld/%lld vs %lld/%lld, matrices %s\n",
                static_cast<long long>(last.c6), static_cast<long long>(last.c8),
                static_cast<long long>(lastb.c6), static_cast<long long>(lastb.c8),
                same ? "identical" : "DIFFER");
    return ok;
}

// ---------------------------------------------------------------------------
// 10. exact rates and lengths of both published families

bool crit_rates_lengths() {
    struct Fam {
        int gamma, kappa, z, L;
        std::array<int, 3> m_new;
        std::int64_t length;
        std::array<const char*, 3> rates;
    };
    const Fam fams[] = {
        {7, 23, 23, 12, {6, 2, 3}, 6348, {"0.5435", "0.4928", "0.4167"}},
        {7, 35, 29, 16, {8, 3, 4}, 16240, {"0.7000", "0.6625", "0.6125"}},
    };
    bool ok = true;
    for (const Fam& fam : fams) {
        DesignPlan plan;
        plan.gamma = fam.gamma;
        plan.kappa = fam.kappa;
        plan.z = fam.z;
        plan.L = fam.L;
        plan.stages.resize(3);
        for (int d = 0; d < 3; ++d) plan.stages[static_cast<std::size_t>(d)].m_new = fam.m_new[static_cast<std::size_t>(d)];
        plan.finalize();
        for (int d = 0; d < 3; ++d) {
            const auto [length, rate] = code_rate_and_length(plan, d);
            const std::string got = rate.to_decimal_string(4);
            const bool match = length == fam.length && got == fam.rates[static_cast<std::size_t>(d)];
            ok = ok && match;
            std::printf("  (%d,%d) stage %d: length=%lld rate=%lld/%lld=%s expected %lld/%s%s\n",
                        fam.gamma, fam.kappa, d, static_cast<long long>(length),
                        static_cast<long long>(rate.num), static_cast<long long>(rate.den),
                        got.c_str(), static_cast<long long>(fam.length),
                        fam.rates[static_cast<std::size_t>(d)], match ? "" : "  MISMATCH");
        }
    }
    return ok;
}

// ---------------------------------------------------------------------------
// 11. decoding: nested stage-0 code beats the truncated one

bool crit_fer_direction() {
    const std::int64_t kMinErrors = 200;
    DesignArtifact art = ensure_group1();
    if (art.failed_stage != -1) return false;

    const PlanFile plan = parse_plan_text(kGroup1Plan);  // simulate section source
    const SimulateSection& sim = plan.simulate;
    if (sim.grid.size() != 3) {
        std::printf("  simulate grid must have 3 points, has %zu\n", sim.grid.size());
        return false;
    }
    const int z = art.plan.design.z;
    const int L = art.plan.design.L;
    const QcCode rmc = build_sc_code(art.stages[0].rmc.K, art.stages[0].rmc.T, z, L);
    const QcCode sf = build_sc_code(art.baselines[0].sf.K, art.baselines[0].sf.T, z, L);

    const std::vector<FerPoint> pr =
        simulate_fer(rmc, sim.kind, sim.grid, sim.stop, sim.seed, sim.iterations);
    const std::vector<FerPoint> ps =
        simulate_fer(sf, sim.kind, sim.grid, sim.stop, sim.seed, sim.iterations);

    for (std::size_t i = 0; i < pr.size(); ++i)
        std::printf("  %+.2f dB: nested fer=%.5f +-%.5f (%lld/%lld), truncated fer=%.5f +-%.5f (%lld/%lld)\n",
                    pr[i].parameter, pr[i].fer, pr[i].ci_halfwidth,
                    static_cast<long long>(pr[i].frame_errors),
                    static_cast<long long>(pr[i].frames), ps[i].fer, ps[i].ci_halfwidth,
                    static_cast<long long>(ps[i].frame_errors),
                    static_cast<long long>(ps[i].frames));

    const bool errors_ok = pr[0].frame_errors >= kMinErrors && ps[0].frame_errors >= kMinErrors;
    const bool separated = pr[0].fer + pr[0].ci_halfwidth < ps[0].fer - ps[0].ci_halfwidth;
    const bool mono_r = pr[0].fer > pr[1].fer && pr[1].fer > pr[2].fer;
    const bool mono_s = ps[0].fer > ps[1].fer && ps[1].fer > ps[2].fer;
    std::printf("  worst point: >=%lld errors each %s; intervals %s\n",
                static_cast<long long>(kMinErrors), errors_ok ? "yes" : "NO",
                separated ? "disjoint (nested below)" : "OVERLAP");
    std::printf("  monotone toward better channels: nested %s, truncated %s\n",
                mono_r ? "yes" : "NO", mono_s ? "yes" : "NO");
    return errors_ok && separated && mono_r && mono_s;
}

// ---------------------------------------------------------------------------
// 12. protograph hardware sharing of the nested family

bool crit_hw_savings() {
    const double kTarget = 0.5528;
    const double kBand = 0.05;
    DesignArtifact art = ensure_group1();
    if (art.failed_stage != -1) return false;
    const double got = art.hw_savings;
    const bool ok = std::fabs(got - kTarget) <= kBand;
    std::printf("  sharing savings %.4f, target %.4f +- %.2f -> %s\n", got, kTarget, kBand,
                ok ? "inside" : "OUTSIDE");
    return ok;
}

// ---------------------------------------------------------------------------

struct Criterion {
    int idx;
    const char* name;
    bool (*fn)();
};

const Criterion kCriteria[] = {
    {1, "census", crit_census},
    {2, "lemma_theorem", crit_lemma_theorem},
    {3, "gradient", crit_gradient},
    {4, "sampling", crit_sampling},
    {5, "example1", crit_example1},
    {6, "counting_oracle", crit_counting_oracle},
    {7, "mc2_toy", crit_mc2_toy},
    {8, "lifting_staging", crit_lifting_staging},
    {9, "rmc_vs_sf", crit_rmc_vs_sf},
    {10, "rates_lengths", crit_rates_lengths},
    {11, "fer_direction", crit_fer_direction},
    {12, "hw_savings", crit_hw_savings},
};

bool run_one(const Criterion& c) {
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    try {
        ok = c.fn();
    } catch (const std::exception& e) {
        std::printf("  exception: %s\n", e.what());
        ok = false;
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("acceptance %d %s: %s (%.1f s)\n", c.idx, c.name, ok ? "PASS" : "FAIL", secs);
    std::fflush(stdout);
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc > 2) {
        std::fprintf(stderr, "usage: %s [criterion 1..12]\n", argv[0]);
        return 2;
    }
    if (argc == 2) {
        const int idx = std::atoi(argv[1]);
        if (idx < 1 || idx > 12) {
            std::fprintf(stderr, "criterion must be 1..12, got '%s'\n", argv[1]);
            return 2;
        }
        return run_one(kCriteria[idx - 1]) ? 0 : 1;
    }
    bool all = true;
    for (const Criterion& c : kCriteria) all = run_one(c) && all;
    return all ? 0 : 1;
}
