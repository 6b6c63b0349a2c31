#include "rmc/grade.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rmc/candidates.hpp"
#include "rmc/expectation.hpp"

namespace rmc {

namespace {

constexpr double kFloor = 1e-9;

// Weighted cycle-expectation objective with the fixed part held constant.
struct Objective {
    std::uint64_t census6 = 0;
    std::uint64_t census8 = 0;
    double w6 = 0.0;
    double w8 = 0.0;
    double r_f = 0.0;
    double r_n = 0.0;
    LaurentPoly f;
    int q_offset = 0;

    double e6 = 0.0;  // expectations at the last evaluated point
    double e8 = 0.0;

    double eval(const std::vector<double>& q) {
        LaurentPoly g = LaurentPoly::from_coeffs(q_offset, q);
        e6 = expected_cycles(3, census6, r_f, f, r_n, g);
        e8 = expected_cycles(4, census8, r_f, f, r_n, g);
        return w6 * e6 + w8 * e8;
    }

    std::vector<double> grad(const std::vector<double>& q) const {
        LaurentPoly g = LaurentPoly::from_coeffs(q_offset, q);
        std::vector<double> out(q.size(), 0.0);
        if (w6 != 0.0) {
            std::vector<double> g6 = grad_expected_cycles(3, census6, r_f, f, r_n, g);
            for (std::size_t i = 0; i < out.size(); ++i) out[i] += w6 * g6[i];
        }
        if (w8 != 0.0) {
            std::vector<double> g8 = grad_expected_cycles(4, census8, r_f, f, r_n, g);
            for (std::size_t i = 0; i < out.size(); ++i) out[i] += w8 * g8[i];
        }
        return out;
    }
};

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

void validate_config(const GradeConfig& cfg) {
    if (cfg.w6 < 0.0 || cfg.w8 < 0.0) throw std::invalid_argument("grade: negative weight");
    if (!(cfg.epsilon > 0.0)) throw std::invalid_argument("grade: epsilon must be positive");
    if (!(cfg.alpha > 0.0)) throw std::invalid_argument("grade: alpha must be positive");
    if (cfg.max_iterations < 1) throw std::invalid_argument("grade: max_iterations must be >= 1");
}

}  // namespace

GradeResult rmc_grade(const DesignPlan& plan, int stage, const EdgeDistribution& p,
                      const GradeConfig& cfg) {
    validate_config(cfg);
    if (stage < 0 || stage >= plan.num_stages()) throw std::invalid_argument("grade: bad stage index");
    const StageSpec& st = plan.stages[stage];
    if (st.r_new < 0.0) throw std::invalid_argument("grade: stage mass unassigned");
    if (stage == 0) {
        if (!p.weights.empty()) throw std::invalid_argument("grade: stage 0 takes no fixed part");
    } else {
        if (p.offset != 0 || p.size() != st.m_fixed + 1)
            throw std::invalid_argument("grade: fixed distribution must cover 0..m_fixed");
        if (std::fabs(p.sum() - 1.0) > 1e-9)
            throw std::invalid_argument("grade: fixed distribution must sum to 1");
    }

    Objective obj;
    obj.census6 = candidate_census(3, plan.gamma, plan.kappa);
    obj.census8 = candidate_census(4, plan.gamma, plan.kappa);
    obj.w6 = cfg.w6;
    obj.w8 = cfg.w8;
    obj.r_f = stage == 0 ? 0.0 : st.r_fixed;
    obj.r_n = st.r_new;
    if (stage > 0) obj.f = p.poly();
    obj.q_offset = st.window_lo();

    const int n = st.window_size();
    GradeResult res;
    res.q.offset = obj.q_offset;

    std::vector<double> q;
    if (!cfg.init_q.empty()) {
        if (static_cast<int>(cfg.init_q.size()) != n)
            throw std::invalid_argument("grade: init_q size mismatch");
        q = cfg.init_q;
        double s = 0.0;
        for (double x : q) {
            if (x < 0.0) throw std::invalid_argument("grade: init_q entries must be >= 0");
            s += x;
        }
        if (std::fabs(s - 1.0) > 1e-9) throw std::invalid_argument("grade: init_q must sum to 1");
    } else {
        q.assign(static_cast<std::size_t>(n), 1.0 / n);
    }

    if (n == 1) {
        q = {1.0};
        double F = obj.eval(q);
        if (!std::isfinite(F)) throw std::runtime_error("grade: non-finite objective");
        res.q.weights = q;
        res.e6 = obj.e6;
        res.e8 = obj.e8;
        res.objective_trace = {F};
        res.lagrange_c = obj.grad(q)[0];
        res.converged = true;
        return res;
    }

    double F_cur = obj.eval(q);
    if (!std::isfinite(F_cur)) throw std::runtime_error("grade: non-finite objective at init");
    res.objective_trace.push_back(F_cur);

    double alpha = cfg.alpha;
    std::vector<double> qn(q.size());
    for (long it = 1; it <= cfg.max_iterations; ++it) {
        res.iterations = it;
        std::vector<double> g = obj.grad(q);
        const double c = mean_of(g);
        double norm2 = 0.0;
        for (double gi : g) norm2 += (gi - c) * (gi - c);
        const double norm = std::sqrt(norm2);
        if (norm == 0.0) {  // centered gradient vanished: stationary point
            res.converged = true;
            break;
        }
        for (std::size_t i = 0; i < q.size(); ++i) qn[i] = q[i] - alpha * (g[i] - c) / norm;
        double s = 0.0;
        for (double& x : qn) {
            if (x < kFloor) {
                x = kFloor;
                ++res.projections;
            }
            s += x;
        }
        for (double& x : qn) x /= s;

        const double F_new = obj.eval(qn);
        if (!std::isfinite(F_new)) throw std::runtime_error("grade: non-finite objective");
        if (F_new > F_cur) {  // reject and backtrack
            alpha *= 0.5;
            if (++res.halvings > 60) break;
            continue;
        }
        const bool settled = std::fabs(F_new - F_cur) <= cfg.epsilon;
        q.swap(qn);
        F_cur = F_new;
        res.objective_trace.push_back(F_cur);
        if (settled) {
            res.converged = true;
            break;
        }
    }

    std::vector<double> g = obj.grad(q);
    res.lagrange_c = mean_of(g);
    double kkt = 0.0;
    for (double gi : g) kkt = std::max(kkt, std::fabs(gi - res.lagrange_c));
    res.kkt_residual = kkt;

    obj.eval(q);  // refresh e6/e8 at the returned point
    res.e6 = obj.e6;
    res.e8 = obj.e8;
    res.q.weights = std::move(q);
    return res;
}

GradeResult run_stage0(const DesignPlan& plan, const GradeConfig& cfg) {
    if (plan.num_stages() < 1) throw std::invalid_argument("grade: plan has no stages");
    DesignPlan work = plan;
    if (work.stages[0].r_new < 0.0) work.stages[0].r_new = 1.0;
    return rmc_grade(work, 0, EdgeDistribution{}, cfg);
}

std::vector<double> derive_stage_masses(const std::vector<double>& p_star,
                                        const DesignPlan& plan) {
    if (static_cast<int>(p_star.size()) != plan.total_memory() + 1)
        throw std::invalid_argument("grade: reference distribution does not span the total memory");
    std::vector<double> masses;
    masses.reserve(plan.stages.size());
    for (const StageSpec& st : plan.stages) {
        double r = 0.0;
        for (int j = st.window_lo(); j <= st.window_hi(); ++j) r += p_star[static_cast<std::size_t>(j)];
        masses.push_back(r);
    }
    return masses;
}

PipelineResult run_pipeline(const DesignPlan& plan, const GradeConfig& cfg) {
    PipelineResult out;
    out.plan = plan;
    out.plan.finalize();

    DesignPlan ref;
    ref.gamma = out.plan.gamma;
    ref.kappa = out.plan.kappa;
    ref.z = out.plan.z;
    ref.L = out.plan.L;
    StageSpec whole;
    whole.index = 0;
    whole.m_new = out.plan.total_memory();
    whole.r_new = 1.0;
    ref.stages = {whole};
    ref.finalize();
    out.reference = rmc_grade(ref, 0, EdgeDistribution{}, cfg);

    if (out.plan.stages[0].r_new < 0.0) {
        std::vector<double> masses = derive_stage_masses(out.reference.q.weights, out.plan);
        for (int d = 0; d < out.plan.num_stages(); ++d) out.plan.stages[d].r_new = masses[d];
        out.plan.finalize();
        out.masses_derived = true;
    }

    EdgeDistribution u;
    for (int d = 0; d < out.plan.num_stages(); ++d) {
        GradeStageRun run;
        run.stage = d;
        run.r_f = d == 0 ? 0.0 : out.plan.stages[d].r_fixed;
        run.r_n = out.plan.stages[d].r_new;
        run.result = rmc_grade(out.plan, d, u, cfg);
        u = d == 0 ? run.result.q
                   : assemble_stage_distribution(u, run.result.q, run.r_f, run.r_n);
        run.u = u;
        out.stages.push_back(std::move(run));
    }
    return out;
}

}  // namespace rmc
