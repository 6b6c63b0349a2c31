// Command-line workbench for designing, counting, and simulating
// rate-memory-compatible spatially-coupled LDPC codes.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "rmc/alist.hpp"
#include "rmc/artifact.hpp"
#include "rmc/counting.hpp"
#include "rmc/decoder.hpp"
#include "rmc/fer.hpp"
#include "rmc/plan.hpp"
#include "rmc/rng.hpp"
#include "rmc/tanner.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBadInput = 2;
constexpr int kExitBudget = 3;

int default_threads() {
    if (const char* env = std::getenv("RMCSC_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    return 1;
}

struct Common {
    std::string plan_path;
    std::string out;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int threads = default_threads();
    int stage = -1;
};

rmc::PlanFile load_plan(const Common& c) {
    rmc::PlanFile plan = rmc::parse_plan_file(c.plan_path);
    if (c.seed_set) {
        plan.mc2.seed = c.seed;
        plan.simulate.seed = c.seed;
    }
    plan.mc2.threads = c.threads;
    return plan;
}

std::ostream& open_out(std::ofstream& file, const std::string& path) {
    if (path.empty() || path == "-") return std::cout;
    file.open(path);
    if (!file) throw std::invalid_argument("cannot write " + path);
    return file;
}

void write_fer_csv(std::ostream& os, const std::vector<rmc::FerPoint>& points) {
    os << "parameter,frames,frame_errors,fer,ci_halfwidth\n";
    os.precision(10);
    for (const rmc::FerPoint& p : points)
        os << p.parameter << "," << p.frames << "," << p.frame_errors << "," << p.fer << ","
           << p.ci_halfwidth << "\n";
}

rmc::QcCode code_for(const rmc::DesignArtifact& art, const std::string& which, int stage) {
    if (stage < 0 || stage >= static_cast<int>(art.stages.size()))
        throw std::invalid_argument("stage out of range");
    const rmc::DesignPlan& dp = art.plan.design;
    if (which == "rmc") {
        const rmc::StageMatrices& m = art.stages[static_cast<std::size_t>(stage)].rmc;
        return rmc::build_sc_code(m.K, m.T, dp.z, dp.L);
    }
    if (which == "sf") {
        for (const rmc::BaselineArtifact& b : art.baselines)
            if (b.stage == stage) return rmc::build_sc_code(b.sf.K, b.sf.T, dp.z, dp.L);
        throw std::invalid_argument("no baseline for stage " + std::to_string(stage) +
                                    "; run the baseline command first");
    }
    throw std::invalid_argument("code must be rmc or sf");
}

int cmd_design(const Common& c, bool no_c8) {
    rmc::PlanFile plan = load_plan(c);
    rmc::DesignArtifact art = rmc::run_design(plan, !no_c8);
    rmc::save_design(art, c.out);
    std::cout << rmc::summary_table(art);
    if (art.failed_stage >= 0) {
        std::cerr << "design stopped at stage " << art.failed_stage << ": " << art.failure
                  << " (artifacts retained in " << c.out << ")\n";
        return kExitBudget;
    }
    return kExitOk;
}

int cmd_baseline(const Common& c, bool no_c8) {
    rmc::DesignArtifact art = rmc::load_design(c.out);
    rmc::add_baseline(art, !no_c8);
    rmc::save_design(art, c.out);
    std::cout << rmc::summary_table(art);
    return kExitOk;
}

int cmd_grade(const Common& c) {
    const rmc::PlanFile plan = load_plan(c);
    const rmc::PipelineResult pipe = rmc::run_pipeline(plan.design, plan.grade);
    namespace fs = std::filesystem;
    fs::create_directories(c.out);
    auto dump_trace = [](const std::string& path, const rmc::GradeResult& res) {
        std::ofstream os(path);
        os << "iteration,objective\n";
        os.precision(17);
        for (std::size_t i = 0; i < res.objective_trace.size(); ++i)
            os << i << "," << res.objective_trace[i] << "\n";
    };
    dump_trace((fs::path(c.out) / "grade_reference.csv").string(), pipe.reference);
    for (const rmc::GradeStageRun& st : pipe.stages)
        dump_trace((fs::path(c.out) / ("grade_stage" + std::to_string(st.stage) + ".csv")).string(),
                   st.result);
    std::cout << "reference e6 " << pipe.reference.e6 << " e8 " << pipe.reference.e8 << "\n";
    for (const rmc::GradeStageRun& st : pipe.stages)
        std::cout << "stage " << st.stage << " r_f " << st.r_f << " r_n " << st.r_n << " e6 "
                  << st.result.e6 << " e8 " << st.result.e8 << "\n";
    return kExitOk;
}

int cmd_expect(const Common& c) {
    const rmc::PlanFile plan = load_plan(c);
    const rmc::PipelineResult pipe = rmc::run_pipeline(plan.design, plan.grade);
    for (const rmc::GradeStageRun& st : pipe.stages) {
        if (c.stage >= 0 && st.stage != c.stage) continue;
        std::cout << "stage " << st.stage << ": E6 " << st.result.e6 << " E8 " << st.result.e8
                  << "\n";
    }
    return kExitOk;
}

int cmd_mc2_partition(const Common& c) {
    rmc::DesignArtifact art = rmc::load_design(c.out);
    const int d = c.stage < 0 ? 0 : c.stage;
    if (d >= static_cast<int>(art.stages.size()))
        throw std::invalid_argument("stage out of range");
    const rmc::StageSpec& st = art.plan.design.stages[static_cast<std::size_t>(d)];

    rmc::IntMat prev_K(art.k_star.rows, art.k_star.cols, -1);
    if (d > 0) prev_K = art.stages[static_cast<std::size_t>(d) - 1].rmc.K;
    const auto [h_n, h_f] = rmc::derive_stage_base(art.k_star, st.m_fixed, st.m_new, d);
    rmc::IntMat support(h_n.rows, h_n.cols, 0);
    for (std::size_t i = 0; i < support.v.size(); ++i)
        support.v[i] = (h_n.v[i] != 0 || h_f.v[i] != 0) ? 1 : 0;

    rmc::Mc2Config cfg = art.plan.mc2;
    if (c.seed_set) cfg.seed = c.seed;
    cfg.threads = c.threads;
    if (cfg.trace_stride == 0) cfg.trace_stride = 1;
    const rmc::IntMat x0 = rmc::init_partition_state(
        support, prev_K, h_f, st.window_lo(), art.stages[static_cast<std::size_t>(d)].q, cfg.seed);

    rmc::Mc2Context ctx;
    ctx.x_init = x0;
    ctx.fixed_mask = h_f;
    ctx.value_lo = st.window_lo();
    ctx.value_hi = st.window_hi();
    ctx.modulus = 0;
    std::array<bool, 3> want{};
    for (int g = 0; g < 3; ++g) want[static_cast<std::size_t>(g)] = cfg.weights.at(g + 2) > 0.0;
    const rmc::Mc2CandidateSet cands = rmc::collect_mc2_candidates(support, want);
    const rmc::Mc2Result res = rmc::mc2_optimize(ctx, cands, cfg);

    std::ofstream file;
    std::ostream& os = open_out(file, (std::filesystem::path(c.out) /
                                       ("mc2_partition_stage" + std::to_string(d) + ".csv"))
                                          .string());
    os << "transition,c,c_opt\n";
    os.precision(17);
    for (const rmc::Mc2TraceRow& row : res.trace)
        os << row.transition << "," << row.c_current << "," << row.c_opt << "\n";
    std::cout << "stage " << d << " partition c_opt " << res.c_opt << " active " << res.active_opt[0]
              << "/" << res.active_opt[1] << "/" << res.active_opt[2] << "\n";
    return kExitOk;
}

int cmd_mc2_lift(const Common& c) {
    rmc::DesignArtifact art = rmc::load_design(c.out);
    const int d = c.stage < 0 ? 0 : c.stage;
    if (d >= static_cast<int>(art.stages.size()))
        throw std::invalid_argument("stage out of range");
    const rmc::StageSpec& st = art.plan.design.stages[static_cast<std::size_t>(d)];

    rmc::IntMat prev_T(art.k_star.rows, art.k_star.cols, -1);
    if (d > 0) prev_T = art.stages[static_cast<std::size_t>(d) - 1].rmc.T;
    const auto [h_n, h_f] = rmc::derive_stage_base(art.k_star, st.m_fixed, st.m_new, d);

    rmc::Mc2Config cfg = art.plan.mc2;
    cfg.b = art.plan.lift_b;
    if (c.seed_set) cfg.seed = c.seed;
    cfg.threads = c.threads;
    if (cfg.trace_stride == 0) cfg.trace_stride = 1;
    const rmc::LiftOutcome lift =
        rmc::run_staged_lifting(art.stages[static_cast<std::size_t>(d)].rmc.K, prev_T, h_f,
                                art.plan.design.z, cfg, art.plan.lift_transitions, art.plan.lift_t8);

    std::ofstream file;
    std::ostream& os = open_out(
        file,
        (std::filesystem::path(c.out) / ("mc2_lift_stage" + std::to_string(d) + ".csv")).string());
    os << "transition,c,c_opt\n";
    os.precision(17);
    for (const rmc::Mc2TraceRow& row : lift.chain6.trace)
        os << row.transition << "," << row.c_current << "," << row.c_opt << "\n";
    std::cout << "stage " << d << " lift cycle4_cleared " << (lift.cycle4_cleared ? 1 : 0)
              << " cycle6_cleared " << (lift.cycle6_cleared ? 1 : 0) << "\n";
    return lift.cycle4_cleared ? kExitOk : kExitBudget;
}

int cmd_count(const std::string& alist_path, const std::vector<int>& lengths) {
    std::ifstream in(alist_path);
    if (!in) throw std::invalid_argument("cannot open " + alist_path);
    const rmc::QcCode code = rmc::read_alist(in);
    for (int len : lengths) {
        if (len != 4 && len != 6 && len != 8)
            throw std::invalid_argument("cycle length must be 4, 6 or 8");
        std::cout << "cycles-" << len << ": " << rmc::tanner_cycle_count(code, len) << "\n";
    }
    return kExitOk;
}

int cmd_simulate(const Common& c, const std::string& which) {
    const rmc::DesignArtifact art = rmc::load_design(c.out);
    const rmc::SimulateSection& sim = art.plan.simulate;
    if (sim.grid.empty()) throw std::invalid_argument("plan has no simulate.grid");
    const int d = c.stage < 0 ? 0 : c.stage;
    const rmc::QcCode code = code_for(art, which, d);
    const std::uint64_t seed = c.seed_set ? c.seed : sim.seed;
    const std::vector<rmc::FerPoint> points =
        rmc::simulate_fer(code, sim.kind, sim.grid, sim.stop, seed, sim.iterations);
    std::ofstream file;
    std::ostream& os =
        open_out(file, (std::filesystem::path(c.out) /
                        ("fer_" + which + "_stage" + std::to_string(d) + ".csv"))
                           .string());
    write_fer_csv(os, points);
    for (const rmc::FerPoint& p : points)
        std::cout << which << " stage " << d << " param " << p.parameter << " fer " << p.fer
                  << " (" << p.frame_errors << "/" << p.frames << ")\n";
    return kExitOk;
}

int cmd_plot_data(const std::string& design_dir, const std::string& what, int stage,
                  const std::string& out_path) {
    std::ofstream file;
    std::ostream& os = open_out(file, out_path);
    if (what == "pstar" || what == "u" || what == "q") {
        const rmc::DesignArtifact art = rmc::load_design(design_dir);
        const rmc::EdgeDistribution* dist = nullptr;
        if (what == "pstar") {
            dist = &art.p_star;
        } else {
            const int d = stage < 0 ? 0 : stage;
            if (d >= static_cast<int>(art.stages.size()))
                throw std::invalid_argument("stage out of range");
            dist = what == "u" ? &art.stages[static_cast<std::size_t>(d)].u
                               : &art.stages[static_cast<std::size_t>(d)].q;
        }
        os << "component,mass\n";
        os.precision(17);
        for (int i = 0; i < dist->size(); ++i)
            os << dist->offset + i << "," << dist->weights[static_cast<std::size_t>(i)] << "\n";
        return kExitOk;
    }
    if (what == "grade") {
        // pass a grade trace CSV through (already (iteration, objective))
        std::ifstream in{std::filesystem::path(design_dir)};
        if (!in) throw std::invalid_argument("cannot open " + design_dir);
        os << in.rdbuf();
        return kExitOk;
    }
    throw std::invalid_argument("plot-data kind must be pstar, u, q or grade");
}

int cmd_export_alist(const Common& c, const std::string& which) {
    const rmc::DesignArtifact art = rmc::load_design(c.out);
    const int d = c.stage < 0 ? 0 : c.stage;
    const rmc::QcCode code = code_for(art, which, d);
    rmc::write_alist(code, std::cout);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rate-memory-compatible spatially-coupled LDPC design workbench"};
    app.require_subcommand(1);

    Common c;
    bool no_c8 = false;
    std::string which = "rmc";
    std::string count_path;
    std::vector<int> count_lengths{4, 6, 8};
    std::string plot_what = "pstar";
    std::string plot_out;

    auto add_common = [&](CLI::App* sub, bool needs_plan, bool needs_out) {
        if (needs_plan) sub->add_option("--plan", c.plan_path, "plan file")->required();
        CLI::Option* out = sub->add_option("--out", c.out, "output directory");
        if (needs_out) out->required();
        sub->add_option("--seed", c.seed, "seed override")->each([&](const std::string&) {
            c.seed_set = true;
        });
        sub->add_option("--threads", c.threads, "worker threads (default $RMCSC_THREADS or 1)");
        sub->add_option("--stage", c.stage, "stage index");
    };

    CLI::App* design = app.add_subcommand("design", "run the full staged design chain");
    add_common(design, true, true);
    design->add_flag("--no-c8", no_c8, "skip lifted cycle-8 counting");

    CLI::App* baseline =
        app.add_subcommand("baseline", "threshold the full-memory design and count its cycles");
    add_common(baseline, false, true);
    baseline->add_flag("--no-c8", no_c8, "skip lifted cycle-8 counting");

    CLI::App* grade = app.add_subcommand("grade", "run the gradient pipeline, write traces");
    add_common(grade, true, true);

    CLI::App* expect = app.add_subcommand("expect", "report per-stage cycle expectations");
    add_common(expect, true, false);

    CLI::App* part = app.add_subcommand("mc2-partition", "re-run one stage's partitioning chain");
    add_common(part, false, true);

    CLI::App* liftc = app.add_subcommand("mc2-lift", "re-run one stage's lifting chain");
    add_common(liftc, false, true);

    CLI::App* count = app.add_subcommand("count", "count Tanner-graph cycles of an alist code");
    count->add_option("--matrix", count_path, "alist file")->required();
    count->add_option("--lengths", count_lengths, "cycle lengths (4 6 8)");

    CLI::App* sim = app.add_subcommand("simulate", "frame-error-rate grid from a design");
    add_common(sim, false, true);
    sim->add_option("--code", which, "rmc or sf");

    CLI::App* plot = app.add_subcommand("plot-data", "emit chart-ready CSV series");
    plot->add_option("--design", c.out, "design directory (or grade trace file)")->required();
    plot->add_option("--what", plot_what, "pstar, u, q or grade");
    plot->add_option("--stage", c.stage, "stage index");
    plot->add_option("--out", plot_out, "output file (default stdout)");

    CLI::App* exporta = app.add_subcommand("export-alist", "write one designed code as alist");
    add_common(exporta, false, true);
    exporta->add_option("--code", which, "rmc or sf");

    CLI11_PARSE(app, argc, argv);

    try {
        if (design->parsed()) return cmd_design(c, no_c8);
        if (baseline->parsed()) return cmd_baseline(c, no_c8);
        if (grade->parsed()) return cmd_grade(c);
        if (expect->parsed()) return cmd_expect(c);
        if (part->parsed()) return cmd_mc2_partition(c);
        if (liftc->parsed()) return cmd_mc2_lift(c);
        if (count->parsed()) return cmd_count(count_path, count_lengths);
        if (sim->parsed()) return cmd_simulate(c, which);
        if (plot->parsed()) return cmd_plot_data(c.out, plot_what, c.stage, plot_out);
        if (exporta->parsed()) return cmd_export_alist(c, which);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitOk;
}
