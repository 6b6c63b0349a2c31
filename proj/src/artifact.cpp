#include "rmc/artifact.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "rmc/alist.hpp"
#include "rmc/counting.hpp"
#include "rmc/rng.hpp"

namespace rmc {

namespace {

using nlohmann::json;

json mat_to_json(const IntMat& m) {
    return json{{"rows", m.rows}, {"cols", m.cols}, {"v", m.v}};
}

IntMat mat_from_json(const json& j) {
    IntMat m(j.at("rows").get<int>(), j.at("cols").get<int>());
    const std::vector<int> v = j.at("v").get<std::vector<int>>();
    if (v.size() != m.v.size()) throw std::invalid_argument("artifact: matrix size mismatch");
    m.v = v;
    return m;
}

json dist_to_json(const EdgeDistribution& d) {
    return json{{"offset", d.offset}, {"weights", d.weights}};
}

EdgeDistribution dist_from_json(const json& j) {
    EdgeDistribution d;
    d.offset = j.at("offset").get<int>();
    d.weights = j.at("weights").get<std::vector<double>>();
    return d;
}

// Distinct deterministic seeds per optimization so runs never share streams.
std::uint64_t stage_seed(std::uint64_t base, int purpose, int stage) {
    return derive_key(base, static_cast<std::uint64_t>(purpose),
                      static_cast<std::uint64_t>(stage));
}

std::int64_t count_or_skip(const IntMat& K, const IntMat& T, int z, int L, int ell, bool on) {
    return on ? count_cycles_lifted(K, T, z, L, ell) : -1;
}

IntMat union_support(const IntMat& a, const IntMat& b) {
    IntMat u(a.rows, a.cols, 0);
    for (std::size_t i = 0; i < u.v.size(); ++i) u.v[i] = (a.v[i] != 0 || b.v[i] != 0) ? 1 : 0;
    return u;
}

}  // namespace

DesignArtifact run_design(const PlanFile& plan, bool count_cycles8) {
    DesignArtifact art;
    art.plan = plan;
    art.plan.design.finalize();

    // gradient pipeline: p*, stage masses, per-stage window distributions
    const PipelineResult pipe = run_pipeline(art.plan.design, art.plan.grade);
    art.plan.design = pipe.plan;
    art.p_star = pipe.p_star();

    // full-memory reference partitioning and its lifting
    Mc2Config kcfg = art.plan.mc2;
    kcfg.seed = stage_seed(plan.mc2.seed, 1, 0);
    const KStarResult kstar = design_reference_K_star(art.plan.design, art.p_star, kcfg);
    art.k_star = kstar.K;
    art.kstar_c = kstar.chain.c_opt;
    art.kstar_transitions = kstar.chain.transitions;

    const int z = art.plan.design.z;
    const int L = art.plan.design.L;
    const IntMat no_fix_mask(art.k_star.rows, art.k_star.cols, 0);
    const IntMat no_fix_T(art.k_star.rows, art.k_star.cols, -1);
    Mc2Config lcfg = art.plan.mc2;
    lcfg.b = art.plan.lift_b;
    lcfg.seed = stage_seed(plan.mc2.seed, 2, 0);
    const LiftOutcome kl = run_staged_lifting(art.k_star, no_fix_T, no_fix_mask, z, lcfg,
                                              art.plan.lift_transitions, art.plan.lift_t8);
    if (!kl.cycle4_cleared) {
        art.failed_stage = art.plan.design.num_stages() - 1;
        art.failure = "full-memory lifting left cycle-4 candidates active";
    }
    art.t_star = kl.T;

    // nested per-stage designs
    IntMat prev_K(art.k_star.rows, art.k_star.cols, -1);
    IntMat prev_T(art.k_star.rows, art.k_star.cols, -1);
    std::vector<IntMat> stage_bases;
    for (int d = 0; d < art.plan.design.num_stages(); ++d) {
        const StageSpec& st = art.plan.design.stages[static_cast<std::size_t>(d)];
        const GradeStageRun& gr = pipe.stages[static_cast<std::size_t>(d)];

        StageArtifact sa;
        sa.stage = d;
        sa.r_f = gr.r_f;
        sa.r_n = gr.r_n;
        sa.q = gr.result.q;
        sa.u = gr.u;
        sa.e6 = gr.result.e6;
        sa.e8 = gr.result.e8;

        const auto [h_n, h_f] = derive_stage_base(art.k_star, st.m_fixed, st.m_new, d);
        const IntMat support = union_support(h_n, h_f);
        stage_bases.push_back(support);

        // The last stage is the full-memory reference itself: its matrices are
        // K*/T* verbatim, so its counts coincide with the truncation baseline
        // by construction and no further optimization runs.
        if (d == art.plan.design.num_stages() - 1) {
            sa.rmc.K = art.k_star;
            sa.rmc.T = art.t_star;
            sa.rmc.fixed_mask = h_f;
            sa.partition_c = art.kstar_c;
            sa.partition_transitions = art.kstar_transitions;
            sa.cycle4_cleared = kl.cycle4_cleared;
            sa.cycle6_cleared = kl.cycle6_cleared;
            sa.lift_attempts = kl.init_attempts;
            if (!kl.cycle4_cleared) {
                art.stages.push_back(sa);
                break;
            }
            sa.c6 = count_cycles_lifted(sa.rmc.K, sa.rmc.T, z, L, 3);
            sa.c8 = count_or_skip(sa.rmc.K, sa.rmc.T, z, L, 4, count_cycles8);
            const auto [length, rate] = code_rate_and_length(art.plan.design, d);
            sa.length = length;
            sa.rate = rate;
            art.stages.push_back(sa);
            continue;
        }

        Mc2Config pcfg = art.plan.mc2;
        pcfg.seed = stage_seed(plan.mc2.seed, 3, d);
        const IntMat x0 =
            init_partition_state(support, prev_K, h_f, st.window_lo(), sa.q, pcfg.seed);

        Mc2Context ctx;
        ctx.x_init = x0;
        ctx.fixed_mask = h_f;
        ctx.value_lo = st.window_lo();
        ctx.value_hi = st.window_hi();
        ctx.modulus = 0;

        std::array<bool, 3> want{};
        for (int g = 0; g < 3; ++g) want[static_cast<std::size_t>(g)] = pcfg.weights.at(g + 2) > 0.0;
        const Mc2CandidateSet cands = collect_mc2_candidates(support, want);
        const Mc2Result part = mc2_optimize(ctx, cands, pcfg);
        sa.rmc.K = part.x_opt;
        sa.rmc.fixed_mask = h_f;
        sa.partition_c = part.c_opt;
        sa.partition_transitions = part.transitions;

        Mc2Config slcfg = art.plan.mc2;
        slcfg.b = art.plan.lift_b;
        slcfg.seed = stage_seed(plan.mc2.seed, 4, d);
        const LiftOutcome lift = run_staged_lifting(sa.rmc.K, prev_T, h_f, z, slcfg,
                                                    art.plan.lift_transitions, art.plan.lift_t8);
        sa.rmc.T = lift.T;
        sa.cycle4_cleared = lift.cycle4_cleared;
        sa.cycle6_cleared = lift.cycle6_cleared;
        sa.lift_attempts = lift.init_attempts;

        if (!lift.cycle4_cleared) {
            art.failed_stage = d;
            art.failure = "stage lifting left cycle-4 candidates active";
            art.stages.push_back(sa);
            break;
        }

        sa.c6 = count_cycles_lifted(sa.rmc.K, sa.rmc.T, z, L, 3);
        sa.c8 = count_or_skip(sa.rmc.K, sa.rmc.T, z, L, 4, count_cycles8);
        const auto [length, rate] = code_rate_and_length(art.plan.design, d);
        sa.length = length;
        sa.rate = rate;

        prev_K = sa.rmc.K;
        prev_T = sa.rmc.T;
        art.stages.push_back(sa);
    }

    if (static_cast<int>(stage_bases.size()) == art.plan.design.num_stages())
        art.hw_savings = hardware_sharing_savings(stage_bases);
    return art;
}

void add_baseline(DesignArtifact& art, bool count_cycles8) {
    if (art.k_star.rows == 0 || art.t_star.rows == 0)
        throw std::invalid_argument("artifact: baseline needs the full-memory design");
    art.baselines.clear();
    const int z = art.plan.design.z;
    const int L = art.plan.design.L;
    for (int d = 0; d < static_cast<int>(art.stages.size()); ++d) {
        const int memory = art.plan.design.stages[static_cast<std::size_t>(d)].memory();
        BaselineArtifact ba;
        ba.stage = d;
        ba.sf = derive_sf_baseline(art.k_star, art.t_star, memory);
        ba.c6 = count_cycles_lifted(ba.sf.K, ba.sf.T, z, L, 3);
        ba.c8 = count_or_skip(ba.sf.K, ba.sf.T, z, L, 4, count_cycles8);
        art.baselines.push_back(ba);
    }
}

std::string design_to_json(const DesignArtifact& art) {
    json j;
    j["plan"] = format_plan(art.plan);
    j["p_star"] = dist_to_json(art.p_star);
    j["k_star"] = mat_to_json(art.k_star);
    j["t_star"] = mat_to_json(art.t_star);
    j["kstar_c"] = art.kstar_c;
    j["kstar_transitions"] = art.kstar_transitions;
    j["hw_savings"] = art.hw_savings;
    j["failed_stage"] = art.failed_stage;
    j["failure"] = art.failure;
    j["stages"] = json::array();
    for (const StageArtifact& sa : art.stages) {
        json s;
        s["stage"] = sa.stage;
        s["r_f"] = sa.r_f;
        s["r_n"] = sa.r_n;
        s["q"] = dist_to_json(sa.q);
        s["u"] = dist_to_json(sa.u);
        s["e6"] = sa.e6;
        s["e8"] = sa.e8;
        s["K"] = mat_to_json(sa.rmc.K);
        s["T"] = mat_to_json(sa.rmc.T);
        s["fixed_mask"] = mat_to_json(sa.rmc.fixed_mask);
        s["partition_c"] = sa.partition_c;
        s["partition_transitions"] = sa.partition_transitions;
        s["cycle4_cleared"] = sa.cycle4_cleared;
        s["cycle6_cleared"] = sa.cycle6_cleared;
        s["lift_attempts"] = sa.lift_attempts;
        s["c6"] = sa.c6;
        s["c8"] = sa.c8;
        s["length"] = sa.length;
        s["rate_num"] = sa.rate.num;
        s["rate_den"] = sa.rate.den;
        j["stages"].push_back(s);
    }
    j["baselines"] = json::array();
    for (const BaselineArtifact& ba : art.baselines) {
        json s;
        s["stage"] = ba.stage;
        s["K"] = mat_to_json(ba.sf.K);
        s["T"] = mat_to_json(ba.sf.T);
        s["fixed_mask"] = mat_to_json(ba.sf.fixed_mask);
        s["c6"] = ba.c6;
        s["c8"] = ba.c8;
        j["baselines"].push_back(s);
    }
    return j.dump(2);
}

DesignArtifact design_from_json(const std::string& text) {
    const json j = json::parse(text);
    DesignArtifact art;
    art.plan = parse_plan_text(j.at("plan").get<std::string>());
    art.p_star = dist_from_json(j.at("p_star"));
    art.k_star = mat_from_json(j.at("k_star"));
    art.t_star = mat_from_json(j.at("t_star"));
    art.kstar_c = j.at("kstar_c").get<double>();
    art.kstar_transitions = j.at("kstar_transitions").get<std::int64_t>();
    art.hw_savings = j.at("hw_savings").get<double>();
    art.failed_stage = j.at("failed_stage").get<int>();
    art.failure = j.at("failure").get<std::string>();
    for (const json& s : j.at("stages")) {
        StageArtifact sa;
        sa.stage = s.at("stage").get<int>();
        sa.r_f = s.at("r_f").get<double>();
        sa.r_n = s.at("r_n").get<double>();
        sa.q = dist_from_json(s.at("q"));
        sa.u = dist_from_json(s.at("u"));
        sa.e6 = s.at("e6").get<double>();
        sa.e8 = s.at("e8").get<double>();
        sa.rmc.K = mat_from_json(s.at("K"));
        sa.rmc.T = mat_from_json(s.at("T"));
        sa.rmc.fixed_mask = mat_from_json(s.at("fixed_mask"));
        sa.partition_c = s.at("partition_c").get<double>();
        sa.partition_transitions = s.at("partition_transitions").get<std::int64_t>();
        sa.cycle4_cleared = s.at("cycle4_cleared").get<bool>();
        sa.cycle6_cleared = s.at("cycle6_cleared").get<bool>();
        sa.lift_attempts = s.at("lift_attempts").get<std::int64_t>();
        sa.c6 = s.at("c6").get<std::int64_t>();
        sa.c8 = s.at("c8").get<std::int64_t>();
        sa.length = s.at("length").get<std::int64_t>();
        sa.rate = Rational(s.at("rate_num").get<std::int64_t>(), s.at("rate_den").get<std::int64_t>());
        art.stages.push_back(sa);
    }
    for (const json& s : j.at("baselines")) {
        BaselineArtifact ba;
        ba.stage = s.at("stage").get<int>();
        ba.sf.K = mat_from_json(s.at("K"));
        ba.sf.T = mat_from_json(s.at("T"));
        ba.sf.fixed_mask = mat_from_json(s.at("fixed_mask"));
        ba.c6 = s.at("c6").get<std::int64_t>();
        ba.c8 = s.at("c8").get<std::int64_t>();
        art.baselines.push_back(ba);
    }
    return art;
}

void save_design(const DesignArtifact& art, const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    {
        std::ofstream out(fs::path(dir) / "design.json");
        if (!out) throw std::runtime_error("artifact: cannot write design.json in " + dir);
        out << design_to_json(art) << "\n";
    }
    const int z = art.plan.design.z;
    const int L = art.plan.design.L;
    for (const StageArtifact& sa : art.stages) {
        if (sa.rmc.T.rows == 0) continue;
        std::ofstream out(fs::path(dir) / ("rmc_stage" + std::to_string(sa.stage) + ".alist"));
        write_alist(build_sc_code(sa.rmc.K, sa.rmc.T, z, L), out);
    }
    for (const BaselineArtifact& ba : art.baselines) {
        std::ofstream out(fs::path(dir) / ("sf_stage" + std::to_string(ba.stage) + ".alist"));
        write_alist(build_sc_code(ba.sf.K, ba.sf.T, z, L), out);
    }
    std::ofstream sum(fs::path(dir) / "summary.txt");
    sum << summary_table(art);
}

DesignArtifact load_design(const std::string& dir) {
    std::ifstream in(std::filesystem::path(dir) / "design.json");
    if (!in) throw std::invalid_argument("artifact: no design.json in " + dir);
    std::ostringstream buf;
    buf << in.rdbuf();
    return design_from_json(buf.str());
}

namespace {

std::string count_cell(std::int64_t c) {
    return c < 0 ? std::string("-") : std::to_string(c);
}

std::string reduction_cell(std::int64_t sf, std::int64_t rmc) {
    if (sf <= 0 || rmc < 0) return "-";
    const double pct = 100.0 * (static_cast<double>(sf) - static_cast<double>(rmc)) /
                       static_cast<double>(sf);
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(2);
    os << pct << "%";
    return os.str();
}

}  // namespace

std::string summary_table(const DesignArtifact& art) {
    std::ostringstream os;
    os << "stage\trate\tmemory\tlength\trmc_c6/c8\tsf_c6/c8\treduction_c6/c8\n";
    for (const StageArtifact& sa : art.stages) {
        const BaselineArtifact* ba = nullptr;
        for (const BaselineArtifact& b : art.baselines)
            if (b.stage == sa.stage) ba = &b;
        os << sa.stage << "\t" << sa.rate.to_decimal_string(4) << "\t"
           << art.plan.design.stages[static_cast<std::size_t>(sa.stage)].memory() << "\t"
           << sa.length << "\t" << count_cell(sa.c6) << "/" << count_cell(sa.c8) << "\t";
        if (ba) {
            os << count_cell(ba->c6) << "/" << count_cell(ba->c8) << "\t"
               << reduction_cell(ba->c6, sa.c6) << "/" << reduction_cell(ba->c8, sa.c8);
        } else {
            os << "-/-\t-/-";
        }
        os << "\n";
    }
    if (art.hw_savings >= 0.0) {
        os.setf(std::ios::fixed);
        os.precision(4);
        os << "hardware_sharing_savings\t" << art.hw_savings << "\n";
    }
    if (art.failed_stage >= 0)
        os << "failed_stage\t" << art.failed_stage << "\t" << art.failure << "\n";
    return os.str();
}

}  // namespace rmc
