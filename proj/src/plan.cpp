#include "rmc/plan.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rmc {

namespace {

[[noreturn]] void fail(int line, const std::string& what) {
    throw std::invalid_argument("plan line " + std::to_string(line) + ": " + what);
}

double num(std::istringstream& iss, int line, const char* key) {
    double v;
    if (!(iss >> v)) fail(line, std::string("expected a number after ") + key);
    return v;
}

std::int64_t integer(std::istringstream& iss, int line, const char* key) {
    const double v = num(iss, line, key);
    const std::int64_t i = static_cast<std::int64_t>(v);
    if (static_cast<double>(i) != v) fail(line, std::string(key) + " must be an integer");
    return i;
}

void expect_end(std::istringstream& iss, int line) {
    std::string extra;
    if (iss >> extra) fail(line, "unexpected trailing token '" + extra + "'");
}

}  // namespace

PlanFile parse_plan_text(const std::string& text) {
    PlanFile out;
    std::istringstream lines(text);
    std::string raw;
    int lineno = 0;
    bool saw_gamma = false, saw_kappa = false, saw_z = false, saw_l = false;
    while (std::getline(lines, raw)) {
        ++lineno;
        const std::size_t hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        std::istringstream iss(raw);
        std::string key;
        if (!(iss >> key)) continue;

        if (key == "gamma") {
            out.design.gamma = static_cast<int>(integer(iss, lineno, "gamma"));
            saw_gamma = true;
        } else if (key == "kappa") {
            out.design.kappa = static_cast<int>(integer(iss, lineno, "kappa"));
            saw_kappa = true;
        } else if (key == "z") {
            out.design.z = static_cast<int>(integer(iss, lineno, "z"));
            if (out.design.z < 1) fail(lineno, "z must be >= 1");
            saw_z = true;
        } else if (key == "L") {
            out.design.L = static_cast<int>(integer(iss, lineno, "L"));
            if (out.design.L < 1) fail(lineno, "L must be >= 1");
            saw_l = true;
        } else if (key == "stage") {
            StageSpec st;
            st.index = static_cast<int>(out.design.stages.size());
            st.m_new = static_cast<int>(integer(iss, lineno, "stage m_new"));
            double r;
            if (iss >> r) st.r_new = r;
            out.design.stages.push_back(st);
        } else if (key == "grade.w6") {
            out.grade.w6 = num(iss, lineno, key.c_str());
        } else if (key == "grade.w8") {
            out.grade.w8 = num(iss, lineno, key.c_str());
        } else if (key == "grade.epsilon") {
            out.grade.epsilon = num(iss, lineno, key.c_str());
        } else if (key == "grade.alpha") {
            out.grade.alpha = num(iss, lineno, key.c_str());
        } else if (key == "grade.max_iterations") {
            out.grade.max_iterations = integer(iss, lineno, key.c_str());
        } else if (key == "mc2.b") {
            out.mc2.b = static_cast<int>(integer(iss, lineno, key.c_str()));
        } else if (key == "mc2.transitions") {
            out.mc2.max_transitions = integer(iss, lineno, key.c_str());
        } else if (key == "mc2.w4") {
            out.mc2.weights.w4 = num(iss, lineno, key.c_str());
        } else if (key == "mc2.w6") {
            out.mc2.weights.w6 = num(iss, lineno, key.c_str());
        } else if (key == "mc2.w8") {
            out.mc2.weights.w8 = num(iss, lineno, key.c_str());
        } else if (key == "mc2.budget_linf") {
            out.mc2.budget_linf = static_cast<long>(integer(iss, lineno, key.c_str()));
        } else if (key == "mc2.budget_l1") {
            out.mc2.budget_l1 = static_cast<long>(integer(iss, lineno, key.c_str()));
        } else if (key == "mc2.theta0") {
            out.mc2.theta0 = num(iss, lineno, key.c_str());
        } else if (key == "mc2.theta_decay") {
            out.mc2.theta_decay = num(iss, lineno, key.c_str());
        } else if (key == "mc2.seed") {
            out.mc2.seed = static_cast<std::uint64_t>(integer(iss, lineno, key.c_str()));
        } else if (key == "mc2.chains") {
            out.mc2.chains = static_cast<int>(integer(iss, lineno, key.c_str()));
        } else if (key == "mc2.threads") {
            out.mc2.threads = static_cast<int>(integer(iss, lineno, key.c_str()));
        } else if (key == "mc2.trace_stride") {
            out.mc2.trace_stride = integer(iss, lineno, key.c_str());
        } else if (key == "lift.transitions") {
            out.lift_transitions = integer(iss, lineno, key.c_str());
        } else if (key == "lift.t8") {
            out.lift_t8 = integer(iss, lineno, key.c_str());
        } else if (key == "lift.b") {
            out.lift_b = static_cast<int>(integer(iss, lineno, key.c_str()));
        } else if (key == "simulate.channel") {
            std::string kind;
            if (!(iss >> kind)) fail(lineno, "expected awgn or bsc");
            if (kind == "awgn" || kind == "awgnc") {
                out.simulate.kind = ChannelKind::AWGNC;
            } else if (kind == "bsc") {
                out.simulate.kind = ChannelKind::BSC;
            } else {
                fail(lineno, "unknown channel '" + kind + "'");
            }
        } else if (key == "simulate.grid") {
            out.simulate.grid.clear();
            double v;
            while (iss >> v) out.simulate.grid.push_back(v);
            if (out.simulate.grid.empty()) fail(lineno, "empty channel grid");
            continue;  // grid consumed the rest of the line
        } else if (key == "simulate.min_errors") {
            out.simulate.stop.min_frame_errors = integer(iss, lineno, key.c_str());
        } else if (key == "simulate.max_frames") {
            out.simulate.stop.max_frames = integer(iss, lineno, key.c_str());
        } else if (key == "simulate.iterations") {
            out.simulate.iterations = static_cast<int>(integer(iss, lineno, key.c_str()));
        } else if (key == "simulate.seed") {
            out.simulate.seed = static_cast<std::uint64_t>(integer(iss, lineno, key.c_str()));
        } else {
            fail(lineno, "unknown key '" + key + "'");
        }
        expect_end(iss, lineno);
    }
    if (!saw_gamma || !saw_kappa || !saw_z || !saw_l)
        throw std::invalid_argument("plan: gamma, kappa, z and L are all required");
    if (out.design.stages.empty()) throw std::invalid_argument("plan: at least one stage required");
    out.design.finalize();
    return out;
}

PlanFile parse_plan_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("plan: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_plan_text(buf.str());
}

std::string format_plan(const PlanFile& plan) {
    std::ostringstream os;
    os.precision(17);
    os << "gamma " << plan.design.gamma << "\n"
       << "kappa " << plan.design.kappa << "\n"
       << "z " << plan.design.z << "\n"
       << "L " << plan.design.L << "\n";
    for (const StageSpec& st : plan.design.stages) {
        os << "stage " << st.m_new;
        if (st.r_new >= 0.0) os << " " << st.r_new;
        os << "\n";
    }
    os << "grade.w6 " << plan.grade.w6 << "\n"
       << "grade.w8 " << plan.grade.w8 << "\n"
       << "grade.epsilon " << plan.grade.epsilon << "\n"
       << "grade.alpha " << plan.grade.alpha << "\n"
       << "grade.max_iterations " << plan.grade.max_iterations << "\n"
       << "mc2.b " << plan.mc2.b << "\n"
       << "mc2.transitions " << plan.mc2.max_transitions << "\n"
       << "mc2.w4 " << plan.mc2.weights.w4 << "\n"
       << "mc2.w6 " << plan.mc2.weights.w6 << "\n"
       << "mc2.w8 " << plan.mc2.weights.w8 << "\n"
       << "mc2.budget_linf " << plan.mc2.budget_linf << "\n"
       << "mc2.budget_l1 " << plan.mc2.budget_l1 << "\n"
       << "mc2.theta0 " << plan.mc2.theta0 << "\n"
       << "mc2.theta_decay " << plan.mc2.theta_decay << "\n"
       << "mc2.seed " << plan.mc2.seed << "\n"
       << "mc2.chains " << plan.mc2.chains << "\n"
       << "mc2.threads " << plan.mc2.threads << "\n"
       << "mc2.trace_stride " << plan.mc2.trace_stride << "\n"
       << "lift.transitions " << plan.lift_transitions << "\n"
       << "lift.t8 " << plan.lift_t8 << "\n"
       << "lift.b " << plan.lift_b << "\n"
       << "simulate.channel " << (plan.simulate.kind == ChannelKind::AWGNC ? "awgn" : "bsc")
       << "\n";
    if (!plan.simulate.grid.empty()) {
        os << "simulate.grid";
        for (double v : plan.simulate.grid) os << " " << v;
        os << "\n";
    }
    os << "simulate.min_errors " << plan.simulate.stop.min_frame_errors << "\n"
       << "simulate.max_frames " << plan.simulate.stop.max_frames << "\n"
       << "simulate.iterations " << plan.simulate.iterations << "\n"
       << "simulate.seed " << plan.simulate.seed << "\n";
    return os.str();
}

}  // namespace rmc
