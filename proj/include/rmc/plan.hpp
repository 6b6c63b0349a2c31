#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rmc/channel.hpp"
#include "rmc/fer.hpp"
#include "rmc/grade.hpp"
#include "rmc/mc2.hpp"
#include "rmc/protograph.hpp"

namespace rmc {

struct SimulateSection {
    ChannelKind kind = ChannelKind::AWGNC;
    std::vector<double> grid;
    StopRule stop;
    int iterations = 50;
    std::uint64_t seed = 1;
};

// Everything a design run needs, parsed from one plain-text file: the plan
// geometry and stage schedule plus tool sections with library defaults for
// anything left out.
struct PlanFile {
    DesignPlan design;
    GradeConfig grade;
    Mc2Config mc2;                          // partitioning phases
    std::int64_t lift_transitions = 200000;  // cycle-6 lifting budget
    std::int64_t lift_t8 = 0;                // cycle-8 lifting budget (0 skips)
    int lift_b = 2;
    SimulateSection simulate;
};

// Line-oriented "key value..." text; '#' starts a comment. Keys: gamma,
// kappa, z, L; one "stage m_new [r_new]" line per stage in order; dotted
// sections grade.*, mc2.*, lift.*, simulate.*. Unknown keys and malformed
// values are errors, as is any geometry finalize() rejects.
PlanFile parse_plan_text(const std::string& text);
PlanFile parse_plan_file(const std::string& path);

// The same text back from a parsed plan (defaults included), for artifacts.
std::string format_plan(const PlanFile& plan);

}  // namespace rmc
