#pragma once

#include <cstdint>
#include <vector>

#include "rmc/channel.hpp"
#include "rmc/protograph.hpp"

namespace rmc {

struct FerPoint {
    double parameter = 0.0;
    std::int64_t frames = 0;
    std::int64_t frame_errors = 0;
    std::int64_t bit_errors = 0;
    double fer = 0.0;
    double ci_halfwidth = 0.0;  // 95% binomial, normal approximation
    double avg_iterations = 0.0;
    std::int64_t converged_frames = 0;
};

// A point stops at min_frame_errors frame errors or max_frames frames,
// whichever comes first.
struct StopRule {
    std::int64_t min_frame_errors = 100;
    std::int64_t max_frames = 10000000;
};

// All-zero-codeword transmission over every grid point. Each frame draws its
// noise from an independent stream keyed by (seed, point, frame), so the
// result is reproducible and independent of execution order. A frame counts
// as an error unless the decoder converged to the transmitted codeword.
std::vector<FerPoint> simulate_fer(const QcCode& code, ChannelKind kind,
                                   const std::vector<double>& grid, const StopRule& stop,
                                   std::uint64_t seed, int max_iters = 50);

}  // namespace rmc
