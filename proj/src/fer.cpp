#include "rmc/fer.hpp"

#include <cmath>
#include <stdexcept>

#include "rmc/decoder.hpp"
#include "rmc/rng.hpp"

namespace rmc {

std::vector<FerPoint> simulate_fer(const QcCode& code, ChannelKind kind,
                                   const std::vector<double>& grid, const StopRule& stop,
                                   std::uint64_t seed, int max_iters) {
    if (grid.empty()) throw std::invalid_argument("fer: empty channel grid");
    if (stop.min_frame_errors < 1 || stop.max_frames < 1)
        throw std::invalid_argument("fer: bad stop rule");

    const std::vector<std::uint8_t> codeword(static_cast<std::size_t>(code.cols), 0);
    SumProductDecoder decoder(code, max_iters);
    std::vector<FerPoint> out;
    out.reserve(grid.size());

    for (std::size_t pi = 0; pi < grid.size(); ++pi) {
        ChannelSpec spec;
        spec.kind = kind;
        spec.parameter = grid[pi];
        spec.seed = seed;

        FerPoint pt;
        pt.parameter = grid[pi];
        std::int64_t iter_sum = 0;
        while (pt.frame_errors < stop.min_frame_errors && pt.frames < stop.max_frames) {
            const std::uint64_t stream = derive_key(seed, pi + 1, static_cast<std::uint64_t>(pt.frames) + 1);
            const std::vector<double> llr = channel_transmit(codeword, spec, stream);
            const DecodeResult res = decoder.decode(llr);
            ++pt.frames;
            iter_sum += res.iterations;
            if (res.converged) ++pt.converged_frames;
            std::int64_t bits = 0;
            for (std::uint8_t b : res.estimate) bits += b;
            pt.bit_errors += bits;
            if (!res.converged || bits > 0) ++pt.frame_errors;
        }
        pt.fer = static_cast<double>(pt.frame_errors) / static_cast<double>(pt.frames);
        pt.avg_iterations = static_cast<double>(iter_sum) / static_cast<double>(pt.frames);
        pt.ci_halfwidth =
            1.959963984540054 *
            std::sqrt(pt.fer * (1.0 - pt.fer) / static_cast<double>(pt.frames));
        out.push_back(pt);
    }
    return out;
}

}  // namespace rmc
