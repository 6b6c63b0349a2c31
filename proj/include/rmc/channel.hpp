#pragma once

#include <cstdint>
#include <vector>

namespace rmc {

enum class ChannelKind { AWGNC, BSC };

// AWGNC parameter is Ec/N0 in dB (energy per coded bit over noise density,
// bipolar signaling); BSC parameter is the crossover probability.
struct ChannelSpec {
    ChannelKind kind = ChannelKind::AWGNC;
    double parameter = 0.0;
    std::uint64_t seed = 1;
};

// Messages and channel LLRs are clamped to this magnitude.
inline constexpr double kLlrSaturation = 50.0;

// Transmits one codeword and returns the received LLRs (positive favors 0).
// AWGNC: y = (1 - 2c) + n with noise variance N0/2, LLR = 4 y Ec/N0;
// BSC: flip with probability p, LLR = +-log((1-p)/p). stream_key selects the
// noise stream; the single-argument form derives it from spec.seed.
std::vector<double> channel_transmit(const std::vector<std::uint8_t>& codeword,
                                     const ChannelSpec& spec, std::uint64_t stream_key);
std::vector<double> channel_transmit(const std::vector<std::uint8_t>& codeword,
                                     const ChannelSpec& spec);

}  // namespace rmc
