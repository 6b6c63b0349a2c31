#include "rmc/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "rmc/rng.hpp"

namespace rmc {

namespace {

double clamp_llr(double v) {
    if (v > kLlrSaturation) return kLlrSaturation;
    if (v < -kLlrSaturation) return -kLlrSaturation;
    return v;
}

}  // namespace

std::vector<double> channel_transmit(const std::vector<std::uint8_t>& codeword,
                                     const ChannelSpec& spec, std::uint64_t stream_key) {
    std::vector<double> llr(codeword.size());
    std::mt19937_64 rng = make_engine(stream_key);
    if (spec.kind == ChannelKind::AWGNC) {
        if (!std::isfinite(spec.parameter))
            throw std::invalid_argument("channel: non-finite Ec/N0");
        const double snr = std::pow(10.0, spec.parameter / 10.0);
        const double sigma = std::sqrt(1.0 / (2.0 * snr));
        // Box-Muller, one fresh pair per two symbols; resolves identically
        // on every platform unlike std::normal_distribution
        double spare = 0.0;
        bool have_spare = false;
        for (std::size_t i = 0; i < codeword.size(); ++i) {
            double n;
            if (have_spare) {
                n = spare;
                have_spare = false;
            } else {
                const double u1 = 1.0 - uniform_unit(rng);  // (0, 1]
                const double u2 = uniform_unit(rng);
                const double r = std::sqrt(-2.0 * std::log(u1));
                const double a = 2.0 * std::numbers::pi * u2;
                n = r * std::cos(a);
                spare = r * std::sin(a);
                have_spare = true;
            }
            const double y = (codeword[i] ? -1.0 : 1.0) + sigma * n;
            llr[i] = clamp_llr(4.0 * y * snr);
        }
    } else {
        const double p = spec.parameter;
        if (!(p >= 0.0) || p > 0.5)
            throw std::invalid_argument("channel: crossover probability outside [0, 0.5]");
        const double mag =
            p == 0.0 ? kLlrSaturation : clamp_llr(std::log((1.0 - p) / p));
        for (std::size_t i = 0; i < codeword.size(); ++i) {
            const bool flip = uniform_unit(rng) < p;
            const int received = static_cast<int>(codeword[i] != 0) ^ static_cast<int>(flip);
            llr[i] = received ? -mag : mag;
        }
    }
    return llr;
}

std::vector<double> channel_transmit(const std::vector<std::uint8_t>& codeword,
                                     const ChannelSpec& spec) {
    return channel_transmit(codeword, spec, derive_key(spec.seed));
}

}  // namespace rmc
