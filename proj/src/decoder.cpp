#include "rmc/decoder.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rmc/channel.hpp"

namespace rmc {

namespace {

// Large finite stand-in for the boxplus identity; the formula below returns
// the other operand unchanged against it, and a lone identity (degree-1
// check) lands on the saturation clamp.
constexpr double kBoxplusIdentity = 1e300;

inline double boxplus(double a, double b) {
    const double s = std::copysign(1.0, a) * std::copysign(1.0, b);
    const double m = s * std::min(std::fabs(a), std::fabs(b));
    return m + std::log1p(std::exp(-std::fabs(a + b))) - std::log1p(std::exp(-std::fabs(a - b)));
}

inline double clamp_msg(double v) {
    if (v > kLlrSaturation) return kLlrSaturation;
    if (v < -kLlrSaturation) return -kLlrSaturation;
    return v;
}

}  // namespace

SumProductDecoder::SumProductDecoder(const QcCode& code, int max_iters)
    : ncheck_(code.rows), nvar_(code.cols), max_iters_(max_iters),
      row_ptr_(code.row_ptr), row_idx_(code.row_idx) {
    if (max_iters_ < 1) throw std::invalid_argument("decoder: max_iters must be >= 1");
    if (static_cast<int>(row_ptr_.size()) != ncheck_ + 1)
        throw std::invalid_argument("decoder: malformed adjacency");
    r_.assign(row_idx_.size(), 0.0);
    q_.assign(row_idx_.size(), 0.0);
    posterior_.assign(static_cast<std::size_t>(nvar_), 0.0);
    std::size_t maxdeg = 1;
    for (int c = 0; c < ncheck_; ++c)
        maxdeg = std::max(maxdeg, static_cast<std::size_t>(row_ptr_[static_cast<std::size_t>(c) + 1] -
                                                           row_ptr_[static_cast<std::size_t>(c)]));
    fwd_.assign(maxdeg + 1, 0.0);
}

bool SumProductDecoder::decided_and_satisfied(std::vector<std::uint8_t>& hard) const {
    bool decided = true;
    for (int v = 0; v < nvar_; ++v) {
        const double p = posterior_[static_cast<std::size_t>(v)];
        if (p == 0.0) decided = false;
        hard[static_cast<std::size_t>(v)] = p < 0.0 ? 1 : 0;
    }
    if (!decided) return false;
    for (int c = 0; c < ncheck_; ++c) {
        int parity = 0;
        for (std::int32_t p = row_ptr_[static_cast<std::size_t>(c)];
             p < row_ptr_[static_cast<std::size_t>(c) + 1]; ++p)
            parity ^= hard[static_cast<std::size_t>(row_idx_[static_cast<std::size_t>(p)])];
        if (parity) return false;
    }
    return true;
}

DecodeResult SumProductDecoder::decode(const std::vector<double>& llr) {
    if (static_cast<int>(llr.size()) != nvar_)
        throw std::invalid_argument("decoder: LLR length mismatch");
    for (double v : llr)
        if (!std::isfinite(v)) throw std::invalid_argument("decoder: non-finite LLR");

    DecodeResult out;
    out.estimate.assign(static_cast<std::size_t>(nvar_), 0);
    std::fill(r_.begin(), r_.end(), 0.0);
    std::copy(llr.begin(), llr.end(), posterior_.begin());

    if (decided_and_satisfied(out.estimate)) {
        out.converged = true;
        return out;
    }

    for (int it = 1; it <= max_iters_; ++it) {
        // variable to check: posterior minus this edge's incoming message
        for (std::size_t e = 0; e < q_.size(); ++e)
            q_[e] = clamp_msg(posterior_[static_cast<std::size_t>(row_idx_[e])] - r_[e]);

        // check to variable: forward-backward exclusion per check
        for (int c = 0; c < ncheck_; ++c) {
            const std::int32_t lo = row_ptr_[static_cast<std::size_t>(c)];
            const std::int32_t hi = row_ptr_[static_cast<std::size_t>(c) + 1];
            const int deg = hi - lo;
            fwd_[0] = kBoxplusIdentity;
            for (int k = 0; k < deg; ++k)
                fwd_[static_cast<std::size_t>(k) + 1] =
                    boxplus(fwd_[static_cast<std::size_t>(k)], q_[static_cast<std::size_t>(lo + k)]);
            double back = kBoxplusIdentity;
            for (int k = deg - 1; k >= 0; --k) {
                const double qk = q_[static_cast<std::size_t>(lo + k)];
                r_[static_cast<std::size_t>(lo + k)] =
                    clamp_msg(boxplus(fwd_[static_cast<std::size_t>(k)], back));
                back = boxplus(back, qk);
            }
        }

        std::copy(llr.begin(), llr.end(), posterior_.begin());
        for (std::size_t e = 0; e < r_.size(); ++e)
            posterior_[static_cast<std::size_t>(row_idx_[e])] += r_[e];

        out.iterations = it;
        if (decided_and_satisfied(out.estimate)) {
            out.converged = true;
            return out;
        }
    }
    return out;
}

DecodeResult decode(const QcCode& code, const std::vector<double>& llr, int max_iters) {
    SumProductDecoder dec(code, max_iters);
    return dec.decode(llr);
}

}  // namespace rmc
