#pragma once

#include <cstdint>
#include <vector>

#include "rmc/protograph.hpp"

namespace rmc {

struct DecodeResult {
    std::vector<std::uint8_t> estimate;
    bool converged = false;  // every parity check satisfied by a decided state
    int iterations = 0;      // message-passing rounds actually run
};

// Log-domain sum-product decoder, flooding schedule. Check updates use the
// exact pairwise Jacobian form (identical marginals to the tanh product and
// to probability-domain belief propagation); variable-to-check messages are
// clamped at +-kLlrSaturation. A posterior of exactly zero marks an undecided
// bit and blocks convergence, so an all-zero LLR vector never converges.
class SumProductDecoder {
  public:
    explicit SumProductDecoder(const QcCode& code, int max_iters = 50);

    // LLRs must be finite, one per variable node (positive favors bit 0).
    DecodeResult decode(const std::vector<double>& llr);

    int max_iterations() const { return max_iters_; }

    // Per-variable posterior LLRs after the last decode() call.
    const std::vector<double>& posteriors() const { return posterior_; }

  private:
    int ncheck_, nvar_, max_iters_;
    std::vector<std::int32_t> row_ptr_, row_idx_;
    std::vector<double> r_, q_, posterior_;  // per-edge / per-edge / per-variable
    std::vector<double> fwd_;

    bool decided_and_satisfied(std::vector<std::uint8_t>& hard) const;
};

// One-shot form of the same decoder.
DecodeResult decode(const QcCode& code, const std::vector<double>& llr, int max_iters = 50);

}  // namespace rmc
