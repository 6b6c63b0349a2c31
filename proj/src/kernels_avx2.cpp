#include <immintrin.h>

#include "rmc/kernels.hpp"

namespace rmc {

// AVX2 variant of count_active_scan_scalar: 8 candidates per step, gathered
// through the slot-major candidate layout. The modulo test is done on the
// extracted lane sums; everything else stays vectorized.
std::int64_t count_active_scan_avx2(const CandidateList& c, const int* kvals, const int* tvals,
                                    int z) {
    const int slots = 2 * c.ell;
    const std::int64_t n = c.count;
    const __m256i minus1 = _mm256_set1_epi32(-1);
    alignas(32) int tbuf[8];
    std::int64_t active = 0;
    std::int64_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256i ksum = _mm256_setzero_si256();
        __m256i tsum = _mm256_setzero_si256();
        __m256i valid = minus1;
        for (int s = 0; s < slots; ++s) {
            const __m256i idx =
                _mm256_loadu_si256(reinterpret_cast<const __m256i*>(c.slot(s) + i));
            if (kvals) {
                const __m256i v = _mm256_i32gather_epi32(kvals, idx, 4);
                valid = _mm256_and_si256(valid, _mm256_cmpgt_epi32(v, minus1));
                ksum = (s & 1) ? _mm256_sub_epi32(ksum, v) : _mm256_add_epi32(ksum, v);
            }
            if (tvals) {
                const __m256i w = _mm256_i32gather_epi32(tvals, idx, 4);
                tsum = (s & 1) ? _mm256_sub_epi32(tsum, w) : _mm256_add_epi32(tsum, w);
            }
        }
        __m256i ok = valid;
        if (kvals) ok = _mm256_and_si256(ok, _mm256_cmpeq_epi32(ksum, _mm256_setzero_si256()));
        int lanes = _mm256_movemask_ps(_mm256_castsi256_ps(ok));
        if (tvals && lanes) {
            _mm256_store_si256(reinterpret_cast<__m256i*>(tbuf), tsum);
            for (int l = 0; l < 8; ++l)
                if (((lanes >> l) & 1) && tbuf[l] % z != 0) lanes &= ~(1 << l);
        }
        active += __builtin_popcount(static_cast<unsigned>(lanes));
    }
    for (; i < n; ++i) {
        int ks = 0, ts = 0;
        bool assigned = true;
        for (int s = 0; s < slots; ++s) {
            const std::int32_t e = c.slot(s)[i];
            const int sign = (s & 1) ? -1 : 1;
            if (kvals) {
                assigned &= kvals[e] >= 0;
                ks += sign * kvals[e];
            }
            if (tvals) ts += sign * tvals[e];
        }
        if (assigned && (!kvals || ks == 0) && (!tvals || ts % z == 0)) ++active;
    }
    return active;
}

}  // namespace rmc
