#include "rmc/kernels.hpp"

namespace rmc {

#if defined(RMC_HAVE_AVX2_TU)
std::int64_t count_active_scan_avx2(const CandidateList& c, const int* kvals, const int* tvals,
                                    int z);
#endif

std::int64_t count_active_scan_scalar(const CandidateList& c, const int* kvals, const int* tvals,
                                      int z) {
    const int slots = 2 * c.ell;
    std::int64_t active = 0;
    for (std::int64_t i = 0; i < c.count; ++i) {
        int ksum = 0, tsum = 0;
        bool assigned = true;
        for (int s = 0; s < slots; ++s) {
            const std::int32_t e = c.slot(s)[i];
            const int sign = (s & 1) ? -1 : 1;
            if (kvals) {
                const int kv = kvals[e];
                assigned &= kv >= 0;
                ksum += sign * kv;
            }
            if (tvals) tsum += sign * tvals[e];
        }
        if (!assigned) continue;
        if (kvals && ksum != 0) continue;
        if (tvals && tsum % z != 0) continue;
        ++active;
    }
    return active;
}

namespace {

using ScanFn = std::int64_t (*)(const CandidateList&, const int*, const int*, int);

ScanFn pick_scan() {
#if defined(RMC_HAVE_AVX2_TU)
    if (__builtin_cpu_supports("avx2")) return &count_active_scan_avx2;
#endif
    return &count_active_scan_scalar;
}

const ScanFn g_scan = pick_scan();

}  // namespace

std::int64_t count_active_scan(const CandidateList& c, const int* kvals, const int* tvals, int z) {
    return g_scan(c, kvals, tvals, z);
}

const char* active_scan_kernel_name() {
    return g_scan == &count_active_scan_scalar ? "scalar" : "avx2";
}

bool active_scan_has_simd() { return g_scan != &count_active_scan_scalar; }

}  // namespace rmc
