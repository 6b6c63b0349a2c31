#include <cstring>
#include <string>
#include <vector>

#include "doctest.h"
#include "rmc/candidates.hpp"
#include "rmc/counting.hpp"
#include "rmc/kernels.hpp"
#include "rmc/matrix.hpp"
#include "rmc/rng.hpp"

using rmc::CandidateList;
using rmc::collect_candidates;
using rmc::count_active_scan;
using rmc::count_active_scan_scalar;
using rmc::IntMat;

TEST_CASE("kernel dispatch names a real variant") {
    const std::string name = rmc::active_scan_kernel_name();
    if (rmc::active_scan_has_simd())
        CHECK(name != "scalar");
    else
        CHECK(name == "scalar");
}

TEST_CASE("hand-checked scan on the 2x2 grid") {
    const CandidateList list = collect_candidates(IntMat::ones(2, 2), 2);
    REQUIRE(list.count == 1);

    const int k_active[4] = {0, 1, 1, 0};   // traversal 0,1,3,2: 0-1+0-1 != 0
    const int k_zero[4] = {0, 0, 0, 0};
    CHECK(count_active_scan(list, k_active, nullptr, 0) == 0);
    CHECK(count_active_scan(list, k_zero, nullptr, 0) == 1);

    const int k_hole[4] = {0, 0, 0, -1};
    CHECK(count_active_scan(list, k_hole, nullptr, 0) == 0);

    const int t[4] = {0, 0, 0, 1};          // alternating sum 1
    CHECK(count_active_scan(list, k_zero, t, 3) == 0);
    CHECK(count_active_scan(list, k_zero, t, 1) == 1);
    CHECK(count_active_scan(list, nullptr, t, 3) == 0);
    const int t2[4] = {0, 1, 1, 0};         // traversal sum 0-1+0-1 = -2 = 0 mod 2
    CHECK(count_active_scan(list, nullptr, t2, 2) == 1);
    CHECK(count_active_scan(list, nullptr, t2, 4) == 0);
}

TEST_CASE("scalar and dispatched kernels agree on random inputs") {
    std::mt19937_64 gen = rmc::make_engine(rmc::derive_key(0x4b524e4c, 1));
    for (int trial = 0; trial < 6; ++trial) {
        const int rows = 3 + static_cast<int>(rmc::uniform_below(gen, 4));
        const int cols = 4 + static_cast<int>(rmc::uniform_below(gen, 5));
        const int ell = 2 + static_cast<int>(rmc::uniform_below(gen, 3));
        const int z = 2 + static_cast<int>(rmc::uniform_below(gen, 6));
        const CandidateList list = collect_candidates(IntMat::ones(rows, cols), ell);

        std::vector<int> k(static_cast<std::size_t>(rows) * cols);
        std::vector<int> t(k.size());
        for (auto& v : k) {
            v = static_cast<int>(rmc::uniform_below(gen, 4)) - 1;  // -1..2
        }
        for (auto& v : t) v = static_cast<int>(rmc::uniform_below(gen, static_cast<std::uint64_t>(z)));

        CAPTURE(trial);
        CHECK(count_active_scan(list, k.data(), nullptr, 0) ==
              count_active_scan_scalar(list, k.data(), nullptr, 0));
        CHECK(count_active_scan(list, nullptr, t.data(), z) ==
              count_active_scan_scalar(list, nullptr, t.data(), z));
        CHECK(count_active_scan(list, k.data(), t.data(), z) ==
              count_active_scan_scalar(list, k.data(), t.data(), z));
    }
}

TEST_CASE("scan equals the scalar activation predicate") {
    std::mt19937_64 gen = rmc::make_engine(rmc::derive_key(0x4b524e4c, 2));
    const IntMat support = IntMat::ones(4, 6);
    for (int ell : {2, 3}) {
        const CandidateList list = collect_candidates(support, ell);
        IntMat K(4, 6, 0);
        IntMat T(4, 6, 0);
        const int z = 4;
        for (auto& v : K.v) v = static_cast<int>(rmc::uniform_below(gen, 3)) - 1;
        for (auto& v : T.v) v = static_cast<int>(rmc::uniform_below(gen, 4));
        std::int64_t manual_k = 0, manual_kt = 0;
        rmc::enumerate_candidates(support, ell, [&](const std::int32_t* c) {
            if (rmc::is_active_partitioned(c, ell, K)) ++manual_k;
            if (rmc::is_active_lifted(c, ell, K, T, z)) ++manual_kt;
        });
        CHECK(count_active_scan(list, K.v.data(), nullptr, 0) == manual_k);
        CHECK(count_active_scan(list, K.v.data(), T.v.data(), z) == manual_kt);
    }
}

TEST_CASE("empty candidate list scans to zero") {
    IntMat lone(1, 1, 1);
    const CandidateList list = collect_candidates(lone, 2);
    CHECK(list.count == 0);
    const int k[1] = {0};
    CHECK(count_active_scan(list, k, nullptr, 0) == 0);
}
