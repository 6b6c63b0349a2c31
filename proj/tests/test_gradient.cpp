#include <cmath>
#include <cstdint>
#include <vector>

#include "doctest.h"
#include "rmc/candidates.hpp"
#include "rmc/expectation.hpp"
#include "rmc/laurent.hpp"
#include "rmc/rng.hpp"

using rmc::candidate_census;
using rmc::expected_cycles;
using rmc::grad_cycle4_expanded;
using rmc::grad_expected_cycles;
using rmc::LaurentPoly;

namespace {

LaurentPoly random_distribution(std::mt19937_64& gen, int min_deg, int span) {
    std::vector<double> c(static_cast<std::size_t>(span));
    double total = 0.0;
    for (double& v : c) {
        v = 0.05 + rmc::uniform_unit(gen);
        total += v;
    }
    for (double& v : c) v /= total;
    return LaurentPoly::from_coeffs(min_deg, c);
}

LaurentPoly bump(const LaurentPoly& g, int k, double h) {
    std::vector<double> c = g.coeffs();
    c[static_cast<std::size_t>(k)] += h;
    return LaurentPoly::from_coeffs(g.min_degree(), c);
}

}  // namespace

TEST_CASE("analytic gradient matches central finite differences") {
    std::mt19937_64 gen = rmc::make_engine(rmc::derive_key(0x47524144, 1));
    const double h = 1e-6;
    for (int trial = 0; trial < 20; ++trial) {
        const int m_f = static_cast<int>(rmc::uniform_below(gen, 5));      // 0..4
        const int m_n = 1 + static_cast<int>(rmc::uniform_below(gen, 4));  // 1..4
        const double r_f = m_f == 0 ? 0.0 : 0.5;
        const double r_n = 0.4 + 0.2 * rmc::uniform_unit(gen);
        const LaurentPoly f = m_f == 0 ? LaurentPoly::one()
                                       : random_distribution(gen, 0, m_f + 1);
        const LaurentPoly g = random_distribution(gen, m_f + 1, m_n);
        for (int ell : {2, 3, 4}) {
            const std::uint64_t a = candidate_census(ell, 6, 11);
            const std::vector<double> grad = grad_expected_cycles(ell, a, r_f, f, r_n, g);
            REQUIRE(static_cast<int>(grad.size()) == m_n);
            double gnorm = 0.0;
            for (double v : grad) gnorm = std::max(gnorm, std::fabs(v));
            for (int k = 0; k < m_n; ++k) {
                const double up = expected_cycles(ell, a, r_f, f, r_n, bump(g, k, h));
                const double dn = expected_cycles(ell, a, r_f, f, r_n, bump(g, k, -h));
                const double fd = (up - dn) / (2.0 * h);
                const double denom = std::max({std::fabs(grad[static_cast<std::size_t>(k)]),
                                               std::fabs(fd), 1e-6 * gnorm, 1e-12});
                CAPTURE(trial);
                CAPTURE(ell);
                CAPTURE(k);
                CHECK(std::fabs(fd - grad[static_cast<std::size_t>(k)]) / denom < 1e-5);
            }
        }
    }
}

TEST_CASE("cycle-4 gradient equals its separated expansion") {
    std::mt19937_64 gen = rmc::make_engine(rmc::derive_key(0x47524144, 2));
    for (int trial = 0; trial < 25; ++trial) {
        const int m_f = 1 + static_cast<int>(rmc::uniform_below(gen, 4));
        const int m_n = 1 + static_cast<int>(rmc::uniform_below(gen, 4));
        const double r_f = 0.3 + 0.4 * rmc::uniform_unit(gen);
        const double r_n = (1.0 - r_f) * (0.5 + 0.5 * rmc::uniform_unit(gen));
        const LaurentPoly f = random_distribution(gen, 0, m_f + 1);
        const LaurentPoly g = random_distribution(gen, m_f + 1, m_n);
        const std::uint64_t a = candidate_census(2, 7, 23);
        const std::vector<double> direct = grad_expected_cycles(2, a, r_f, f, r_n, g);
        const std::vector<double> expanded = grad_cycle4_expanded(a, r_f, f, r_n, g);
        REQUIRE(direct.size() == expanded.size());
        for (std::size_t k = 0; k < direct.size(); ++k) {
            const double denom = std::max({std::fabs(direct[k]), std::fabs(expanded[k]), 1.0});
            CHECK(std::fabs(direct[k] - expanded[k]) / denom < 1e-9);
        }
    }
}

TEST_CASE("gradient of the single-component window is scalar and exact") {
    // m_n = 1: E = census * (r_f f + r_n q0 X^w)-style polynomial in the one
    // mass q0, so the derivative is checkable against a quadratic fit.
    const LaurentPoly f = LaurentPoly::from_coeffs(0, {0.6, 0.4});
    const LaurentPoly g = LaurentPoly::from_coeffs(2, {1.0});
    const std::uint64_t a = candidate_census(2, 4, 6);
    const std::vector<double> grad = grad_expected_cycles(2, a, 0.55, f, 0.45, g);
    REQUIRE(grad.size() == 1);
    // Exact directional check with a wide step: cycle-4 expectations are
    // quartic in the masses, so Richardson extrapolation over two step sizes
    // recovers the derivative to near machine precision.
    auto eval = [&](double t) { return expected_cycles(2, a, 0.55, f, 0.45, bump(g, 0, t)); };
    const double h1 = 1e-3, h2 = 2e-3;
    const double d1 = (eval(h1) - eval(-h1)) / (2.0 * h1);
    const double d2 = (eval(h2) - eval(-h2)) / (2.0 * h2);
    const double richardson = (4.0 * d1 - d2) / 3.0;
    CHECK(grad[0] == doctest::Approx(richardson).epsilon(1e-9));
}
