#pragma once

#include <cstdint>
#include <vector>

#include "rmc/laurent.hpp"

namespace rmc {

// Expected number of cycle-2*ell candidates that stay active after a random
// partitioning whose edges land in frozen components with total mass r_f
// (distribution f over their indices) and in new components with mass r_n
// (distribution g). census is the candidate count of the all-one matrix.
double expected_cycles(int ell, std::uint64_t census, double r_f, const LaurentPoly& f,
                       double r_n, const LaurentPoly& g);

// Same value through the fully separated closed forms, ell in {2,3,4}: the
// f-only term, the mixed sums with tabulated coefficients, and the g-only
// term. Agrees with expected_cycles to rounding error.
double expected_cycles_expanded(int ell, std::uint64_t census, double r_f, const LaurentPoly& f,
                                double r_n, const LaurentPoly& g);

// Expected cycle-6 candidates when rate compatibility adds gamma_n all-one
// rows to a fixed gamma_f-row base at common memory: four-term sum over how
// many of the cycle's three row pairs live in fixed rows (distribution f)
// versus new rows (g). Requires gamma_f >= 3 and gamma_n >= 3.
double expected_cycles_row_extension(int gamma_f, int gamma_n, int kappa, const LaurentPoly& f,
                                     const LaurentPoly& g);

// Gradient of expected_cycles with respect to the new-window masses, before
// any Lagrangian centering. Entry k is the derivative for the component of
// degree g.min_degree()+k; the vector spans g's stored band.
std::vector<double> grad_expected_cycles(int ell, std::uint64_t census, double r_f,
                                         const LaurentPoly& f, double r_n, const LaurentPoly& g);

// Cycle-4 gradient assembled term by term from the separated closed form;
// matches grad_expected_cycles(2, ...) to rounding error.
std::vector<double> grad_cycle4_expanded(std::uint64_t census, double r_f, const LaurentPoly& f,
                                         double r_n, const LaurentPoly& g);

}  // namespace rmc
