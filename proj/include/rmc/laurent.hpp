#pragma once

#include <cstddef>
#include <vector>

namespace rmc {

// Polynomial in X with integer exponents of either sign, dense coefficients.
// Products are exact convolutions; no transform-based shortcuts, so expectation
// identities hold to rounding error only.
class LaurentPoly {
  public:
    LaurentPoly() : mMinDeg(0), mCoeff{0.0} {}
    LaurentPoly(int min_deg, std::vector<double> coeff);

    static LaurentPoly one() { return LaurentPoly(0, {1.0}); }
    // Builds sum_k coeff[k] X^(min_deg+k) from a probability-style vector.
    static LaurentPoly from_coeffs(int min_deg, const std::vector<double>& c) {
        return LaurentPoly(min_deg, c);
    }

    int min_degree() const { return mMinDeg; }
    int max_degree() const { return mMinDeg + static_cast<int>(mCoeff.size()) - 1; }
    const std::vector<double>& coeffs() const { return mCoeff; }

    // Coefficient extraction [.]_i; zero outside the stored band.
    double at(int i) const {
        const long j = static_cast<long>(i) - mMinDeg;
        if (j < 0 || j >= static_cast<long>(mCoeff.size())) return 0.0;
        return mCoeff[static_cast<std::size_t>(j)];
    }

    LaurentPoly operator*(const LaurentPoly& o) const;
    LaurentPoly operator+(const LaurentPoly& o) const;
    LaurentPoly scaled(double s) const;
    // Substitutes X -> X^(-1).
    LaurentPoly mirrored() const;
    LaurentPoly pow(unsigned n) const;

    double sum() const;

  private:
    int mMinDeg;
    std::vector<double> mCoeff;
};

}  // namespace rmc
