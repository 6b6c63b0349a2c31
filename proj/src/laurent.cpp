#include "rmc/laurent.hpp"

#include <algorithm>
#include <stdexcept>

namespace rmc {

LaurentPoly::LaurentPoly(int min_deg, std::vector<double> coeff)
    : mMinDeg(min_deg), mCoeff(std::move(coeff)) {
    if (mCoeff.empty()) throw std::invalid_argument("LaurentPoly: empty coefficient vector");
}

LaurentPoly LaurentPoly::operator*(const LaurentPoly& o) const {
    std::vector<double> out(mCoeff.size() + o.mCoeff.size() - 1, 0.0);
    for (std::size_t a = 0; a < mCoeff.size(); ++a) {
        const double va = mCoeff[a];
        if (va == 0.0) continue;
        for (std::size_t b = 0; b < o.mCoeff.size(); ++b) out[a + b] += va * o.mCoeff[b];
    }
    return LaurentPoly(mMinDeg + o.mMinDeg, std::move(out));
}

LaurentPoly LaurentPoly::operator+(const LaurentPoly& o) const {
    const int lo = std::min(mMinDeg, o.mMinDeg);
    const int hi = std::max(max_degree(), o.max_degree());
    std::vector<double> out(static_cast<std::size_t>(hi - lo + 1), 0.0);
    for (std::size_t a = 0; a < mCoeff.size(); ++a) out[mMinDeg - lo + a] += mCoeff[a];
    for (std::size_t b = 0; b < o.mCoeff.size(); ++b) out[o.mMinDeg - lo + b] += o.mCoeff[b];
    return LaurentPoly(lo, std::move(out));
}

LaurentPoly LaurentPoly::scaled(double s) const {
    std::vector<double> out(mCoeff);
    for (double& v : out) v *= s;
    return LaurentPoly(mMinDeg, std::move(out));
}

LaurentPoly LaurentPoly::mirrored() const {
    std::vector<double> out(mCoeff.rbegin(), mCoeff.rend());
    return LaurentPoly(-max_degree(), std::move(out));
}

LaurentPoly LaurentPoly::pow(unsigned n) const {
    LaurentPoly r = one();
    for (unsigned i = 0; i < n; ++i) r = r * (*this);
    return r;
}

double LaurentPoly::sum() const {
    double s = 0.0;
    for (double v : mCoeff) s += v;
    return s;
}

}  // namespace rmc
