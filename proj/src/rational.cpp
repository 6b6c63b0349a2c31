#include "rmc/rational.hpp"

#include <numeric>
#include <stdexcept>

namespace rmc {

Rational::Rational(std::int64_t n, std::int64_t d) : num(n), den(d) {
    if (den == 0) throw std::invalid_argument("Rational: zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
}

Rational Rational::operator+(const Rational& o) const {
    return Rational(num * o.den + o.num * den, den * o.den);
}

Rational Rational::operator-(const Rational& o) const {
    return Rational(num * o.den - o.num * den, den * o.den);
}

Rational Rational::operator*(const Rational& o) const {
    return Rational(num * o.num, den * o.den);
}

std::string Rational::to_decimal_string(int decimals) const {
    std::int64_t scale = 1;
    for (int i = 0; i < decimals; ++i) scale *= 10;
    std::int64_t n = num < 0 ? -num : num;
    // scaled = round(n/den * scale), half away from zero
    std::int64_t scaled = (n * scale * 2 + den) / (2 * den);
    std::int64_t whole = scaled / scale;
    std::int64_t frac = scaled % scale;
    std::string s = (num < 0 && scaled != 0) ? "-" : "";
    s += std::to_string(whole);
    if (decimals > 0) {
        std::string f = std::to_string(frac);
        s += "." + std::string(decimals - f.size(), '0') + f;
    }
    return s;
}

}  // namespace rmc
