#pragma once

#include <cstdint>
#include <string>

namespace rmc {

// Exact reduced fraction; denominator kept positive.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Rational() = default;
    Rational(std::int64_t n, std::int64_t d);

    Rational operator+(const Rational& o) const;
    Rational operator-(const Rational& o) const;
    Rational operator*(const Rational& o) const;
    bool operator==(const Rational& o) const { return num == o.num && den == o.den; }

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }

    // Round-half-away-from-zero rendering with the given number of decimals.
    std::string to_decimal_string(int decimals) const;
};

}  // namespace rmc
