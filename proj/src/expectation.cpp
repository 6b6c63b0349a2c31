#include "rmc/expectation.hpp"

#include <stdexcept>

namespace rmc {

namespace {

double ipow(double x, int n) {
    double r = 1.0;
    for (int i = 0; i < n; ++i) r *= x;
    return r;
}

double binom(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// sum_i [A]_i [B]_(-i+shift), iterated over A's stored band; B extraction is
// zero outside its own band, so no summation bounds are imposed here.
double cross(const LaurentPoly& A, const LaurentPoly& B, int shift = 0) {
    double s = 0.0;
    for (int i = A.min_degree(); i <= A.max_degree(); ++i) s += A.at(i) * B.at(-i + shift);
    return s;
}

}  // namespace

double expected_cycles(int ell, std::uint64_t census, double r_f, const LaurentPoly& f,
                       double r_n, const LaurentPoly& g) {
    if (ell < 2) throw std::invalid_argument("cycle half-length must be at least 2");
    const LaurentPoly u = f.scaled(r_f) + g.scaled(r_n);
    const unsigned l = static_cast<unsigned>(ell);
    return static_cast<double>(census) * (u.pow(l) * u.mirrored().pow(l)).at(0);
}

double expected_cycles_expanded(int ell, std::uint64_t census, double r_f, const LaurentPoly& f,
                                double r_n, const LaurentPoly& g) {
    const LaurentPoly fm = f.mirrored(), gm = g.mirrored();
    double p = 0.0;
    switch (ell) {
        case 2: {
            static const double a[] = {4, 2}, b[] = {4, 4};
            p = ipow(r_f, 4) * (f.pow(2) * fm.pow(2)).at(0);
            for (int j = 0; j <= 1; ++j)
                p += a[j] * ipow(r_f, 3 - j) * ipow(r_n, 1 + j) *
                     cross(f.pow(2) * fm.pow(1 - j), gm.pow(1 + j));
            for (int j = 0; j <= 1; ++j)
                p += b[j] * ipow(r_f, 2 - j) * ipow(r_n, 2 + j) *
                     cross(f * fm.pow(1 - j), g * gm.pow(1 + j));
            p += ipow(r_n, 4) * (g.pow(2) * gm.pow(2)).at(0);
            break;
        }
        case 3: {
            static const double a[] = {6, 6, 2}, b[] = {9, 18, 6}, c[] = {9, 6};
            p = ipow(r_f, 6) * (f.pow(3) * fm.pow(3)).at(0);
            for (int j = 0; j <= 2; ++j)
                p += a[j] * ipow(r_f, 5 - j) * ipow(r_n, 1 + j) *
                     cross(f.pow(3) * fm.pow(2 - j), gm.pow(1 + j));
            for (int j = 0; j <= 2; ++j)
                p += b[j] * ipow(r_f, 4 - j) * ipow(r_n, 2 + j) *
                     cross(f.pow(2) * fm.pow(2 - j), g * gm.pow(1 + j));
            for (int j = 0; j <= 1; ++j)
                p += c[j] * ipow(r_f, 2 - j) * ipow(r_n, 4 + j) *
                     cross(f * fm.pow(1 - j), g.pow(2) * gm.pow(2 + j));
            p += ipow(r_n, 6) * (g.pow(3) * gm.pow(3)).at(0);
            break;
        }
        case 4: {
            static const double a[] = {8, 12, 8, 2}, b[] = {16, 48, 32, 8}, c[] = {36, 48, 12},
                                d[] = {16, 8};
            p = ipow(r_f, 8) * (f.pow(4) * fm.pow(4)).at(0);
            for (int j = 0; j <= 3; ++j)
                p += a[j] * ipow(r_f, 7 - j) * ipow(r_n, 1 + j) *
                     cross(f.pow(4) * fm.pow(3 - j), gm.pow(1 + j));
            for (int j = 0; j <= 3; ++j)
                p += b[j] * ipow(r_f, 6 - j) * ipow(r_n, 2 + j) *
                     cross(f.pow(3) * fm.pow(3 - j), g * gm.pow(1 + j));
            for (int j = 0; j <= 2; ++j)
                p += c[j] * ipow(r_f, 4 - j) * ipow(r_n, 4 + j) *
                     cross(f.pow(2) * fm.pow(2 - j), g.pow(2) * gm.pow(2 + j));
            for (int j = 0; j <= 1; ++j)
                p += d[j] * ipow(r_f, 2 - j) * ipow(r_n, 6 + j) *
                     cross(f * fm.pow(1 - j), g.pow(3) * gm.pow(3 + j));
            p += ipow(r_n, 8) * (g.pow(4) * gm.pow(4)).at(0);
            break;
        }
        default:
            throw std::invalid_argument("separated form known for cycle lengths 4, 6, 8 only");
    }
    return static_cast<double>(census) * p;
}

double expected_cycles_row_extension(int gamma_f, int gamma_n, int kappa, const LaurentPoly& f,
                                     const LaurentPoly& g) {
    if (gamma_f < 3 || gamma_n < 3)
        throw std::invalid_argument("row extension needs at least 3 fixed and 3 new rows");
    const double k3 = binom(kappa, 3);
    const LaurentPoly ff = f * f.mirrored(), gg = g * g.mirrored();
    double e = binom(gamma_f, 3) * (ff * ff * ff).at(0);
    e += binom(gamma_f, 2) * binom(gamma_n, 1) * cross(ff * ff, gg);
    e += binom(gamma_f, 1) * binom(gamma_n, 2) * cross(ff, gg * gg);
    e += binom(gamma_n, 3) * (gg * gg * gg).at(0);
    return 6.0 * k3 * e;
}

std::vector<double> grad_expected_cycles(int ell, std::uint64_t census, double r_f,
                                         const LaurentPoly& f, double r_n, const LaurentPoly& g) {
    if (ell < 2) throw std::invalid_argument("cycle half-length must be at least 2");
    const LaurentPoly u = f.scaled(r_f) + g.scaled(r_n);
    const unsigned l = static_cast<unsigned>(ell);
    const LaurentPoly core = u.pow(l) * u.mirrored().pow(l - 1);
    const double scale = static_cast<double>(census) * 2.0 * ell * r_n;
    std::vector<double> grad(g.coeffs().size());
    for (std::size_t k = 0; k < grad.size(); ++k)
        grad[k] = scale * core.at(g.min_degree() + static_cast<int>(k));
    return grad;
}

std::vector<double> grad_cycle4_expanded(std::uint64_t census, double r_f, const LaurentPoly& f,
                                         double r_n, const LaurentPoly& g) {
    static const double a[] = {4, 2}, b[] = {4, 4};
    const LaurentPoly fm = f.mirrored(), gm = g.mirrored();
    std::vector<double> grad(g.coeffs().size(), 0.0);
    for (std::size_t k = 0; k < grad.size(); ++k) {
        const int t = g.min_degree() + static_cast<int>(k);
        double v = 0.0;
        for (int j = 0; j <= 1; ++j) {
            const LaurentPoly A = f.pow(2) * fm.pow(1 - j);
            const LaurentPoly B = gm.pow(static_cast<unsigned>(j));
            double s = 0.0;
            for (int i = A.min_degree(); i <= A.max_degree(); ++i)
                s += A.at(i) * (1 + j) * B.at(-i + t);
            v += a[j] * ipow(r_f, 3 - j) * ipow(r_n, 1 + j) * s;
        }
        for (int j = 0; j <= 1; ++j) {
            const LaurentPoly A = f * fm.pow(1 - j);
            const LaurentPoly B1 = gm.pow(1 + j);
            const LaurentPoly B2 = g * gm.pow(static_cast<unsigned>(j));
            double s = 0.0;
            for (int i = A.min_degree(); i <= A.max_degree(); ++i)
                s += A.at(i) * (B1.at(-i - t) + (1 + j) * B2.at(-i + t));
            v += b[j] * ipow(r_f, 2 - j) * ipow(r_n, 2 + j) * s;
        }
        v += ipow(r_n, 4) * 4.0 * (g.pow(2) * gm).at(t);
        grad[k] = static_cast<double>(census) * v;
    }
    return grad;
}

}  // namespace rmc
