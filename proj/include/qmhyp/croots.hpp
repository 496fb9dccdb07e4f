#pragma once

#include <optional>
#include <vector>

#include "qmhyp/mp.hpp"

namespace qmhyp {

/// Evaluates a complex polynomial (increasing degree) and its derivative.
inline std::pair<Complex, Complex> horner2(const std::vector<Complex>& c, const Complex& x) {
    Complex p, dp;
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
        dp = dp * x + p;
        p = p * x + *it;
    }
    return {p, dp};
}

/// Newton refinement of an approximate simple root; returns nullopt if it does not settle.
inline std::optional<Complex> newton_polish(const std::vector<Complex>& c, Complex x, unsigned bits) {
    const Real tol = pow2(-static_cast<long>(bits) + 8);
    for (int it = 0; it < 200; ++it) {
        auto [p, dp] = horner2(c, x);
        if (dp.norm2() == 0) return std::nullopt;
        const Complex step = p / dp;
        x -= step;
        if (step.abs() <= tol * std::max(Real(1), x.abs())) return x;
    }
    return std::nullopt;
}

/// All roots of a polynomial with complex coefficients (increasing degree), by Durand-Kerner
/// iteration followed by Newton polishing. Roots are assumed simple.
inline std::vector<Complex> complex_roots(std::vector<Complex> c, unsigned bits) {
    while (!c.empty() && c.back().norm2() == 0) c.pop_back();
    if (c.size() < 2) return {};
    const std::size_t n = c.size() - 1;
    const Complex lead = c.back();
    for (auto& a : c) a /= lead;
    if (n == 1) return {-c[0]};

    // Cauchy-type radius for the starting circle.
    Real rad = 1;
    for (std::size_t k = 0; k < n; ++k) rad = std::max(rad, Real(1) + c[k].abs());
    std::vector<Complex> z(n);
    const Complex seed(Real("0.4"), Real("0.9"));
    Complex cur(Real(1));
    for (std::size_t k = 0; k < n; ++k) {
        z[k] = cur * rad;
        cur *= seed;
    }
    const Real tol = pow2(-static_cast<long>(bits) / 2);
    for (int iter = 0; iter < 5000; ++iter) {
        Real worst = 0;
        for (std::size_t k = 0; k < n; ++k) {
            Complex num = horner2(c, z[k]).first;
            Complex den(Real(1));
            for (std::size_t j = 0; j < n; ++j)
                if (j != k) den *= (z[k] - z[j]);
            const Complex step = num / den;
            z[k] -= step;
            worst = std::max(worst, step.abs() / std::max(Real(1), z[k].abs()));
        }
        if (worst < tol) break;
    }
    for (auto& r : z) {
        if (auto p = newton_polish(c, r, bits)) r = *p;
    }
    return z;
}

/// Best rational approximation p/q of x with q <= max_den by continued fractions.
inline Rational best_rational(const Real& x, const Integer& max_den) {
    Integer p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    Real r = x;
    for (int it = 0; it < 4000; ++it) {
        Real fl = floor(r);
        Integer a;
        mpfr_get_z(a.get_mpz_t(), fl.backend().data(), MPFR_RNDN);
        Integer p2 = a * p1 + p0, q2 = a * q1 + q0;
        if (q2 > max_den) break;
        p0 = p1; q0 = q1; p1 = p2; q1 = q2;
        Real frac = r - fl;
        if (frac == 0) break;
        r = Real(1) / frac;
    }
    if (q1 == 0) return Rational(p0, q0);
    return Rational(p1, q1);
}

}  // namespace qmhyp
