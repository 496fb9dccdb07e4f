#pragma once

#include <array>
#include <map>
#include <mutex>

#include "qmhyp/closed_form.hpp"
#include "qmhyp/qseries.hpp"
#include "qmhyp/quasimodular.hpp"

namespace qmhyp {

inline constexpr unsigned kDefaultBits = 256;

/// exp(2 pi i z).
inline Complex q_of(const Complex& z) {
    const Real tp = 2 * real_pi();
    return cexp(Complex(-tp * z.im, tp * z.re));
}

/// exp(pi i z), the square root of q used by half-integral series.
inline Complex w_of(const Complex& z) {
    const Real p = real_pi();
    return cexp(Complex(-p * z.im, p * z.re));
}

/// Partial sum of a series whose n-th term is bounded by bound(n), where bound(n+1)/bound(n) is
/// non-increasing once below one. Stops when the geometric tail estimate drops below eps.
struct SumResult {
    Complex value;
    Real tail_bound;
    long terms = 0;
};

template <class Term, class Bound>
SumResult sum_with_tail(Term term, Bound bound, const Real& eps, long max_terms = 1000000) {
    SumResult r;
    for (long n = 1; n <= max_terms; ++n) {
        r.value += term(n);
        r.terms = n;
        const Real b1 = bound(n + 1), b2 = bound(n + 2);
        if (b1 == 0) {
            r.tail_bound = 0;
            return r;
        }
        const Real rho = b2 / b1;
        if (rho < 1) {
            const Real tail = b1 / (1 - rho);
            if (tail < eps) {
                r.tail_bound = tail;
                return r;
            }
        }
    }
    throw PrecisionError("series did not reach the requested tolerance within " + std::to_string(max_terms) +
                         " terms");
}

/// Dedekind eta at z in the upper half plane.
inline Complex eta_numeric(const Complex& z, unsigned bits = kDefaultBits) {
    if (z.im <= 0) throw DomainError("eta needs Im z > 0");
    PrecisionScope ps(bits + 32);
    const Complex q = q_of(z);
    const Real r = q.abs();
    const Real eps = pow2(-static_cast<long>(bits) - 16);
    Complex prod(Real(1)), qn = q;
    Real rn = r;
    for (long n = 1; n < 100000; ++n) {
        prod *= (Complex(Real(1)) - qn);
        // log|prod_{m>n}(1-q^m)| is bounded by 2 r^{n+1}/(1-r)
        if (2 * rn * r / (1 - r) < eps) break;
        qn *= q;
        rn *= r;
    }
    const Real tp = 2 * real_pi() / 24;
    return cexp(Complex(-tp * z.im, tp * z.re)) * prod;
}

/// The period Omega = eta(i)^2.
inline Real omega_numeric(unsigned bits = kDefaultBits) {
    static std::mutex mu;
    static std::map<unsigned, Real> cache;
    std::lock_guard lock(mu);
    if (auto it = cache.find(bits); it != cache.end()) return it->second;
    PrecisionScope ps(bits + 32);
    const Complex e = eta_numeric(Complex(Real(0), Real(1)), bits);
    Real om = e.re * e.re;
    cache.emplace(bits, om);
    return om;
}

inline Complex closedform_numeric(const ClosedForm& cf, unsigned bits = kDefaultBits) {
    PrecisionScope ps(bits + 32);
    return cf.evaluate(omega_numeric(bits), real_pi(), bits + 32);
}

/// Lambert series sum_n c(n) q^n / (1 - q^n) with |c(n)| <= n^growth.
template <class Coef>
Complex lambert_numeric(const Complex& q, Coef c, unsigned growth, unsigned bits) {
    const Real r = q.abs();
    if (r >= 1) throw DomainError("Lambert series needs |q| < 1");
    const Real eps = pow2(-static_cast<long>(bits) - 8);
    auto term = [&](long n) {
        const Complex qn = cpow(q, n);
        return qn / (Complex(Real(1)) - qn) * Real(c(n));
    };
    auto bound = [&](long n) {
        const Real rn = pow(r, n);
        return pow(Real(n), growth) * rn / (1 - rn);
    };
    return sum_with_tail(term, bound, eps).value;
}

/// E_k(z) for even k >= 2 (the holomorphic E_2 for k = 2).
inline Complex eisenstein_numeric(unsigned k, const Complex& z, unsigned bits = kDefaultBits) {
    PrecisionScope ps(bits + 32);
    const Rational f = Rational(-2 * static_cast<long>(k)) / bernoulli(k);
    const Complex s = lambert_numeric(q_of(z), [&](long n) { return pow(Real(n), k - 1); }, k - 1, bits);
    return Complex(Real(1)) + s * to_real(f);
}

/// G(z) = 1 + 4 sum chi(m) q^m / (1 - q^m).
inline Complex g_numeric(const Complex& z, unsigned bits = kDefaultBits) {
    PrecisionScope ps(bits + 32);
    const Complex s = lambert_numeric(q_of(z), [](long n) { return Real(chi4(n)); }, 0, bits);
    return Complex(Real(1)) + s * Real(4);
}

/// H(z) = sum over odd d of d q^d / (1 - q^{2d}).
inline Complex h_numeric(const Complex& z, unsigned bits = kDefaultBits) {
    PrecisionScope ps(bits + 32);
    const Complex q = q_of(z);
    const Real r = q.abs();
    const Real eps = pow2(-static_cast<long>(bits) - 8);
    auto term = [&](long n) {
        const long d = 2 * n - 1;
        const Complex qd = cpow(q, d);
        return qd / (Complex(Real(1)) - qd * qd) * Real(d);
    };
    auto bound = [&](long n) {
        const long d = 2 * n - 1;
        const Real rd = pow(r, d);
        return Real(d) * rd / (1 - rd * rd);
    };
    return sum_with_tail(term, bound, eps).value;
}

/// Numeric generator values (E2, E4, E6) or (E2, G, H) at z; E2 is the holomorphic one.
inline std::array<Complex, 3> generator_values_numeric(int level, const Complex& z, unsigned bits = kDefaultBits) {
    if (level == 1) return {eisenstein_numeric(2, z, bits), eisenstein_numeric(4, z, bits), eisenstein_numeric(6, z, bits)};
    return {eisenstein_numeric(2, z, bits), g_numeric(z, bits), h_numeric(z, bits)};
}

inline Complex qmpoly_numeric(const QMPoly& p, const std::array<Complex, 3>& g, unsigned bits = kDefaultBits) {
    PrecisionScope ps(bits + 32);
    Complex r;
    for (const auto& [e, c] : p.terms())
        r += cpow(g[0], e[0]) * cpow(g[1], e[1]) * cpow(g[2], e[2]) * to_real(c);
    return r;
}

inline Complex qmpoly_numeric_at(const QMPoly& p, const Complex& z, unsigned bits = kDefaultBits) {
    return qmpoly_numeric(p, generator_values_numeric(p.level(), z, bits), bits);
}

/// Non-holomorphic E2*(z) = E2(z) - 3/(pi Im z).
inline Complex e2star_numeric(const Complex& z, unsigned bits = kDefaultBits) {
    PrecisionScope ps(bits + 32);
    return eisenstein_numeric(2, z, bits) - Complex(Real(3) / (real_pi() * z.im));
}

/// Truncated evaluation of a w-series at a given w (no tail estimate).
inline Complex qseries_numeric(const QSeries& f, const Complex& w) {
    Complex r, wk(Real(1));
    for (std::size_t k = 0; k < f.prec(); ++k) {
        if (!f[k].is_zero()) r += wk * to_real(f[k]);
        wk *= w;
    }
    return r;
}

/// Literal summation of a roman series. The argument is w = q^{1/2}, which fixes the branch of the
/// half-integral powers in the odd-index families.
inline SumResult sum_defining_series(Roman fam, unsigned s, unsigned p, const Complex& w, unsigned bits = kDefaultBits) {
    if (s == 0) throw DomainError("roman series need s >= 1");
    const Real r = w.abs();
    if (r >= 1) throw DomainError("series summation needs |q| < 1");
    PrecisionScope ps(bits + 32);
    const int idx = static_cast<int>(fam);
    const bool odd_index = (idx == 3 || idx == 4 || idx == 7 || idx == 8);
    const bool plus_den = (idx == 2 || idx == 4 || idx == 6 || idx == 8);
    const bool alternating = idx >= 5;
    auto base = [&](long n) { return odd_index ? 2 * n - 1 : n; };
    auto num_exp = [&](long n) { return odd_index ? base(n) * static_cast<long>(s) : 2 * n * static_cast<long>(s); };
    auto den_exp = [&](long n) { return odd_index ? 2 * base(n) : 4 * n; };
    auto term = [&](long n) {
        const Complex wd = cpow(w, den_exp(n));
        const Complex den = plus_den ? Complex(Real(1)) + wd : Complex(Real(1)) - wd;
        Complex t = cpow(w, num_exp(n)) / cpow(den, static_cast<long>(s));
        t *= pow(Real(base(n)), p);
        if (alternating && n % 2 == 0) t = -t;
        return t;
    };
    auto bound = [&](long n) {
        return pow(Real(base(n)), p) * pow(r, num_exp(n)) / pow(1 - pow(r, den_exp(n)), s);
    };
    // first-term magnitude sets the relative scale
    const Real scale = bound(1);
    SumResult res = sum_with_tail(term, bound, scale * pow2(-static_cast<long>(bits) - 8));
    return res;
}

/// Direct sum of n^p times the hyperbolic kernel at argument n pi c (or (2n-1) pi c / 2), with
/// alternating signs for the families V..VIII; equals 2^s times the roman series at q = e^{-pi c}.
inline Real hyperbolic_sum(Roman fam, unsigned s, unsigned p, const Real& c, unsigned bits = kDefaultBits) {
    PrecisionScope ps(bits + 32);
    const int idx = static_cast<int>(fam);
    const bool odd_index = (idx == 3 || idx == 4 || idx == 7 || idx == 8);
    const bool sech = (idx == 2 || idx == 4 || idx == 6 || idx == 8);
    const bool alternating = idx >= 5;
    const Real pi = real_pi();
    auto arg = [&](long n) { return odd_index ? Real(2 * n - 1) * pi * c / 2 : Real(n) * pi * c; };
    auto base = [&](long n) { return odd_index ? 2 * n - 1 : n; };
    auto term = [&](long n) {
        const Real x = arg(n);
        Real t = pow(Real(base(n)), p) * pow(sech ? 1 / cosh(x) : 1 / sinh(x), s);
        if (alternating && n % 2 == 0) t = -t;
        return Complex(t);
    };
    auto bound = [&](long n) {
        const Real x = arg(n);
        return pow(Real(base(n)), p) * pow(2 * exp(-x) / (1 - exp(-2 * x)), s);
    };
    const Real eps = abs(term(1).re) * pow2(-static_cast<long>(bits) - 8);
    return sum_with_tail(term, bound, eps).value.re;
}

}  // namespace qmhyp
