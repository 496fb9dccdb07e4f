#pragma once

#include <cmath>
#include <string>
#include <tuple>
#include <vector>

#include "qmhyp/fields.hpp"
#include "qmhyp/numeric.hpp"

namespace qmhyp {

enum class LucasKind { U, V };

inline LucasKind parse_lucas_kind(const std::string& s) {
    if (s == "U") return LucasKind::U;
    if (s == "V") return LucasKind::V;
    throw DomainError("sequence kind must be U or V, got '" + s + "'");
}

/// alpha, beta in a real quadratic field with alpha * beta = sign and 0 < |beta| < 1.
struct LucasParams {
    std::string name;
    FieldElement alpha, beta;
    int sign = -1;

    void validate() const {
        if (!(alpha * beta == FieldElement(sign))) throw DomainError("alpha * beta must equal " + std::to_string(sign));
        PrecisionScope ps(96);
        const Real b = abs(beta.embed(64).re);
        if (!(b > 0 && b < 1)) throw DomainError("need 0 < |beta| < 1");
    }
};

/// Golden ratio parameters: U_n are the Fibonacci numbers, V_n the Lucas numbers.
inline LucasParams fibonacci_params() {
    const Field K = quadratic_field(5);
    const FieldElement r5 = FieldElement::named(K, "sqrt5");
    LucasParams p{"fibonacci", (FieldElement(1) + r5) * FieldElement(Rational(1, 2)),
                  (FieldElement(1) - r5) * FieldElement(Rational(1, 2)), -1};
    p.validate();
    return p;
}

/// alpha = 1 + sqrt 2, beta = sqrt 2 - 1, with alpha * beta = 1.
inline LucasParams silver_params() {
    const Field K = quadratic_field(2);
    const FieldElement r2 = FieldElement::named(K, "sqrt2");
    LucasParams p{"silver", FieldElement(1) + r2, r2 - FieldElement(1), 1};
    p.validate();
    return p;
}

inline LucasParams lucas_params_by_name(const std::string& name) {
    if (name == "fibonacci") return fibonacci_params();
    if (name == "silver") return silver_params();
    throw DomainError("unknown parameter set '" + name + "' (expected fibonacci or silver)");
}

/// U_n = (alpha^n - beta^n)/(alpha - beta) or V_n = alpha^n + beta^n, exactly.
inline FieldElement lucas_terms(const LucasParams& lp, LucasKind kind, long n) {
    if (n < 1) throw DomainError("sequence index must be >= 1");
    const FieldElement an = pow(lp.alpha, n), bn = pow(lp.beta, n);
    return kind == LucasKind::U ? (an - bn) / (lp.alpha - lp.beta) : an + bn;
}

struct ZetaValue {
    Real value;
    Real tail_bound;
    long terms = 0;
};

/// Sum over n >= 1 of n^p / X_n^s with X = U or V, with a geometric tail bound below eps.
inline ZetaValue zeta_direct(const LucasParams& lp, LucasKind kind, unsigned p, unsigned s, const Real& eps,
                             unsigned bits = kDefaultBits) {
    if (s < 1) throw DomainError("s must be >= 1");
    PrecisionScope ps(bits + 32);
    const Real a = lp.alpha.embed(bits + 32).re, b = lp.beta.embed(bits + 32).re;
    const Real diff = a - b;
    const Real aa = abs(a), bb = abs(b);
    auto x_n = [&](long n) {
        const Real an = pow(a, n), bn = pow(b, n);
        return kind == LucasKind::U ? (an - bn) / diff : an + bn;
    };
    auto term = [&](long n) { return Complex(pow(Real(n), p) / pow(x_n(n), s)); };
    // |X_n| >= (|alpha|^n - |beta|^n) / c with c = |alpha - beta| for U and 1 for V
    const Real c = kind == LucasKind::U ? abs(diff) : Real(1);
    auto bound = [&](long n) {
        const Real low = (pow(aa, n) - pow(bb, n)) / c;
        return low > 0 ? pow(Real(n), p) / pow(low, s) : Real(1);
    };
    const SumResult r = sum_with_tail(term, bound, eps);
    return {r.value.re, r.tail_bound, r.terms};
}

struct LemmaValue {
    Real lemma;
    Real direct;
    Real residual;  // |lemma - direct|
};

/// The same zeta value through the roman series at q = beta^2 (alpha beta = -1) or q = beta
/// (alpha beta = 1), each summed literally, compared with direct summation.
inline LemmaValue zeta_via_lemma(const LucasParams& lp, LucasKind kind, unsigned p, unsigned s, const Real& eps,
                                 unsigned bits = kDefaultBits) {
    if (s < 1) throw DomainError("s must be >= 1");
    PrecisionScope ps(bits + 32);
    const Real a = lp.alpha.embed(bits + 32).re, b = lp.beta.embed(bits + 32).re;
    auto roman = [&](Roman f, const Complex& w) { return sum_defining_series(f, s, p, w, bits).value.re; };
    const Real sgn_s = s % 2 ? Real(-1) : Real(1);
    const Real two_p = pow(Real(2), p);
    Real lemma;
    if (lp.sign == -1) {
        const Complex w(b);  // q = beta^2 with the signed square root beta
        if (kind == LucasKind::U) lemma = pow(a - b, s) * (two_p * roman(Roman::I, w) + sgn_s * roman(Roman::IV, w));
        else lemma = two_p * roman(Roman::II, w) + sgn_s * roman(Roman::III, w);
    } else {
        const Complex w = csqrt(Complex(b));
        if (kind == LucasKind::U) lemma = pow(a - b, s) * roman(Roman::I, w);
        else lemma = roman(Roman::II, w);
    }
    const ZetaValue d = zeta_direct(lp, kind, p, s, eps, bits);
    return {lemma, d.value, abs(lemma - d.value)};
}

using Triple = std::tuple<int, int, int>;

struct IndepScanReport {
    int s_max = 0;
    std::vector<Triple> first_family;   // vanishing triples with s1 = 1
    std::vector<Triple> second_family;  // vanishing triples with 1 < s1
    long checked = 0;
    long exact_rechecks = 0;
};

namespace detail {

/// 1 / ((-1)^e B_{2s-2}) exactly, cached.
inline const Rational& signed_bernoulli_inverse(int s, int e) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, Rational> cache;
    std::lock_guard lock(mu);
    auto key = std::make_pair(s, e & 1);
    auto it = cache.find(key);
    if (it == cache.end()) {
        Rational b = bernoulli(static_cast<unsigned>(2 * s - 2));
        if (e & 1) b = -b;
        it = cache.emplace(key, Rational(1) / b).first;
    }
    return it->second;
}

inline long double to_ld(const Rational& q) {
    // mpq -> long double through exponent-split mantissas, safe far outside the double range
    long en = 0, ed = 0;
    const double mn = mpz_get_d_2exp(&en, q.num().get_mpz_t());
    const double md = mpz_get_d_2exp(&ed, q.den().get_mpz_t());
    return std::ldexp(static_cast<long double>(mn) / static_cast<long double>(md), static_cast<int>(en - ed));
}

}  // namespace detail

/// Scans the two inequality families for vanishing triples with s3 < s_max. A long double filter
/// with a generous relative threshold selects candidates; every candidate is decided in exact
/// rationals, so a true zero can never be missed.
inline IndepScanReport indep_scan(int s_max) {
    if (s_max < 8) throw DomainError("s_max must be >= 8");
    IndepScanReport rep;
    rep.s_max = s_max;
    std::vector<long double> x1(static_cast<std::size_t>(s_max) + 1), x2(x1.size());
    for (int s = 2; s <= s_max; ++s) {
        x1[static_cast<std::size_t>(s)] = detail::to_ld(detail::signed_bernoulli_inverse(s, s - 1));
        x2[static_cast<std::size_t>(s)] = detail::to_ld(detail::signed_bernoulli_inverse(s, s));
    }
    const long double thresh = 1e-9L;
    // first family: 8(s3-s2) + (2s2-2)(3-s3)/((-1)^{s2-1}B_{2s2-2}) + (2s3-2)(s2-3)/((-1)^{s3-1}B_{2s3-2})
    for (int s2 = 2; s2 < s_max; ++s2)
        for (int s3 = s2 + 1; s3 < s_max; ++s3) {
            ++rep.checked;
            const long double t0 = 8.0L * (s3 - s2);
            const long double t1 = static_cast<long double>((2 * s2 - 2) * (3 - s3)) * x1[static_cast<std::size_t>(s2)];
            const long double t2 = static_cast<long double>((2 * s3 - 2) * (s2 - 3)) * x1[static_cast<std::size_t>(s3)];
            const long double mag = std::max({std::fabs(t0), std::fabs(t1), std::fabs(t2)});
            if (std::fabs(t0 + t1 + t2) > thresh * mag) continue;
            ++rep.exact_rechecks;
            const Rational v = Rational(8L * (s3 - s2)) +
                               Rational(static_cast<long>((2 * s2 - 2) * (3 - s3))) * detail::signed_bernoulli_inverse(s2, s2 - 1) +
                               Rational(static_cast<long>((2 * s3 - 2) * (s2 - 3))) * detail::signed_bernoulli_inverse(s3, s3 - 1);
            if (v.is_zero()) rep.first_family.emplace_back(1, s2, s3);
        }
    // second family: sum over cyclic (s3-s2)(s1-1)/((-1)^{s1}B_{2s1-2})
    for (int s1 = 2; s1 < s_max; ++s1)
        for (int s2 = s1 + 1; s2 < s_max; ++s2)
            for (int s3 = s2 + 1; s3 < s_max; ++s3) {
                ++rep.checked;
                const long double t1 = static_cast<long double>((s3 - s2) * (s1 - 1)) * x2[static_cast<std::size_t>(s1)];
                const long double t2 = static_cast<long double>((s1 - s3) * (s2 - 1)) * x2[static_cast<std::size_t>(s2)];
                const long double t3 = static_cast<long double>((s2 - s1) * (s3 - 1)) * x2[static_cast<std::size_t>(s3)];
                const long double mag = std::max({std::fabs(t1), std::fabs(t2), std::fabs(t3)});
                if (std::fabs(t1 + t2 + t3) > thresh * mag) continue;
                ++rep.exact_rechecks;
                const Rational v = Rational(static_cast<long>((s3 - s2) * (s1 - 1))) * detail::signed_bernoulli_inverse(s1, s1) +
                                   Rational(static_cast<long>((s1 - s3) * (s2 - 1))) * detail::signed_bernoulli_inverse(s2, s2) +
                                   Rational(static_cast<long>((s2 - s1) * (s3 - 1))) * detail::signed_bernoulli_inverse(s3, s3);
                if (v.is_zero()) rep.second_family.emplace_back(s1, s2, s3);
            }
    return rep;
}

/// f_s = 4^{s-1}E_{2s-2}(4z) - (4^{s-1} + 1 + (-1)^s)E_{2s-2}(2z) + E_{2s-2}(z) as a q-series.
inline QSeries f_lucas_series(unsigned s, std::size_t prec) {
    const unsigned k = 2 * s - 2;
    const QSeries e = eisenstein_qexp(k, prec);
    const Rational c4 = pow(Rational(4), static_cast<long>(s) - 1);
    const Rational mid = c4 + Rational(1) + Rational(s % 2 ? -1 : 1);
    return apply_Vm(e, 4L) * c4 - apply_Vm(e, 2L) * mid + e;
}

/// First n q-coefficients of f_4^2 f_6^{-4} f_8^2.
inline std::vector<Rational> f468_check(std::size_t n) {
    if (n < 3) throw DomainError("need at least three coefficients");
    const std::size_t prec = 2 * n;
    const QSeries f4 = f_lucas_series(4, prec), f6 = f_lucas_series(6, prec), f8 = f_lucas_series(8, prec);
    const QSeries r = pow(f4, 2) * pow(invert(f6), 4) * pow(f8, 2);
    std::vector<Rational> out;
    for (std::size_t k = 0; k < n; ++k) out.push_back(r.q_coeff(k));
    return out;
}

}  // namespace qmhyp
