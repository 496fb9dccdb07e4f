#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qmhyp/arith_tables.hpp"
#include "qmhyp/series.hpp"

namespace qmhyp {

inline constexpr std::size_t kDefaultPrec = 64;

enum class Family { A, B, C, D, F, G, H, J, L, M, N, P, Q, R, T, U };

inline constexpr Family kAllFamilies[] = {Family::A, Family::B, Family::C, Family::D, Family::F, Family::G,
                                          Family::H, Family::J, Family::L, Family::M, Family::N, Family::P,
                                          Family::Q, Family::R, Family::T, Family::U};

inline char family_char(Family f) { return "ABCDFGHJLMNPQRTU"[static_cast<int>(f)]; }

inline Family parse_family(const std::string& s) {
    const std::string names = "ABCDFGHJLMNPQRTU";
    if (s.size() == 1) {
        const auto pos = names.find(s[0]);
        if (pos != std::string::npos) return static_cast<Family>(pos);
    }
    throw DomainError("unknown series family '" + s + "'");
}

enum class Roman { I = 1, II, III, IV, V, VI, VII, VIII };

inline constexpr Roman kAllRoman[] = {Roman::I, Roman::II, Roman::III, Roman::IV,
                                      Roman::V, Roman::VI, Roman::VII, Roman::VIII};

inline std::string roman_name(Roman r) {
    static const char* names[] = {"", "I", "II", "III", "IV", "V", "VI", "VII", "VIII"};
    return names[static_cast<int>(r)];
}

inline Roman parse_roman(const std::string& s) {
    for (Roman r : kAllRoman)
        if (roman_name(r) == s || std::to_string(static_cast<int>(r)) == s) return r;
    throw DomainError("unknown roman family '" + s + "'");
}

namespace detail {

/// Shape of a sum  sum_n sign(n) base(n)^s w^{a(n)} / (1 - eps w^{b(n)}).
struct LambertShape {
    bool odd_index;   // base(n) = 2n-1 instead of n
    bool alternating; // sign(n) = (-1)^{n-1}
    int a_mult;       // a(n) = a_mult * base(n)
    int b_mult;       // b(n) = b_mult * base(n)
    int eps;          // +1 for 1 - w^b, -1 for 1 + w^b
};

inline LambertShape family_shape(Family f) {
    switch (f) {
        case Family::A: return {false, false, 2, 2, 1};
        case Family::B: return {false, true, 2, 2, 1};
        case Family::C: return {false, false, 2, 4, 1};
        case Family::D: return {false, true, 2, 4, 1};
        case Family::F: return {true, false, 2, 2, 1};
        case Family::G: return {true, true, 2, 2, 1};
        case Family::H: return {true, false, 1, 2, 1};
        case Family::J: return {true, true, 1, 2, 1};
        case Family::L: return {false, false, 2, 2, -1};
        case Family::M: return {false, true, 2, 2, -1};
        case Family::N: return {false, false, 2, 4, -1};
        case Family::P: return {false, true, 2, 4, -1};
        case Family::Q: return {true, false, 2, 2, -1};
        case Family::R: return {true, true, 2, 2, -1};
        case Family::T: return {true, false, 1, 2, -1};
        case Family::U: return {true, true, 1, 2, -1};
    }
    throw DomainError("bad family");
}

}  // namespace detail

/// q-expansion of one of the sixteen Lambert-type families, from its defining double sum.
/// D_s is sum (-1)^{n-1} n^s q^n / (1 - q^{2n}).
inline QSeries family_qexpansion(Family f, unsigned s, std::size_t prec = kDefaultPrec) {
    const auto sh = detail::family_shape(f);
    QSeries r(prec);
    for (long n = 1;; ++n) {
        const long base = sh.odd_index ? 2 * n - 1 : n;
        const std::size_t a = static_cast<std::size_t>(sh.a_mult * base);
        if (a >= prec) break;
        const std::size_t b = static_cast<std::size_t>(sh.b_mult * base);
        Rational c(ipow(Integer(base), s));
        if (sh.alternating && n % 2 == 0) c = -c;
        for (std::size_t e = a, k = 0; e < prec; e += b, ++k) r[e] += (sh.eps < 0 && k % 2 == 1) ? -c : c;
    }
    return r;
}

/// Direct expansion of the eight families I..VIII through the binomial series of (1 -+ x)^{-s}.
inline QSeries roman_qexpansion(Roman fam, unsigned s, unsigned p, std::size_t prec = kDefaultPrec) {
    if (s == 0) throw DomainError("roman series need s >= 1");
    const int idx = static_cast<int>(fam);
    const bool odd_index = (idx == 3 || idx == 4 || idx == 7 || idx == 8);
    const bool plus_den = (idx == 2 || idx == 4 || idx == 6 || idx == 8);
    const bool alternating = idx >= 5;
    QSeries r(prec);
    for (long n = 1;; ++n) {
        const long base = odd_index ? 2 * n - 1 : n;
        // numerator w-exponent and denominator step, in w units
        const std::size_t a = static_cast<std::size_t>(odd_index ? base * s : 2 * base * s);
        if (a >= prec) break;
        const std::size_t b = static_cast<std::size_t>(odd_index ? 2 * base : 4 * base);
        Rational c(ipow(Integer(base), p));
        if (alternating && n % 2 == 0) c = -c;
        for (std::size_t e = a, k = 0; e < prec; e += b, ++k) {
            Rational t = c * Rational(binomial(s + k - 1, k));
            if (plus_den && k % 2 == 1) t = -t;
            r[e] += t;
        }
    }
    return r;
}

/// E_k for even k >= 2, normalized with constant term 1.
inline QSeries eisenstein_qexp(unsigned k, std::size_t prec = kDefaultPrec) {
    if (k < 2 || k % 2) throw DomainError("Eisenstein series E_k needs even k >= 2");
    const Rational f = Rational(-2 * static_cast<long>(k)) / bernoulli(k);
    QSeries r = QSeries::constant(1, prec);
    for (std::size_t e = 2; e < prec; e += 2) r[e] = f * Rational(divisor_sigma(k - 1, static_cast<long>(e / 2)));
    return r;
}

enum class ChiKind { OneChi, ChiOne };  // E_k^{1,chi} and E_k^{chi,1}

/// Eisenstein series of odd weight k attached to the character modulo 4.
inline QSeries eisenstein_chi_qexp(ChiKind kind, unsigned k, std::size_t prec = kDefaultPrec) {
    if (k % 2 == 0) throw DomainError("character Eisenstein series need odd k");
    Rational c0;
    if (k == 1) c0 = Rational(1, 4);
    else if (kind == ChiKind::OneChi) c0 = -gen_bernoulli_chi4(k) / Rational(2 * static_cast<long>(k));
    QSeries r = QSeries::constant(c0, prec);
    const Character psi = kind == ChiKind::OneChi ? Character::Trivial : Character::Chi4;
    const Character phi = kind == ChiKind::OneChi ? Character::Chi4 : Character::Trivial;
    for (std::size_t e = 2; e < prec; e += 2)
        r[e] = Rational(divisor_sigma(k - 1, static_cast<long>(e / 2), psi, phi));
    return r;
}

/// Weight-one generator 4 E_1^{1,chi} = 1 + 4q + 4q^2 + 4q^4 + 8q^5 + ...
inline QSeries g_qexp(std::size_t prec = kDefaultPrec) {
    return eisenstein_chi_qexp(ChiKind::OneChi, 1, prec) * Rational(4);
}

/// Weight-two generator sum sigma_1(n) q^n over odd n.
inline QSeries h_qexp(std::size_t prec = kDefaultPrec) {
    QSeries r(prec);
    for (std::size_t e = 2; e < prec; e += 4) r[e] = Rational(divisor_sigma(1, static_cast<long>(e / 2)));
    return r;
}

/// Product of eta(m z)^e over its factors.
struct EtaQuotient {
    std::vector<std::pair<long, long>> factors;  // (m, e)

    [[nodiscard]] Rational leading_exponent() const {
        Rational s;
        for (auto [m, e] : factors) s += Rational(m * e, 24);
        return s;
    }
};

/// prod_{n>=1} (1 - q^n) via the pentagonal number theorem.
inline QSeries euler_product(std::size_t prec) {
    QSeries r(prec);
    for (long k = 0;; ++k) {
        bool any = false;
        for (long sgn : {1L, -1L}) {
            if (k == 0 && sgn < 0) continue;
            const long kk = sgn * k;
            const std::size_t e = static_cast<std::size_t>(kk * (3 * kk - 1));  // 2 * pentagonal number, in w
            if (e < prec) {
                r[e] += (k % 2 == 0) ? Rational(1) : Rational(-1);
                any = true;
            }
        }
        if (!any) break;
    }
    return r;
}

inline QSeries eta_to_qseries(const EtaQuotient& q, std::size_t prec = kDefaultPrec) {
    const Rational lead = q.leading_exponent() * Rational(2);
    if (!lead.is_integer() || lead.sign() < 0)
        throw DomainError("eta quotient leading exponent " + (lead / Rational(2)).pretty() +
                          " is not a non-negative half-integer");
    const std::size_t shift = lead.num().get_ui();
    if (shift >= prec) return QSeries(prec);
    const std::size_t inner = prec - shift;
    QSeries prod = QSeries::constant(1, inner);
    for (auto [m, e] : q.factors) {
        if (m <= 0) throw DomainError("eta quotient argument multiplier must be positive");
        QSeries base = apply_Vm(euler_product(inner), m).truncated(inner);
        QSeries pw = pow(base, static_cast<unsigned>(e < 0 ? -e : e));
        prod *= (e < 0 ? invert(pw) : pw);
    }
    QSeries r(prec);
    for (std::size_t k = 0; k < inner; ++k) r[k + shift] = prod[k];
    return r;
}

}  // namespace qmhyp
