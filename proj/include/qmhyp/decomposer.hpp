#pragma once

#include <algorithm>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qmhyp/arith_tables.hpp"
#include "qmhyp/fields.hpp"
#include "qmhyp/qseries.hpp"
#include "qmhyp/quasimodular.hpp"

namespace qmhyp {

/// coeff * (D^deriv X_index)(q^scale), X one of the sixteen families; with twist set the base is
/// X_index tensored with the character modulo 4 before substitution.
struct DecompTerm {
    Rational coeff;
    unsigned deriv = 0;
    Family base = Family::A;
    unsigned index = 0;
    Rational scale{1};
    bool twist = false;
};

/// prefactor * sum of terms.
struct Decomposition {
    Rational prefactor{1};
    std::vector<DecompTerm> terms;
};

inline bool first_class(Family f) {
    switch (f) {
        case Family::G: case Family::J: case Family::N: case Family::P: case Family::R: case Family::T: return false;
        default: return true;
    }
}

/// Rewrites X_s(q) through A_s (first class, s odd) or G_s, N_s (second class, s even).
inline std::vector<DecompTerm> reduce_family(Family f, unsigned s) {
    if (first_class(f) && s % 2 == 0)
        throw DomainError(std::string("family ") + family_char(f) + " reduces only for odd s");
    if (!first_class(f) && s % 2 == 1)
        throw DomainError(std::string("family ") + family_char(f) + " reduces only for even s");
    const Rational p2s = pow(Rational(2), static_cast<long>(s));
    auto A = [&](const Rational& c, const Rational& m) { return DecompTerm{c, 0, Family::A, s, m, false}; };
    auto G = [&](const Rational& c, const Rational& m) { return DecompTerm{c, 0, Family::G, s, m, false}; };
    auto N = [&](const Rational& c, const Rational& m) { return DecompTerm{c, 0, Family::N, s, m, false}; };
    const Rational half(1, 2);
    switch (f) {
        case Family::A: return {A(1, 1)};
        case Family::B: return {A(1, 1), A(-p2s * 2, 2)};
        case Family::C: return {A(1, 1), A(-1, 2)};
        case Family::D: return {A(p2s * 2, 4), A(-(p2s * 2 + 1), 2), A(1, 1)};
        case Family::F: return {A(1, 1), A(-p2s, 2)};
        case Family::H: return {A(p2s, 2), A(-(p2s + 1), 1), A(1, half)};
        case Family::L: return {A(1, 1), A(-2, 2)};
        case Family::M: return {A(p2s * 4, 4), A(-(p2s * 2 + 2), 2), A(1, 1)};
        case Family::Q: return {A(p2s * 2, 4), A(-(p2s + 2), 2), A(1, 1)};
        case Family::U: return {DecompTerm{1, 0, Family::A, s, half, true}};
        case Family::G: return {G(1, 1)};
        case Family::N: return {N(1, 1)};
        case Family::J: return {G(1, half), G(-1, 1)};
        case Family::P: return {N(1, 1), N(-p2s * 2, 2)};
        case Family::R: return {G(1, 1), G(-2, 2)};
        case Family::T: return {N(1, half), N(-p2s, 1)};
    }
    throw DomainError("bad family");
}

/// Whether (family, s, p) is one of the sixteen proven parity cases.
inline bool roman_admissible(Roman fam, unsigned s, unsigned p) {
    const bool se = s % 2 == 0, pe = p % 2 == 0;
    switch (fam) {
        case Roman::I: case Roman::III: case Roman::V: return se == pe;
        case Roman::II: case Roman::IV: case Roman::VI: return pe;
        case Roman::VII: return se != pe;
        case Roman::VIII: return !pe;
    }
    return false;
}

/// Expresses a roman series through derivatives of the sixteen families with central factorial
/// coefficients. Throws NotCoveredError outside the proven parity cases.
inline Decomposition decompose_roman(Roman fam, unsigned S, unsigned P) {
    if (S == 0) throw DomainError("roman series need s >= 1");
    if (!roman_admissible(fam, S, P))
        throw NotCoveredError(roman_name(fam) + "_" + std::to_string(S) + "^" + std::to_string(P) +
                              ": parity combination not covered by Theorem 3.2");
    Decomposition d;
    // terms are generated lowest r first; the display order lists the highest r first
    auto highest_first = [](Decomposition& x) {
        std::reverse(x.terms.begin(), x.terms.end());
        return x;
    };
    const bool signed_case = fam == Roman::II || fam == Roman::IV || fam == Roman::VI || fam == Roman::VIII;
    auto add = [&](const Rational& c, unsigned j, Family X, long idx, long m) {
        if (c.is_zero()) return;
        d.terms.push_back({c, j, X, static_cast<unsigned>(idx), Rational(m), false});
    };
    if (S % 2 == 0) {
        const long s = S / 2;
        d.prefactor = Rational(1) / Rational(factorial(static_cast<unsigned long>(2 * s - 1)));
        if (signed_case && (s - 1) % 2) d.prefactor = -d.prefactor;
        if (P % 2 == 0) {
            const long p = P / 2;
            Family X1 = Family::A, X2 = Family::A;
            long m = 2;
            switch (fam) {
                case Roman::I: X1 = Family::A; X2 = Family::A; break;
                case Roman::II: X1 = Family::L; X2 = Family::B; break;
                case Roman::III: X1 = Family::F; X2 = Family::C; m = 1; break;
                case Roman::IV: X1 = Family::Q; X2 = Family::D; m = 1; break;
                case Roman::V: X1 = Family::B; X2 = Family::L; break;
                case Roman::VI: X1 = Family::M; X2 = Family::M; break;
                default: break;
            }
            for (long r = 1; r <= std::min(p, s); ++r)
                add(central_factorial(2 * s, 2 * r), static_cast<unsigned>(2 * r - 1), X1, 2 * p - 2 * r + 1, m);
            for (long r = p + 1; r <= s; ++r)
                add(central_factorial(2 * s, 2 * r), static_cast<unsigned>(2 * p), X2, 2 * r - 2 * p - 1, m);
        } else {
            const long p = (P - 1) / 2;
            const Family X1 = fam == Roman::VII ? Family::G : Family::R;
            const Family X2 = fam == Roman::VII ? Family::N : Family::P;
            for (long r = 1; r <= std::min(p, s); ++r)
                add(central_factorial(2 * s, 2 * r), static_cast<unsigned>(2 * r - 1), X1, 2 * p - 2 * r + 2, 1);
            for (long r = p + 1; r <= s; ++r)
                add(central_factorial(2 * s, 2 * r), static_cast<unsigned>(2 * p + 1), X2, 2 * r - 2 * p - 2, 1);
        }
        return highest_first(d);
    }
    const long s = (S - 1) / 2;
    d.prefactor = Rational(1) / Rational(factorial(static_cast<unsigned long>(2 * s)));
    if (signed_case && s % 2) d.prefactor = -d.prefactor;
    const Rational quarter(1, 4);
    if (P % 2 == 1) {
        const long p = (P - 1) / 2;
        Family X1 = Family::C, X2 = Family::F;
        bool power_of_four = true;  // first/second sums weighted by 4^{-r}; otherwise 1 and 2^{2p+1-2r}
        switch (fam) {
            case Roman::I: X1 = Family::C; X2 = Family::F; break;
            case Roman::V: X1 = Family::D; X2 = Family::Q; break;
            case Roman::III: X1 = Family::H; X2 = Family::H; power_of_four = false; break;
            case Roman::VIII: X1 = Family::U; X2 = Family::U; power_of_four = false; break;
            default: break;
        }
        for (long r = 0; r <= std::min(p, s); ++r) {
            const Rational t = central_factorial(2 * s + 1, 2 * r + 1);
            add(power_of_four ? t * pow(quarter, r) : t, static_cast<unsigned>(2 * r), X1, 2 * p - 2 * r + 1, 1);
        }
        for (long r = p + 1; r <= s; ++r) {
            const Rational t = central_factorial(2 * s + 1, 2 * r + 1);
            const Rational w = power_of_four ? pow(quarter, r) : pow(Rational(2), 2 * p + 1 - 2 * r);
            add(t * w, static_cast<unsigned>(2 * p + 1), X2, 2 * r - 2 * p - 1, 1);
        }
        return highest_first(d);
    }
    const long p = P / 2;
    Family X1 = Family::N, X2 = Family::G;
    bool power_of_four = true;  // otherwise 1 and 2^{2p-2r}
    switch (fam) {
        case Roman::II: X1 = Family::N; X2 = Family::G; break;
        case Roman::VI: X1 = Family::P; X2 = Family::R; break;
        case Roman::IV: X1 = Family::T; X2 = Family::J; power_of_four = false; break;
        case Roman::VII: X1 = Family::J; X2 = Family::T; power_of_four = false; break;
        default: break;
    }
    for (long r = 0; r <= std::min(p - 1, s); ++r) {
        const Rational t = central_factorial(2 * s + 1, 2 * r + 1);
        add(power_of_four ? t * pow(quarter, r) : t, static_cast<unsigned>(2 * r), X1, 2 * p - 2 * r, 1);
    }
    for (long r = p; r <= s; ++r) {
        const Rational t = central_factorial(2 * s + 1, 2 * r + 1);
        const Rational w = power_of_four ? pow(quarter, r) : pow(Rational(2), 2 * p - 2 * r);
        add(t * w, static_cast<unsigned>(2 * p), X2, 2 * r - 2 * p, 1);
    }
    return highest_first(d);
}

/// Replaces every family by its reduction; bases become A (possibly twisted), G and N.
/// (D^j X)(q^m) with X = sum a_i Y(q^{m_i}) becomes sum a_i m_i^j (D^j Y)(q^{m_i m}).
inline Decomposition reduce_decomposition(const Decomposition& d) {
    Decomposition out;
    out.prefactor = d.prefactor;
    for (const auto& t : d.terms) {
        if (t.twist || t.base == Family::A || t.base == Family::G || t.base == Family::N) {
            out.terms.push_back(t);
            continue;
        }
        for (const auto& r : reduce_family(t.base, t.index)) {
            DecompTerm n = r;
            n.coeff = t.coeff * r.coeff * pow(r.scale, static_cast<long>(t.deriv));
            n.deriv = t.deriv;
            n.scale = r.scale * t.scale;
            out.terms.push_back(n);
        }
    }
    return out;
}

/// q-series of one term at w-precision prec.
inline QSeries term_to_qseries(const DecompTerm& t, std::size_t prec) {
    const Integer num = t.scale.num(), den = t.scale.den();
    const std::size_t src = (prec * den.get_ui() + num.get_ui() - 1) / num.get_ui() + 1;
    QSeries base = family_qexpansion(t.base, t.index, src);
    if (t.twist) base = twist_chi4(base);
    QSeries r = apply_Vm(apply_D(base, t.deriv), t.scale).truncated(prec);
    return r * (t.coeff);
}

inline QSeries decomposition_to_qseries(const Decomposition& d, std::size_t prec = kDefaultPrec) {
    QSeries r(prec);
    for (const auto& t : d.terms) r += term_to_qseries(t, prec);
    return r * d.prefactor;
}

inline std::string term_str(const DecompTerm& t) {
    std::string s;
    if (t.deriv == 1) s += "D";
    else if (t.deriv > 1) s += "D^" + std::to_string(t.deriv);
    std::string base = std::string(1, family_char(t.base)) + "_" + std::to_string(t.index);
    if (t.twist) base = "(" + base + " x chi)";
    s += base;
    if (t.scale == Rational(1)) s += "(q)";
    else s += "(q^" + (t.scale.is_integer() ? t.scale.pretty() : "(" + t.scale.pretty() + ")") + ")";
    return s;
}

inline std::string decomposition_str(const Decomposition& d) {
    if (d.terms.empty()) return "0";
    std::string body;
    for (const auto& t : d.terms) {
        const bool neg = t.coeff.sign() < 0;
        const Rational m = neg ? -t.coeff : t.coeff;
        std::string piece = (m == Rational(1) ? "" : m.pretty() + "*") + term_str(t);
        if (body.empty()) body = neg ? "-" + piece : piece;
        else body += (neg ? " - " : " + ") + piece;
    }
    if (d.prefactor == Rational(1)) return body;
    return d.prefactor.pretty() + " * (" + body + ")";
}

/// coeff * scale^deriv * (D^deriv poly)(scale*z + shift), plus coeff * constant when deriv = 0.
struct QMTerm {
    FieldElement coeff;
    unsigned deriv = 0;
    QMPoly poly;
    Rational scale{1};
    Rational shift{0};
    Rational constant;
};

struct QMDecomposition {
    std::vector<QMTerm> terms;
};

/// Eisenstein-type representation Y = lambda * E + c of a base series.
struct EisensteinForm {
    QMPoly poly;        // lambda * E as a ring polynomial
    Rational constant;  // c
};

/// A_w (w odd) through E_{w+1}; G_w and N_w (w even) through the character Eisenstein series of
/// weight w+1, both written in the level-4 generators.
inline EisensteinForm eisenstein_form(Family base, unsigned w) {
    static std::mutex mu;
    static std::map<std::pair<int, unsigned>, EisensteinForm> cache;
    std::lock_guard lock(mu);
    const auto key = std::make_pair(static_cast<int>(base), w);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
    EisensteinForm ef;
    if (base == Family::A) {
        if (w % 2 == 0) throw DomainError("A_w has an Eisenstein form only for odd w");
        const unsigned k = w + 1;
        const Rational lambda = -bernoulli(k) / Rational(2 * static_cast<long>(k));
        const QMPoly E = k == 2 ? QMPoly::E2(1) : ramanujan_E(k);
        ef = {E * lambda, -lambda};
    } else if (base == Family::G || base == Family::N) {
        if (w % 2 == 1) throw DomainError("G_w, N_w have Eisenstein forms only for even w");
        const unsigned k = w + 1;
        const std::size_t prec = 2 * (static_cast<std::size_t>(k) + 12);
        const QSeries e = eisenstein_chi_qexp(base == Family::G ? ChiKind::OneChi : ChiKind::ChiOne, k, prec);
        ef = {express_in_generators(e, static_cast<int>(k), 4), -e[0]};
    } else {
        throw DomainError("no Eisenstein form for this base");
    }
    cache.emplace(key, ef);
    return ef;
}

/// Lowers a decomposition to polynomials in the quasimodular generators. Twisted terms turn into
/// pairs shifted by +-1/4 with coefficients +-1/(2i), which requires `i` in the given field.
inline QMDecomposition decomposition_to_qm(const Decomposition& d, const Field& field = gaussian_field()) {
    const Decomposition red = reduce_decomposition(d);
    QMDecomposition out;
    for (const auto& t : red.terms) {
        const EisensteinForm ef = eisenstein_form(t.base, t.index);
        // value = c * (D^j Y)(M z) = c M^{-j} * M^j (D^j Y)(M z)
        const Rational c = red.prefactor * t.coeff * pow(t.scale, -static_cast<long>(t.deriv));
        if (c.is_zero()) continue;
        const QMPoly& P = ef.poly;
        const Rational constant = t.deriv == 0 ? ef.constant : Rational(0);
        if (!t.twist) {
            out.terms.push_back({FieldElement(c), t.deriv, P, t.scale, Rational(0), constant});
            continue;
        }
        const FieldElement half_inv_i = FieldElement::named(field, "i").inverse() * FieldElement(Rational(1, 2));
        out.terms.push_back({half_inv_i * FieldElement(c), t.deriv, P, t.scale, Rational(1, 4), constant});
        out.terms.push_back({-half_inv_i * FieldElement(c), t.deriv, P, t.scale, Rational(-1, 4), constant});
    }
    return out;
}

/// q-series of a quasimodular decomposition; shifts by s act on q^n as exp(2 pi i n s).
inline QSeries qm_decomposition_to_qseries(const QMDecomposition& d, std::size_t prec = kDefaultPrec,
                                           const Field& field = gaussian_field()) {
    Series<FieldElement> acc(prec);
    for (const auto& t : d.terms) {
        const Integer num = t.scale.num(), den = t.scale.den();
        const std::size_t src = (prec * den.get_ui() + num.get_ui() - 1) / num.get_ui() + 1;
        QSeries base = apply_D(qm_to_qseries(t.poly, src), t.deriv);
        base[0] += t.constant;
        Series<FieldElement> sh = convert<FieldElement>(base);
        if (!t.shift.is_zero()) {
            const Rational four_s = t.shift * Rational(4);
            if (!four_s.is_integer()) throw DomainError("shifts must be multiples of 1/4");
            const long k = four_s.num().get_si();
            const FieldElement i = FieldElement::named(field, "i");
            for (std::size_t e = 0; e < sh.prec(); e += 2) {
                const long n = static_cast<long>(e / 2);
                sh[e] = sh[e] * pow(i, ((k * n) % 4 + 4) % 4);
            }
        }
        Series<FieldElement> v = apply_Vm(sh, t.scale).truncated(prec);
        acc += v * (t.coeff * FieldElement(pow(t.scale, static_cast<long>(t.deriv))));
    }
    return to_rational(acc);
}

}  // namespace qmhyp
