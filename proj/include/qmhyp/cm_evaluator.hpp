#pragma once

#include <string>
#include <vector>

#include "qmhyp/cm_data.hpp"
#include "qmhyp/decomposer.hpp"

namespace qmhyp {

/// How the E2 generator is substituted: the holomorphic E2 (through E2* + 3/(pi y)) or E2* itself.
enum class E2Mode { Full, Star };

/// Evaluates a polynomial in the generators (E2, E4, E6) or (E2, G, H) at a registry point.
inline ClosedForm eval_qm_poly_at(const QMPoly& P, const CMPoint& point, int level, E2Mode mode = E2Mode::Full) {
    if (P.level() != level) throw DomainError("polynomial level " + std::to_string(P.level()) + " differs from " + std::to_string(level));
    std::array<int, 3> maxe{0, 0, 0};
    for (const auto& [e, c] : P.terms())
        for (int k = 0; k < 3; ++k) maxe[static_cast<std::size_t>(k)] = std::max(maxe[static_cast<std::size_t>(k)], e[static_cast<std::size_t>(k)]);
    const std::array<std::string, 3> names =
        level == 1 ? std::array<std::string, 3>{"E2", "E4", "E6"} : std::array<std::string, 3>{"E2", "G", "H"};
    // powers of each generator actually needed
    std::array<std::vector<ClosedForm>, 3> powers;
    for (std::size_t k = 0; k < 3; ++k) {
        powers[k].push_back(ClosedForm(1));
        if (maxe[k] == 0) continue;
        ClosedForm g;
        if (k == 0) g = mode == E2Mode::Full ? e2_full(point) : point.value("E2star");
        else g = point.value(names[k]);
        for (int e = 1; e <= maxe[k]; ++e) powers[k].push_back(powers[k].back() * g);
    }
    ClosedForm out;
    for (const auto& [e, c] : P.terms()) {
        ClosedForm t = powers[0][static_cast<std::size_t>(e[0])] * powers[1][static_cast<std::size_t>(e[1])] *
                       powers[2][static_cast<std::size_t>(e[2])];
        out += t * FieldElement(c);
    }
    return out;
}

/// The registry point m z + shift for z = x + b sqrt(-d); throws MissingValueError when absent.
inline const CMPoint& scaled_point(const CMRegistry& reg, const CMPoint& z, const Rational& m, const Rational& shift) {
    const Rational nx = m * z.x + shift, nb = m * z.b;
    const CMPoint* p = reg.find_at(nx, nb, z.d);
    if (!p) {
        const std::string where = z.d == 1 ? gaussian_label(reduce_mod1(nx), nb)
                                           : "x=" + nx.pretty() + ", b=" + nb.pretty() + ", d=" + std::to_string(z.d);
        throw MissingValueError("registry " + reg.name() + " has no point " + where + " (needed as " + m.pretty() +
                                "*z" + (shift.is_zero() ? "" : (shift.sign() > 0 ? "+" : "") + shift.pretty()) +
                                " for z = " + z.label + ")");
    }
    return *p;
}

/// Sum over terms of coeff * m^j * (D^j P)(m z + shift), plus the constant parts.
inline ClosedForm eval_decomposition(const QMDecomposition& d, const CMRegistry& reg, const CMPoint& z) {
    ClosedForm out;
    for (const auto& t : d.terms) {
        const CMPoint& pt = scaled_point(reg, z, t.scale, t.shift);
        const QMPoly Dp = qm_derive(t.poly, t.deriv);
        ClosedForm v = eval_qm_poly_at(Dp, pt, Dp.level());
        v = v * FieldElement(pow(t.scale, static_cast<long>(t.deriv)));
        if (!t.constant.is_zero()) v += ClosedForm(t.constant);
        out += v * t.coeff.lifted(reg.field());
    }
    return out;
}

/// The roman series at q = exp(2 pi i z) as an exact closed form.
inline ClosedForm evaluate_roman(Roman fam, unsigned s, unsigned p, const CMRegistry& reg, const CMPoint& z) {
    const Decomposition dec = decompose_roman(fam, s, p);
    return eval_decomposition(decomposition_to_qm(dec, reg.field()), reg, z);
}

/// Sum of n^p times the s-th power of the hyperbolic kernel at n pi c, c = 2 Im z for z on the
/// imaginary axis: 2^s times the roman series at q = exp(-pi c).
inline ClosedForm evaluate_hyperbolic(Roman fam, unsigned s, unsigned p, const CMRegistry& reg, const CMPoint& z) {
    if (!z.x.is_zero()) throw DomainError("hyperbolic sums need a point on the imaginary axis, got " + z.label);
    return evaluate_roman(fam, s, p, reg, z) * FieldElement(pow(Rational(2), static_cast<long>(s)));
}

struct SechSquaredReport {
    unsigned p = 0;
    ClosedForm II, III;                      // pipeline values at q = e^{-pi}
    bool II_matches_eisenstein = false;      // against B/(8p-4)(4 DE(2i) - DE(i))
    bool III_matches_eisenstein = false;     // against B/(8p-4)(2^{4p-2} DE(i) - DE(i/2))
    bool in_span = false;
    Rational c, d, g, h;
    bool relation_c = false, relation_d = false;
    bool theta_identity = false, value_identity = false;
    std::string error;

    [[nodiscard]] bool ok() const {
        return error.empty() && II_matches_eisenstein && III_matches_eisenstein && in_span && relation_c && relation_d &&
               theta_identity && value_identity;
    }
};

/// Coefficients (u, v) with x = u Gamma^{8p-4}/pi^{6p-2} + v Gamma^{8p}/pi^{6p}, Gamma = Gamma(1/4),
/// using Gamma^2 = 4 pi^{3/2} Omega: the basis is 4^{4p-2} Omega^{4p-2}/pi and 4^{4p} Omega^{4p}.
inline std::optional<std::pair<Rational, Rational>> gamma_basis_coeffs(const ClosedForm& x, unsigned p) {
    const int a = static_cast<int>(4 * p - 2), b = static_cast<int>(4 * p);
    for (const auto& [k, c] : x.terms()) {
        if (k != ClosedForm::Key{a, -1} && k != ClosedForm::Key{b, 0}) return std::nullopt;
        if (!c.is_rational()) return std::nullopt;
    }
    const Rational u = x.coeff(a, -1).is_zero() ? Rational(0) : x.coeff(a, -1).rational();
    const Rational v = x.coeff(b, 0).is_zero() ? Rational(0) : x.coeff(b, 0).rational();
    return std::make_pair(u / pow(Rational(4), a), v / pow(Rational(4), b));
}

/// The sech-squared sums II_2^{4p-2} and III_2^{4p-2} at q = e^{-pi}: coefficient relations over the
/// Gamma(1/4) basis and the two closing identities at 2i and i/2. For p = 1 the closing identities
/// use E2* in place of the quasimodular E2.
inline SechSquaredReport verify_sech_squared(unsigned p, const CMRegistry& reg) {
    if (p < 1) throw DomainError("p must be positive");
    SechSquaredReport r;
    r.p = p;
    try {
        const unsigned k = 4 * p - 2;
        const CMPoint& z = reg.at("i/2");
        r.II = evaluate_roman(Roman::II, 2, k, reg, z);
        r.III = evaluate_roman(Roman::III, 2, k, reg, z);

        const QMPoly E = k == 2 ? QMPoly::E2(1) : ramanujan_E(k);
        const QMPoly DE = qm_derive(E);
        auto at = [&](const QMPoly& P, const std::string& lbl, E2Mode m = E2Mode::Full) {
            return eval_qm_poly_at(P, reg.at(lbl), 1, m);
        };
        const FieldElement lead(bernoulli(k) / Rational(static_cast<long>(2 * k)));
        const ClosedForm ii = (at(DE, "2i") * FieldElement(4) - at(DE, "i")) * lead;
        const ClosedForm iii = (at(DE, "i") * FieldElement(pow(Rational(2), static_cast<long>(k))) - at(DE, "i/2")) * lead;
        r.II_matches_eisenstein = ii == r.II;
        r.III_matches_eisenstein = iii == r.III;

        const auto cd = gamma_basis_coeffs(r.II, p);
        const auto gh = gamma_basis_coeffs(r.III, p);
        r.in_span = cd && gh;
        if (r.in_span) {
            r.c = cd->first;
            r.d = cd->second;
            r.g = gh->first;
            r.h = gh->second;
            const Rational f = pow(Rational(2), 2 - 4 * static_cast<long>(p));
            r.relation_c = r.c == f * r.g;
            r.relation_d = r.d == -f * r.h;
        }

        const E2Mode mode = k == 2 ? E2Mode::Star : E2Mode::Full;
        const QMPoly theta = serre_theta(E, static_cast<int>(k));
        r.theta_identity = at(theta, "2i", mode) * FieldElement(pow(Rational(2), 4 * static_cast<long>(p))) ==
                           at(theta, "i/2", mode);
        r.value_identity = -(at(E, "2i", mode) * FieldElement(pow(Rational(2), static_cast<long>(k)))) == at(E, "i/2", mode);
    } catch (const std::exception& e) {
        r.error = e.what();
    }
    return r;
}

}  // namespace qmhyp
