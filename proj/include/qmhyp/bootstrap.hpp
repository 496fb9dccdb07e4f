#pragma once

#include <functional>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "qmhyp/cm_data.hpp"
#include "qmhyp/croots.hpp"
#include "qmhyp/modular_polynomials.hpp"
#include "qmhyp/numeric.hpp"

namespace qmhyp {

/// Univariate polynomial over a number field, lowest degree first.
using KPoly = std::vector<FieldElement>;

inline std::string kpoly_str(const KPoly& p, const std::string& var = "x") {
    std::string out;
    for (std::size_t e = p.size(); e-- > 0;) {
        if (p[e].is_zero()) continue;
        std::string c = p[e].str();
        const bool compound = c.find(" + ") != std::string::npos || c.find(" - ") != std::string::npos;
        bool neg = false;
        if (!compound && c[0] == '-') {
            neg = true;
            c = c.substr(1);
        }
        if (compound) c = "(" + c + ")";
        const std::string xp = e == 0 ? "" : (e == 1 ? var : var + "^" + std::to_string(e));
        std::string piece = xp.empty() ? c : (c == "1" ? xp : c + "*" + xp);
        if (out.empty()) out = neg ? "-" + piece : piece;
        else out += (neg ? " - " : " + ") + piece;
    }
    return out.empty() ? "0" : out;
}

namespace detail {

inline Field kpoly_field(const KPoly& p) {
    for (const auto& c : p)
        if (c.field()) return c.field();
    return nullptr;
}

/// Synthetic division by (X - r); the remainder must vanish.
inline KPoly deflate(const KPoly& p, const FieldElement& r) {
    const std::size_t n = p.size() - 1;
    KPoly q(n);
    FieldElement acc = p[n];
    for (std::size_t k = n; k-- > 0;) {
        q[k] = acc;
        acc = p[k] + acc * r;
    }
    if (!acc.is_zero()) throw DomainError("deflation by a non-root");
    return q;
}

inline FieldElement kpoly_eval(const KPoly& p, const FieldElement& x) {
    FieldElement acc;
    for (std::size_t k = p.size(); k-- > 0;) acc = acc * x + p[k];
    return acc;
}

/// Rational roots of a rational polynomial via numeric isolation and exact verification.
inline std::vector<Rational> rational_roots(const QPoly& f, unsigned bits) {
    std::vector<Rational> out;
    if (f.degree() < 1) return out;
    QPoly sq = f;
    const QPoly g = gcd(f, f.derivative());
    if (g.degree() > 0) sq = f.divmod(g).first;
    PrecisionScope ps(bits + 64);
    std::vector<Complex> c;
    for (int k = 0; k <= sq.degree(); ++k) c.emplace_back(to_real(sq.coeffs()[static_cast<std::size_t>(k)]));
    for (const auto& z : complex_roots(c, bits + 32)) {
        if (abs(z.im) > pow2(-static_cast<long>(bits) / 2) * std::max(Real(1), z.abs())) continue;
        const Rational r = best_rational(z.re, Integer(1) << (bits / 3));
        if (sq.eval(r).is_zero()) out.push_back(r);
    }
    return out;
}

}  // namespace detail

/// All roots of p lying in its coefficient field, with multiplicity: rational roots are found
/// exactly, and a remaining quadratic is solved with a square root inside the field. A remaining
/// factor of degree >= 3 raises FieldError.
inline std::vector<FieldElement> field_roots(KPoly p, unsigned bits = 128) {
    while (!p.empty() && p.back().is_zero()) p.pop_back();
    if (p.size() < 2) return {};
    const Field K = detail::kpoly_field(p);
    std::vector<FieldElement> roots;
    // a rational r is a root iff every coordinate polynomial vanishes at r
    const std::size_t deg = K ? K->degree() : 1;
    QPoly common;
    bool first = true;
    for (std::size_t c = 0; c < deg; ++c) {
        std::vector<Rational> cp;
        for (const auto& a : p) cp.push_back(a.lifted(K).coords()[c]);
        QPoly qp(cp);
        if (qp.degree() < 0) continue;
        common = first ? qp : gcd(common, qp);
        first = false;
    }
    for (const auto& r : detail::rational_roots(common, bits)) {
        const FieldElement fr = FieldElement::embed_rational(K, r);
        while (p.size() > 1 && detail::kpoly_eval(p, fr).is_zero()) {
            roots.push_back(fr);
            p = detail::deflate(p, fr);
        }
    }
    if (p.size() == 2) {
        roots.push_back(-(p[0] / p[1]));
    } else if (p.size() == 3) {
        const FieldElement a = p[2], b = p[1], c = p[0];
        const FieldElement disc = b * b - FieldElement(4) * a * c;
        const auto s = field_sqrt(disc.lifted(K));
        if (!s) throw FieldError("quadratic factor " + kpoly_str(p) + " has no roots in the field");
        const FieldElement two_a = FieldElement(2) * a;
        roots.push_back((-b + *s) / two_a);
        roots.push_back((-b - *s) / two_a);
    } else if (p.size() > 3) {
        throw FieldError("factor " + kpoly_str(p) + " of degree " + std::to_string(p.size() - 1) +
                         " has no rational root; field roots of this degree are not searched");
    }
    return roots;
}

/// A value to be identified among the roots: numeric is the expected root, assign stores the result.
struct RootTarget {
    std::string description;
    Complex numeric;
    std::function<void(const FieldElement&)> assign;
};

/// Matches each target to the unique root value within tolerance; distinct root values must be
/// separated by more than the margin relative to the target's size.
inline void match_roots(const std::vector<FieldElement>& roots, const std::vector<RootTarget>& targets, unsigned bits) {
    PrecisionScope ps(bits + 32);
    const Real tol = pow2(-static_cast<long>(bits) / 2);
    const Real margin = pow2(-32);
    for (const auto& t : targets) {
        const FieldElement* best = nullptr;
        Real best_d = 0;
        for (const auto& r : roots) {
            const Real dist = (r.embed(bits) - t.numeric).abs();
            const Real scale = std::max(Real(1), t.numeric.abs());
            if (dist <= tol * scale) {
                if (best && !(*best == r)) throw PrecisionError("ambiguous root match for " + t.description);
                best = &r;
                best_d = dist;
            } else if (dist <= margin * scale) {
                throw PrecisionError("root within the separation margin but outside tolerance for " + t.description);
            }
        }
        if (!best) throw PrecisionError("no root matches " + t.description + " numerically");
        t.assign(*best);
    }
}

enum class BootstrapForm { E4, E6, E2, G, H };

inline std::string bootstrap_form_name(BootstrapForm f) {
    switch (f) {
        case BootstrapForm::E4: return "E4";
        case BootstrapForm::E6: return "E6";
        case BootstrapForm::E2: return "E2";
        case BootstrapForm::G: return "G";
        case BootstrapForm::H: return "H";
    }
    return "?";
}

/// The degree-three polynomials for n = 2 at level one: E4|V2, E6|V2 and 2E2|V2 - E2.
inline const TransformationPolynomial& level1_psi2(BootstrapForm f) {
    static std::mutex mu;
    static std::map<int, TransformationPolynomial> cache;
    std::lock_guard lock(mu);
    auto it = cache.find(static_cast<int>(f));
    if (it != cache.end()) return it->second;
    TransformationPolynomial tp;
    switch (f) {
        case BootstrapForm::E4: tp = psi_polynomial(eisenstein_qexp(4, 400), 2, 4, 1, Character::Trivial); break;
        case BootstrapForm::E6: tp = psi_polynomial(eisenstein_qexp(6, 400), 2, 6, 1, Character::Trivial); break;
        case BootstrapForm::E2: tp = psi_polynomial(eisenstein_qexp(2, 400), 2, 2, 1, Character::Trivial, 2, -1); break;
        default: throw DomainError("no level-one polynomial for this form");
    }
    return cache.emplace(static_cast<int>(f), tp).first->second;
}

/// Substitutes normalized generator values into the coefficients of a transformation polynomial.
inline KPoly specialize(const std::vector<QMPoly>& coeffs, const std::array<FieldElement, 3>& gens) {
    KPoly out(coeffs.size());
    const std::size_t d = coeffs.size() - 1;
    for (std::size_t j = 0; j <= d; ++j) {
        FieldElement acc;
        for (const auto& [e, c] : coeffs[j].terms()) {
            if (e[0] != 0) throw DomainError("transformation polynomial coefficient involves E2");
            acc += FieldElement(c) * pow(gens[0], e[0]) * pow(gens[1], e[1]) * pow(gens[2], e[2]);
        }
        out[d - j] = acc;
    }
    return out;
}

struct BootstrapLog {
    std::vector<std::string> lines;
    void add(std::string s) { lines.push_back(std::move(s)); }
};

namespace detail {

/// Stores a value, or checks it against an existing one.
inline void put_value(CMRegistry& reg, const Rational& x, const Rational& b, const std::string& name,
                      const FieldElement& normalized, BootstrapLog& log) {
    const ClosedForm v = ClosedForm::term(normalized.lifted(reg.field()), cm_value_weight(name), 0);
    if (const CMPoint* p = reg.find_at(x, b, 1); p && p->has(name)) {
        if (!(p->value(name) == v))
            throw DomainError("inconsistent " + name + " at " + p->label + ": have " + p->value(name).str() +
                              ", derived " + v.str());
        return;
    }
    reg.set_value(x, b, 1, name, v);
    log.add(name + "(" + gaussian_label(reduce_mod1(x), b) + ") = " + v.str());
}

inline Complex numeric_generator(const std::string& name, const Complex& z, unsigned bits) {
    if (name == "E2star") return e2star_numeric(z, bits);
    if (name == "E4") return eisenstein_numeric(4, z, bits);
    if (name == "E6") return eisenstein_numeric(6, z, bits);
    if (name == "G") return g_numeric(z, bits);
    return h_numeric(z, bits);
}

inline Complex gaussian_numeric(const Rational& x, const Rational& b, unsigned bits) {
    PrecisionScope ps(bits + 32);
    return {to_real(x), to_real(b)};
}

}  // namespace detail

/// One n = 2 bootstrap step at a Gaussian point z already carrying E4, E6 (and E2* for the E2
/// form, G and H for the level-4 forms). Assigns the roots to 2z, z/2 and (z+1)/2 for level one
/// and to 2z for G, H. Returns the specialized polynomial.
inline KPoly cm_bootstrap_step(CMRegistry& reg, const std::string& label, BootstrapForm form, unsigned bits,
                               BootstrapLog& log) {
    const CMPoint base = reg.at(label);
    if (base.d != 1) throw DomainError("bootstrap steps are implemented for Gaussian points");
    PrecisionScope ps(bits + 32);
    const Real om = omega_numeric(bits);
    const Rational x = base.x, b = base.b;
    KPoly poly;
    std::vector<RootTarget> targets;
    std::vector<std::pair<Rational, Rational>> pts;  // (x, b) per target
    if (form == BootstrapForm::E4 || form == BootstrapForm::E6 || form == BootstrapForm::E2) {
        const std::array<FieldElement, 3> gens{FieldElement(0), normalized_value(base, "E4"), normalized_value(base, "E6")};
        poly = specialize(level1_psi2(form).coeffs, gens);
        const std::string name = form == BootstrapForm::E2 ? "E2star" : bootstrap_form_name(form);
        const int k = cm_value_weight(name);
        const FieldElement e2z = form == BootstrapForm::E2 ? normalized_value(base, "E2star") : FieldElement();
        // cosets (a b; 0 d) with ad = 2
        struct Coset { long a, bb, d; };
        for (const Coset c : {Coset{2, 0, 1}, Coset{1, 0, 2}, Coset{1, 1, 2}}) {
            const Rational nx = (Rational(c.a) * x + Rational(c.bb)) / Rational(c.d);
            const Rational nb = Rational(c.a) * b / Rational(c.d);
            const Complex zz = detail::gaussian_numeric(nx, nb, bits);
            const Complex val = detail::numeric_generator(name, zz, bits) * (1 / pow(om, k));
            Complex expect;
            std::function<void(const FieldElement&)> assign;
            if (form == BootstrapForm::E2) {
                // root = (n/d^2) E2*((az+b)/d) - E2*(z)
                const Rational f(2, c.d * c.d);
                expect = val * to_real(f) - e2z.embed(bits);
                assign = [&reg, &log, name, e2z, nx, nb, f](const FieldElement& r) {
                    detail::put_value(reg, nx, nb, name, (r + e2z) / FieldElement(f), log);
                };
            } else {
                // root = d^{-k} f((az+b)/d)
                const Rational f = pow(Rational(c.d), -k);
                expect = val * to_real(f);
                assign = [&reg, &log, name, nx, nb, f](const FieldElement& r) {
                    detail::put_value(reg, nx, nb, name, r / FieldElement(f), log);
                };
            }
            targets.push_back({name + "(" + gaussian_label(reduce_mod1(nx), nb) + ")", expect, assign});
        }
    } else {
        const std::array<FieldElement, 3> gens{FieldElement(0), normalized_value(base, "G"), normalized_value(base, "H")};
        poly = specialize(form == BootstrapForm::G ? level4_psi_g() : level4_psi_h(), gens);
        const std::string name = bootstrap_form_name(form);
        const int k = cm_value_weight(name);
        const Rational nx = Rational(2) * x, nb = Rational(2) * b;
        const Complex val =
            detail::numeric_generator(name, detail::gaussian_numeric(nx, nb, bits), bits) * (1 / pow(om, k));
        targets.push_back({name + "(" + gaussian_label(reduce_mod1(nx), nb) + ")", val,
                           [&reg, &log, nx, nb, name](const FieldElement& r) { detail::put_value(reg, nx, nb, name, r, log); }});
    }
    for (auto& c : poly) c = c.lifted(reg.field());
    log.add("Psi_2 for " + bootstrap_form_name(form) + " at " + label + ": " + kpoly_str(poly));
    const auto roots = field_roots(poly, bits);
    match_roots(roots, targets, bits);
    return poly;
}

/// Maps values at z to gamma z = (a z + b)/(c z + d) through (cz+d)^k; cz + d must lie in the field.
inline void cm_transform(CMRegistry& reg, const std::string& label, long a, long bb, long c, long d,
                         const std::vector<std::string>& names, BootstrapLog& log) {
    if (a * d - bb * c != 1) throw DomainError("transformation matrix must have determinant 1");
    const CMPoint base = reg.at(label);
    const Field K = reg.field();
    const FieldElement i = FieldElement::named(K, "i");
    const FieldElement z = FieldElement::embed_rational(K, base.x) + i * FieldElement(base.b);
    const FieldElement j = FieldElement(c) * z + FieldElement(d);
    const FieldElement gz = (FieldElement(a) * z + FieldElement(bb)) / j;
    const Complex gnum = gz.embed(128);
    PrecisionScope ps(160);
    const Rational gx = best_rational(gnum.re, Integer(1) << 40), gy = best_rational(gnum.im, Integer(1) << 40);
    if (!(FieldElement::embed_rational(K, gx) + i * FieldElement(gy) == gz))
        throw DomainError("transformed point is not of the form x + y i with rational x, y");
    for (const auto& name : names) {
        const int k = cm_value_weight(name);
        detail::put_value(reg, gx, gy, name, pow(j, k) * normalized_value(base, name), log);
    }
}

/// E2 at a fixed point z0 = eta z0 of a determinant-n matrix eta with bottom row (c, d): the
/// number (n j^{-2} - 1) E2(z0) - (6/(pi i)) c j^{-1}, j = c z0 + d, is a root of the polynomial
/// for n E2|V_n - E2. Returns E2*(z0) normalized, after checking the 1/pi parts cancel.
inline FieldElement e2_from_fixed_point(const CMPoint& p, long n, long c, long d, unsigned bits, BootstrapLog& log) {
    const Field K = p.field;
    const FieldElement i = FieldElement::named(K, "i");
    const FieldElement z = FieldElement::embed_rational(K, p.x) + i * p.y();
    const FieldElement j = FieldElement(c) * z + FieldElement(d);
    const FieldElement lead = FieldElement(n) * pow(j, -2) - FieldElement(1);
    // 1/pi part: lead * 3/y - 6 c /(i j) must vanish
    const FieldElement pi_part = lead * FieldElement(3) * p.y().inverse() - FieldElement(6 * c) / (i * j);
    if (!pi_part.is_zero()) throw DomainError("fixed-point data inconsistent: 1/pi parts do not cancel");
    const std::array<FieldElement, 3> gens{FieldElement(0), normalized_value(p, "E4"), normalized_value(p, "E6")};
    KPoly poly = specialize(level1_psi2(BootstrapForm::E2).coeffs, gens);
    for (auto& co : poly) co = co.lifted(K);
    const auto roots = field_roots(poly, bits);
    PrecisionScope ps(bits + 32);
    const Real om = omega_numeric(bits);
    const Complex z0 = p.z_numeric(bits);
    const Complex e2s = e2star_numeric(z0, bits) * (1 / pow(om, 2));
    const Complex expect = lead.embed(bits) * e2s;
    FieldElement result;
    match_roots(roots, {{"fixed-point root at " + p.label, expect, [&](const FieldElement& r) { result = r / lead; }}}, bits);
    log.add("fixed point " + p.label + ": roots of " + kpoly_str(poly) + ", E2*(" + p.label + ") = " + result.str() + "*Omega^2");
    return result;
}

struct BootstrapResult {
    CMRegistry registry;
    BootstrapLog log;
    KPoly e4_cubic_at_i;
};

/// Rebuilds the Gaussian CM tables from E4(i) = 12 Omega^4, E6(i) = 0, E2*(i) = 0.
inline BootstrapResult cm_bootstrap_gaussian(unsigned bits = 128) {
    if (bits < 128) throw DomainError("root matching needs at least 128 bits");
    BootstrapResult res;
    const Field K = gaussian_field();
    res.registry = CMRegistry("gaussian", K);
    CMRegistry& reg = res.registry;
    BootstrapLog& log = res.log;
    auto Q = [&](long n, long d = 1) { return FieldElement::embed_rational(K, Rational(n, d)); };

    reg.set_value(0, 1, 1, "E4", ClosedForm::term(Q(12), 4, 0));
    reg.set_value(0, 1, 1, "E6", ClosedForm::term(Q(0), 6, 0));
    reg.set_value(0, 1, 1, "E2star", ClosedForm::term(Q(0), 2, 0));
    // eta = (1 -1; 1 1) fixes i with determinant 2
    const FieldElement e2i = e2_from_fixed_point(reg.at("i"), 2, 1, 1, bits, log);
    if (!e2i.is_zero()) throw DomainError("fixed-point E2*(i) disagrees with the seed");

    res.e4_cubic_at_i = cm_bootstrap_step(reg, "i", BootstrapForm::E4, bits, log);
    cm_bootstrap_step(reg, "i", BootstrapForm::E6, bits, log);
    cm_bootstrap_step(reg, "i", BootstrapForm::E2, bits, log);
    for (auto f : {BootstrapForm::E4, BootstrapForm::E6, BootstrapForm::E2}) cm_bootstrap_step(reg, "2i", f, bits, log);

    const std::vector<std::string> level1{"E2star", "E4", "E6"};
    cm_transform(reg, "4i", 0, -1, 1, 0, level1, log);   // i/4 = -1/(4i)
    cm_transform(reg, "2i", 0, -1, 1, 0, level1, log);   // i/2 = -1/(2i), consistency
    cm_transform(reg, "2i", 0, -1, 1, -2, level1, log);  // (1+i)/4
    cm_transform(reg, "2i", 0, -1, 1, 2, level1, log);   // (-1+i)/4

    // G and H from the E2 bridges: 3G(z)^2 = 4E2*(4z) - E2*(z), 16H(z) = 2E2*(2z) - E2*(z) - G(z)^2
    PrecisionScope ps(bits + 32);
    const Real om = omega_numeric(bits);
    for (const Rational& yb : {Rational(1), Rational(1, 2), Rational(1, 4)}) {
        const CMPoint& p = *reg.find_at(0, yb, 1);
        const FieldElement e_z = normalized_value(p, "E2star");
        const FieldElement e_2z = normalized_value(*reg.find_at(0, yb * Rational(2), 1), "E2star");
        const FieldElement e_4z = normalized_value(*reg.find_at(0, yb * Rational(4), 1), "E2star");
        const FieldElement g2 = (FieldElement(4) * e_4z - e_z) / FieldElement(3);
        const auto s = field_sqrt(g2.lifted(K));
        if (!s) throw FieldError("G^2 at " + p.label + " has no square root in the field");
        const Complex gnum = g_numeric(p.z_numeric(bits), bits) * (1 / om);
        std::vector<FieldElement> roots{*s, -*s};
        const std::string lbl = p.label;
        const Rational px = p.x, pb = p.b;
        match_roots(roots, {{"G(" + lbl + ")", gnum, [&](const FieldElement& r) {
                                 detail::put_value(reg, px, pb, "G", r, log);
                             }}},
                    bits);
        const FieldElement g = normalized_value(*reg.find_at(px, pb, 1), "G");
        detail::put_value(reg, px, pb, "H", (FieldElement(2) * e_2z - e_z - g * g) / FieldElement(16), log);
    }
    cm_bootstrap_step(reg, "i", BootstrapForm::G, bits, log);
    cm_bootstrap_step(reg, "i", BootstrapForm::H, bits, log);
    return res;
}

}  // namespace qmhyp
