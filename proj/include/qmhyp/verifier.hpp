#pragma once

#include <string>
#include <vector>

#include "qmhyp/cm_evaluator.hpp"
#include "qmhyp/numeric.hpp"

namespace qmhyp {

struct PointReport {
    std::string family;
    unsigned s = 0, p = 0;
    std::string point;
    unsigned bits = kDefaultBits;
    ClosedForm closed;
    Complex closed_numeric;
    Complex summed;
    Real tail_bound;
    long terms = 0;
    Real residual;      // relative, or absolute when the closed form is exactly zero
    bool absolute = false;
    Real tolerance;
    bool pass = false;
};

/// Exact evaluation at a registry point against literal summation of the defining series.
inline PointReport verify_point(Roman fam, unsigned s, unsigned p, const CMRegistry& reg, const CMPoint& z,
                                unsigned bits = kDefaultBits, const Real& tol = Real("1e-40")) {
    PointReport r;
    r.family = roman_name(fam);
    r.s = s;
    r.p = p;
    r.point = z.label;
    r.bits = bits;
    r.closed = evaluate_roman(fam, s, p, reg, z);
    PrecisionScope ps(bits + 32);
    r.tolerance = tol;
    r.closed_numeric = closedform_numeric(r.closed, bits);
    const SumResult sum = sum_defining_series(fam, s, p, w_of(z.z_numeric(bits)), bits);
    r.summed = sum.value;
    r.tail_bound = sum.tail_bound;
    r.terms = sum.terms;
    if (r.closed.is_zero()) {
        // a vanishing value: the sum must vanish to within its own tail bound plus rounding
        r.absolute = true;
        r.residual = r.summed.abs();
        r.pass = r.residual <= r.tail_bound + pow2(-static_cast<long>(bits) + 8);
    } else {
        r.residual = rel_diff(r.closed_numeric, r.summed);
        r.pass = r.residual < tol;
    }
    return r;
}

struct RatioCheck {
    std::string name;
    Real expected, computed, residual;
    bool pass = false;
};

struct RowReport {
    std::string point;
    unsigned bits = 128;
    std::vector<RatioCheck> checks;
    [[nodiscard]] bool pass() const {
        if (checks.empty()) return false;
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

/// Omega-free checks of a table row: E6^2/E4^3, E2*^3/E6 and E2* E4/E6 computed from q-series at the
/// point against the ratios of the stored values. A vanishing stored value is checked directly.
inline RowReport ratio_check_row(const CMPoint& pt, unsigned bits = 128, const Real& tol = Real("1e-20")) {
    RowReport rep;
    rep.point = pt.label;
    rep.bits = bits;
    PrecisionScope ps(bits + 32);
    const Complex z = pt.z_numeric(bits);
    const Complex e2 = e2star_numeric(z, bits), e4 = eisenstein_numeric(4, z, bits), e6 = eisenstein_numeric(6, z, bits);
    auto coeff = [&](const std::string& n) { return normalized_value(pt, n); };
    const FieldElement c2 = coeff("E2star"), c4 = coeff("E4"), c6 = coeff("E6");
    auto add = [&](const std::string& name, const FieldElement& exact, const Complex& num) {
        RatioCheck c;
        c.name = name;
        c.expected = exact.embed(bits).re;
        c.computed = num.re;
        c.residual = rel_diff(num, exact.embed(bits));
        c.pass = c.residual < tol && abs(num.im) < tol * std::max(Real(1), num.abs());
        rep.checks.push_back(c);
    };
    // scale for vanishing values: |E6|^{k/6}
    const Real s6 = e6.abs();
    auto add_zero = [&](const std::string& name, const Complex& num, int k) {
        RatioCheck c;
        c.name = name;
        c.expected = 0;
        c.computed = num.abs();
        c.residual = num.abs() / pow(s6, Real(k) / 6);
        c.pass = c.residual < tol;
        rep.checks.push_back(c);
    };
    if (c6.is_zero()) throw DomainError("ratio checks need a nonzero E6 value at " + pt.label);
    if (c4.is_zero()) add_zero("E4 = 0", e4, 4);
    else add("E6^2/E4^3", c6 * c6 / (c4 * c4 * c4), e6 * e6 / (e4 * e4 * e4));
    if (c2.is_zero()) add_zero("E2* = 0", e2, 2);
    else add("E2*^3/E6", c2 * c2 * c2 / c6, e2 * e2 * e2 / e6);
    if (!c2.is_zero() && !c4.is_zero()) add("E2*E4/E6", c2 * c4 / c6, e2 * e4 / e6);
    return rep;
}

}  // namespace qmhyp
