#include <gtest/gtest.h>

#include "qmhyp/cm_evaluator.hpp"
#include "qmhyp/numeric.hpp"
#include "qmhyp/verifier.hpp"

using namespace qmhyp;

TEST(Eta, ValueAtI) {
    PrecisionScope ps(288);
    const Complex e = eta_numeric(Complex(Real(0), Real(1)));
    EXPECT_LT(abs(e.re - Real("0.7682254223260566590025941795761806445178669144648")), Real("1e-45"));
    EXPECT_LT(abs(e.im), Real("1e-70"));
    EXPECT_LT(abs(omega_numeric() - e.re * e.re), Real("1e-70"));
    const Complex e2 = eta_numeric(Complex(Real(0), Real(2)));
    EXPECT_LT(abs(e2.re / e.re - Real("0.77110541270397041180614593104536742065340663084604")), Real("1e-45"));
    EXPECT_THROW(eta_numeric(Complex(Real(0), Real(-1))), DomainError);
}

TEST(Eta, EisensteinFromEta) {
    // E4 = eta(z)^16/eta(2z)^8 + 256 eta(2z)^16/eta(z)^8 at a generic point
    PrecisionScope ps(288);
    const Complex z(Real("0.137"), Real("0.83"));
    const Complex a = eta_numeric(z), b = eta_numeric(z * Real(2));
    const Complex rhs = cpow(a, 16) / cpow(b, 8) + Real(256) * cpow(b, 16) / cpow(a, 8);
    EXPECT_LT(rel_diff(eisenstein_numeric(4, z), rhs), Real("1e-60"));
}

TEST(ClosedFormNumeric, Basics) {
    PrecisionScope ps(288);
    const Complex inv_pi = closedform_numeric(ClosedForm::term(FieldElement(1), 0, -1));
    EXPECT_LT(abs(inv_pi.re * real_pi() - 1), Real("1e-70"));
    const Complex om4 = closedform_numeric(ClosedForm::term(FieldElement(12), 4, 0));
    EXPECT_LT(rel_diff(om4, eisenstein_numeric(4, Complex(Real(0), Real(1)))), Real("1e-60"));
}

TEST(Summation, TailBoundIsSound) {
    PrecisionScope ps(600);
    const Complex w(Real("0.55"), Real("0.1"));
    for (Roman r : {Roman::I, Roman::IV, Roman::VII}) {
        const SumResult ref = sum_defining_series(r, 3, 2, w, 512);
        const SumResult coarse = sum_defining_series(r, 3, 2, w, 64);
        EXPECT_LE((ref.value - coarse.value).abs(), coarse.tail_bound + ref.tail_bound + pow2(-60)) << roman_name(r);
        EXPECT_GT(ref.terms, coarse.terms);
    }
}

TEST(Summation, DivergentBoundThrows) {
    auto term = [](long) { return Complex(Real(1)); };
    auto bound = [](long) { return Real(1); };
    EXPECT_THROW(sum_with_tail(term, bound, Real("1e-10"), 1000), PrecisionError);
    EXPECT_THROW(sum_defining_series(Roman::I, 2, 0, Complex(Real(1))), DomainError);
}

TEST(Summation, HyperbolicMatchesSeries) {
    PrecisionScope ps(288);
    for (Roman r : kAllRoman)
        for (unsigned s = 1; s <= 3; ++s) {
            const Real c("0.7");
            const Real q = exp(-real_pi() * c);
            const SumResult sr = sum_defining_series(r, s, 2, Complex(sqrt(q)), 256);
            const Real h = hyperbolic_sum(r, s, 2, c, 256);
            EXPECT_LT(rel_diff(Complex(h), sr.value * pow(Real(2), s)), Real("1e-60")) << roman_name(r) << s;
        }
}

TEST(Verification, CorruptedRegistryDetected) {
    CMRegistry reg = gaussian_table();
    const CMPoint& z = reg.at("i/2");
    EXPECT_TRUE(verify_point(Roman::I, 2, 0, reg, z).pass);
    CMRegistry bad = gaussian_table();
    const CMPoint& p = bad.at("i");
    bad.set_value(0, 1, 1, "E4", p.value("E4") * FieldElement(Rational(1000001, 1000000)).lifted(bad.field()));
    EXPECT_FALSE(verify_point(Roman::I, 4, 2, bad, bad.at("i/2")).pass);
}

TEST(Verification, VanishingValueUsesAbsoluteResidual) {
    const CMRegistry reg = gaussian_table();
    for (Roman r : kAllRoman)
        for (unsigned s = 1; s <= 4; ++s)
            for (unsigned p = 0; p <= 4; ++p) {
                if (!roman_admissible(r, s, p)) continue;
                try {
                    const PointReport rep = verify_point(r, s, p, reg, reg.at("i"), 192, Real("1e-45"));
                    if (rep.closed.is_zero()) {
                        EXPECT_TRUE(rep.absolute);
                        EXPECT_TRUE(rep.pass) << roman_name(r) << s << p;
                    }
                } catch (const MissingValueError&) {
                }
            }
}
