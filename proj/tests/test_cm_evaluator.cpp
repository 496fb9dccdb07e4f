#include <gtest/gtest.h>

#include "qmhyp/cm_evaluator.hpp"
#include "qmhyp/numeric.hpp"
#include "qmhyp/verifier.hpp"

using namespace qmhyp;

namespace {

const CMRegistry& reg() {
    static const CMRegistry r = gaussian_table();
    return r;
}

ClosedForm T(const Rational& c, int omega, int pi) { return ClosedForm::term(FieldElement(c), omega, pi); }

// exact value at a registry point against the same polynomial evaluated from q-series at z
void expect_numeric_match(const QMPoly& P, const std::string& label) {
    PrecisionScope ps(288);
    const CMPoint& pt = reg().at(label);
    const Complex exact = closedform_numeric(eval_qm_poly_at(P, pt, P.level()), 256);
    const Complex num = qmpoly_numeric_at(P, pt.z_numeric(256), 256);
    EXPECT_LT(rel_diff(exact, num), Real("1e-60")) << P.str() << " at " << label;
}

}  // namespace

TEST(PolynomialValues, DerivativesAtI) {
    const CMPoint& i = reg().at("i");
    EXPECT_EQ(e2_full(i), T(3, 0, -1));
    EXPECT_EQ(eval_qm_poly_at(qm_derive(QMPoly::E4()), i, 1), T(12, 4, -1));
    EXPECT_EQ(eval_qm_poly_at(qm_derive(QMPoly::E2(), 3), i, 1),
              T(Rational(-3, 2), 8, 0) + T(Rational(-9, 4), 4, -2) + T(Rational(9, 32), 0, -4));
}

TEST(PolynomialValues, AgreeWithSeriesNumerically) {
    for (const char* lbl : {"i", "2i", "i/2", "4i", "(1+i)/4"}) {
        expect_numeric_match(qm_derive(QMPoly::E2(), 4), lbl);
        expect_numeric_match(qm_derive(QMPoly::E4(), 4), lbl);
        expect_numeric_match(qm_derive(QMPoly::E6(), 2), lbl);
    }
    for (const char* lbl : {"i", "i/2"}) {
        expect_numeric_match(qm_derive(QMPoly::G() * QMPoly::H(), 3), lbl);
        expect_numeric_match(qm_derive(QMPoly::E2(4), 2), lbl);
    }
}

TEST(PolynomialValues, LevelMismatchThrows) {
    EXPECT_THROW(eval_qm_poly_at(QMPoly::G(), reg().at("i"), 1), DomainError);
}

TEST(Roman, HyperbolicI84AtHalfI) {
    const ClosedForm v = evaluate_hyperbolic(Roman::I, 8, 4, reg(), reg().at("i/2"));
    EXPECT_EQ(v.str(),
              "2/315*Omega^12 + 1/15*Omega^8*pi^-2 - 2/9*Omega^8*pi^-1 + 7/45*Omega^8 + 1/120*Omega^4*pi^-4 - "
              "1/9*Omega^4*pi^-3 + 7/30*Omega^4*pi^-2 - 16/175*Omega^4*pi^-1 + 1/120*pi^-5 - 7/240*pi^-4");
    PrecisionScope ps(288);
    EXPECT_LT(rel_diff(closedform_numeric(v, 256), Complex(hyperbolic_sum(Roman::I, 8, 4, Real(1), 256))), Real("1e-70"));
}

TEST(Roman, SmallestCase) {
    EXPECT_EQ(evaluate_roman(Roman::I, 2, 0, reg(), reg().at("i/2")), T(Rational(1, 24), 0, 0) + T(Rational(-1, 8), 0, -1));
}

TEST(Roman, HyperbolicIsScaledRoman) {
    for (unsigned s = 1; s <= 4; ++s)
        for (unsigned p = 0; p <= 4; ++p) {
            if (!roman_admissible(Roman::II, s, p)) continue;
            const CMPoint& z = reg().at("i/2");
            EXPECT_EQ(evaluate_hyperbolic(Roman::II, s, p, reg(), z),
                      evaluate_roman(Roman::II, s, p, reg(), z) * FieldElement(pow(Rational(2), static_cast<long>(s))));
        }
    EXPECT_THROW(evaluate_hyperbolic(Roman::I, 2, 0, reg(), reg().at("(1+i)/4")), DomainError);
}

TEST(Roman, MissingPointsAreReported) {
    try {
        evaluate_roman(Roman::VI, 2, 0, reg(), reg().at("i"));
        FAIL() << "expected MissingValueError";
    } catch (const MissingValueError& e) {
        EXPECT_NE(std::string(e.what()).find("8i"), std::string::npos) << e.what();
    }
    try {
        evaluate_roman(Roman::VIII, 1, 1, reg(), reg().at("i"));
        FAIL() << "expected MissingValueError";
    } catch (const MissingValueError& e) {
        EXPECT_NE(std::string(e.what()).find("(1+2i)/4"), std::string::npos) << e.what();
    }
    EXPECT_THROW(evaluate_roman(Roman::I, 2, 1, reg(), reg().at("i")), NotCoveredError);
}

TEST(Roman, AdmissibleGridAgreesWithSummation) {
    int verified = 0, missing = 0;
    for (const char* lbl : {"i", "i/2"})
        for (Roman r : kAllRoman)
            for (unsigned s = 1; s <= 4; ++s)
                for (unsigned p = 0; p <= 4; ++p) {
                    if (!roman_admissible(r, s, p)) continue;
                    try {
                        const PointReport rep = verify_point(r, s, p, reg(), reg().at(lbl), 192, Real("1e-45"));
                        EXPECT_TRUE(rep.pass) << roman_name(r) << " " << s << " " << p << " at " << lbl
                                              << ": residual " << to_decimal(rep.residual, 5);
                        ++verified;
                    } catch (const MissingValueError&) {
                        ++missing;
                    }
                }
    EXPECT_GT(verified, 100);
    EXPECT_LT(missing, verified);
}

TEST(SechSquared, FamilyP1ToP3) {
    for (unsigned p = 1; p <= 3; ++p) {
        const SechSquaredReport r = verify_sech_squared(p, reg());
        EXPECT_TRUE(r.ok()) << "p=" << p << " " << r.error;
    }
    const SechSquaredReport r3 = verify_sech_squared(3, reg());
    EXPECT_EQ(r3.c, Rational(945, 268435456));
    EXPECT_EQ(r3.d, Rational(-153, 23622320128L));
    EXPECT_EQ(r3.g, Rational(945, 262144));
    EXPECT_EQ(r3.h, Rational(153, 23068672));
    EXPECT_THROW(verify_sech_squared(0, reg()), DomainError);
}
