#include <gtest/gtest.h>

#include "qmhyp/decomposer.hpp"

using namespace qmhyp;

namespace {

constexpr std::size_t kPrec = 120;

}  // namespace

TEST(FamilyReduction, MatchesDirectExpansion) {
    for (Family f : kAllFamilies)
        for (unsigned s = 0; s <= 9; ++s) {
            if (first_class(f) != (s % 2 == 1)) {
                EXPECT_THROW(reduce_family(f, s), DomainError);
                continue;
            }
            Decomposition d;
            d.terms = reduce_family(f, s);
            EXPECT_EQ(decomposition_to_qseries(d, kPrec), family_qexpansion(f, s, kPrec)) << family_char(f) << s;
        }
}

TEST(Admissibility, SixteenParityCases) {
    int count = 0;
    for (Roman r : kAllRoman)
        for (unsigned s = 1; s <= 2; ++s)
            for (unsigned p = 0; p <= 1; ++p) count += roman_admissible(r, s, p);
    EXPECT_EQ(count, 16);
    EXPECT_FALSE(roman_admissible(Roman::I, 2, 1));
    EXPECT_TRUE(roman_admissible(Roman::VII, 2, 1));
    EXPECT_FALSE(roman_admissible(Roman::VIII, 3, 2));
}

TEST(Decompose, UncoveredParityThrows) {
    try {
        decompose_roman(Roman::I, 2, 1);
        FAIL() << "expected NotCoveredError";
    } catch (const NotCoveredError& e) {
        EXPECT_NE(std::string(e.what()).find("not covered by Theorem 3.2"), std::string::npos);
    }
    EXPECT_THROW(decompose_roman(Roman::II, 3, 1), NotCoveredError);
    EXPECT_THROW(decompose_roman(Roman::I, 0, 0), DomainError);
}

TEST(Decompose, I84) {
    const Decomposition d = decompose_roman(Roman::I, 8, 4);
    EXPECT_EQ(d.prefactor, Rational(1, 5040));
    EXPECT_EQ(decomposition_str(d), "1/5040 * (D^4A_3(q^2) - 14*D^4A_1(q^2) + 49*D^3A_1(q^2) - 36*DA_3(q^2))");
    EXPECT_EQ(decomposition_to_qseries(d, kPrec), roman_qexpansion(Roman::I, 8, 4, kPrec));
}

TEST(Decompose, SmallCases) {
    EXPECT_EQ(decomposition_str(decompose_roman(Roman::VII, 1, 2)), "J_2(q)");
    EXPECT_EQ(decomposition_str(decompose_roman(Roman::VII, 2, 1)), "DN_0(q)");
}

TEST(Decompose, OracleGrid) {
    int checked = 0;
    for (Roman r : kAllRoman)
        for (unsigned s = 1; s <= 7; ++s)
            for (unsigned p = 0; p <= 7; ++p) {
                if (!roman_admissible(r, s, p)) {
                    EXPECT_THROW(decompose_roman(r, s, p), NotCoveredError);
                    continue;
                }
                const Decomposition d = decompose_roman(r, s, p);
                const QSeries direct = roman_qexpansion(r, s, p, kPrec);
                EXPECT_EQ(decomposition_to_qseries(d, kPrec), direct) << roman_name(r) << " " << s << " " << p;
                EXPECT_EQ(decomposition_to_qseries(reduce_decomposition(d), kPrec), direct)
                    << "reduced " << roman_name(r) << " " << s << " " << p;
                ++checked;
            }
    EXPECT_GT(checked, 200);
}

TEST(Decompose, ReducedBasesAreCanonical) {
    for (Roman r : kAllRoman)
        for (unsigned s = 1; s <= 6; ++s)
            for (unsigned p = 0; p <= 6; ++p) {
                if (!roman_admissible(r, s, p)) continue;
                for (const auto& t : reduce_decomposition(decompose_roman(r, s, p)).terms)
                    EXPECT_TRUE(t.base == Family::A || t.base == Family::G || t.base == Family::N);
            }
}

TEST(Lowering, QuasimodularFormMatchesSeries) {
    const std::size_t prec = 60;
    for (Roman r : kAllRoman)
        for (unsigned s = 1; s <= 5; ++s)
            for (unsigned p = 0; p <= 4; ++p) {
                if (!roman_admissible(r, s, p)) continue;
                const QMDecomposition qm = decomposition_to_qm(decompose_roman(r, s, p));
                EXPECT_EQ(qm_decomposition_to_qseries(qm, prec), roman_qexpansion(r, s, p, prec))
                    << roman_name(r) << " " << s << " " << p;
            }
}

TEST(Lowering, EisensteinForms) {
    // A_1 = -E2/24 + 1/24
    const EisensteinForm a1 = eisenstein_form(Family::A, 1);
    EXPECT_EQ(a1.poly, QMPoly::E2() * Rational(-1, 24));
    EXPECT_EQ(a1.constant, Rational(1, 24));
    const EisensteinForm g0 = eisenstein_form(Family::G, 0);
    EXPECT_EQ(g0.poly, QMPoly::G() * Rational(1, 4));
    EXPECT_EQ(g0.constant, Rational(-1, 4));
    EXPECT_THROW(eisenstein_form(Family::A, 2), DomainError);
    EXPECT_THROW(eisenstein_form(Family::B, 1), DomainError);
}
