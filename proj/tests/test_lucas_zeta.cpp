#include <gtest/gtest.h>

#include <algorithm>

#include "qmhyp/lucas_zeta.hpp"

using namespace qmhyp;

TEST(Sequences, FibonacciAndLucas) {
    const LucasParams fib = fibonacci_params();
    EXPECT_EQ(lucas_terms(fib, LucasKind::U, 10), FieldElement(55));
    EXPECT_EQ(lucas_terms(fib, LucasKind::U, 1), FieldElement(1));
    EXPECT_EQ(lucas_terms(fib, LucasKind::V, 4), FieldElement(7));
    EXPECT_EQ(lucas_terms(fib, LucasKind::V, 1), FieldElement(1));
    EXPECT_EQ(lucas_terms(silver_params(), LucasKind::V, 2), FieldElement(6));
    EXPECT_THROW(lucas_terms(fib, LucasKind::U, 0), DomainError);
    EXPECT_THROW(lucas_params_by_name("bronze"), DomainError);
}

TEST(Sequences, BadParametersRejected) {
    LucasParams p = fibonacci_params();
    p.sign = 1;
    EXPECT_THROW(p.validate(), DomainError);
    LucasParams q = fibonacci_params();
    std::swap(q.alpha, q.beta);
    EXPECT_THROW(q.validate(), DomainError);
}

TEST(Zeta, KnownConstants) {
    PrecisionScope ps(288);
    const Real eps("1e-60");
    const ZetaValue recip = zeta_direct(fibonacci_params(), LucasKind::U, 0, 1, eps);
    EXPECT_LT(abs(recip.value - Real("3.359885666243177553172011302918927179688905133732")), Real("1e-45"));
    const ZetaValue sq = zeta_direct(fibonacci_params(), LucasKind::U, 0, 2, eps);
    EXPECT_LT(abs(sq.value - Real("2.4263207511672411877415694129266203743202597745138")), Real("1e-45"));
    EXPECT_LT(sq.tail_bound, eps);
}

TEST(Zeta, LemmaAgreesWithDirectSum) {
    PrecisionScope ps(288);
    const Real eps("1e-60");
    for (const auto& params : {fibonacci_params(), silver_params()})
        for (LucasKind kind : {LucasKind::U, LucasKind::V})
            for (unsigned s = 1; s <= 4; ++s)
                for (unsigned p = 0; p <= 3; ++p) {
                    const LemmaValue v = zeta_via_lemma(params, kind, p, s, eps);
                    EXPECT_LT(v.residual, Real("1e-50") * abs(v.direct))
                        << params.name << " " << (kind == LucasKind::U ? "U" : "V") << " p=" << p << " s=" << s;
                }
}

TEST(Independence, ExceptionalTriples) {
    const IndepScanReport rep = indep_scan(80);
    EXPECT_TRUE(rep.first_family.empty());
    ASSERT_EQ(rep.second_family.size(), 1u);
    EXPECT_EQ(rep.second_family[0], Triple(4, 6, 8));
    EXPECT_EQ(rep.checked, 3003 + 76076);  // C(78,2) pairs and C(78,3) triples
    EXPECT_THROW(indep_scan(5), DomainError);
}

TEST(Independence, TripleVanishesExactly) {
    // 6/B6 - 20/B10 + 14/B14 = 252 - 264 + 12
    EXPECT_TRUE((Rational(6) / bernoulli(6) - Rational(20) / bernoulli(10) + Rational(14) / bernoulli(14)).is_zero());
}

TEST(Independence, PrefixStable) {
    const IndepScanReport small = indep_scan(30), large = indep_scan(90);
    for (const auto& t : small.second_family)
        EXPECT_NE(std::find(large.second_family.begin(), large.second_family.end(), t), large.second_family.end());
    EXPECT_EQ(small.first_family.size(), large.first_family.size());
}

TEST(F468, LiteralDefinitionGivesConstant) {
    // the literal f_s makes f4^2 f6^-4 f8^2 identically 1
    const auto c = f468_check(12);
    EXPECT_EQ(c[0], Rational(1));
    for (std::size_t k = 1; k < c.size(); ++k) EXPECT_TRUE(c[k].is_zero()) << k;
    EXPECT_THROW(f468_check(2), DomainError);
}

TEST(F468, EvenIndexIsShiftedEisenstein) {
    // for even s, f_s(z) = -E_{2s-2}(z + 1/2)
    for (unsigned s : {4u, 6u, 8u, 10u}) {
        const std::size_t prec = 120;
        QSeries shifted = eisenstein_qexp(2 * s - 2, prec);
        for (std::size_t e = 2; e < prec; e += 4) shifted[e] = -shifted[e];
        EXPECT_EQ(f_lucas_series(s, prec), shifted * Rational(-1)) << s;
    }
}
