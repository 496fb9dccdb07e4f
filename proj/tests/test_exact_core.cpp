#include <gtest/gtest.h>

#include <random>

#include "qmhyp/closed_form.hpp"
#include "qmhyp/fields.hpp"
#include "qmhyp/poly.hpp"

using namespace qmhyp;

namespace {

FieldElement gi() { return FieldElement::named(gaussian_field(), "i"); }
FieldElement sqrt2() { return FieldElement::named(gaussian_field(), "sqrt2"); }
FieldElement root4_2() { return FieldElement::named(gaussian_field(), "root4_2"); }

FieldElement random_element(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> num(-9, 9), den(1, 5);
    std::vector<Rational> c;
    for (std::size_t k = 0; k < gaussian_field()->degree(); ++k) c.emplace_back(num(rng), den(rng));
    return FieldElement(gaussian_field(), c);
}

}  // namespace

TEST(Rational, CanonicalForm) {
    EXPECT_EQ(Rational(6, -4).str(), "-3/2");
    EXPECT_EQ(Rational(0, 7).str(), "0/1");
    EXPECT_EQ(Rational(10, 5).pretty(), "2");
    EXPECT_THROW(Rational(1, 0), DomainError);
    EXPECT_EQ(Rational::parse("-12/18"), Rational(-2, 3));
    EXPECT_THROW(Rational::parse("x/2"), SchemaError);
}

TEST(Rational, RingLawsRandomized) {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<long> n(-1000, 1000), d(1, 999);
    for (int k = 0; k < 200; ++k) {
        const Rational a(n(rng), d(rng)), b(n(rng), d(rng)), c(n(rng), d(rng));
        EXPECT_EQ((a + b) + c, a + (b + c));
        EXPECT_EQ(a * (b + c), a * b + a * c);
        EXPECT_EQ(a * b, b * a);
        if (!b.is_zero()) {
            EXPECT_EQ(a / b * b, a);
        }
    }
}

TEST(Rational, BigPowers) {
    const Rational x = pow(Rational(3, 2), 200);
    EXPECT_EQ(x * pow(Rational(2, 3), 200), Rational(1));
    EXPECT_EQ(pow(Rational(2), -3), Rational(1, 8));
}

TEST(NumberField, DefiningRelations) {
    EXPECT_EQ(sqrt2() * sqrt2(), FieldElement(2));
    EXPECT_EQ(gi() * gi(), FieldElement(-1));
    EXPECT_EQ(pow(root4_2(), 4), FieldElement(2));
    EXPECT_EQ((FieldElement(1) + sqrt2()).inverse(), sqrt2() - FieldElement(1));
}

TEST(NumberField, InverseAndRingLawsRandomized) {
    std::mt19937_64 rng(11);
    for (int k = 0; k < 60; ++k) {
        const FieldElement a = random_element(rng), b = random_element(rng), c = random_element(rng);
        EXPECT_EQ(a * (b + c), a * b + a * c);
        EXPECT_EQ((a * b) * c, a * (b * c));
        if (!a.is_zero()) {
            EXPECT_EQ(a * a.inverse(), FieldElement(1));
        }
    }
}

TEST(NumberField, DivisionByZeroThrows) {
    EXPECT_THROW(FieldElement(gaussian_field(), std::vector<Rational>(8, Rational(0))).inverse(), DomainError);
}

TEST(NumberField, MismatchedFieldsThrow) {
    const FieldElement r5 = FieldElement::named(quadratic_field(5), "sqrt5");
    EXPECT_THROW(r5 + sqrt2(), FieldError);
}

TEST(NumberField, EmbeddingIsHomomorphism) {
    std::mt19937_64 rng(13);
    PrecisionScope ps(160);
    for (int k = 0; k < 20; ++k) {
        const FieldElement a = random_element(rng), b = random_element(rng);
        const Complex lhs = (a * b).embed(128), rhs = a.embed(128) * b.embed(128);
        EXPECT_LT(rel_diff(lhs, rhs), Real("1e-30"));
    }
    EXPECT_LT(abs(root4_2().embed(128).re - pow(Real(2), Real(0.25))), Real("1e-35"));
    EXPECT_LT(abs(gi().embed(128).im - Real(1)), Real("1e-35"));
}

TEST(NumberField, SquareRootsInField) {
    const auto r = field_sqrt(FieldElement(2).lifted(gaussian_field()));
    ASSERT_TRUE(r.has_value());
    EXPECT_EQ(*r * *r, FieldElement(2));
    const auto t = field_sqrt(FieldElement(3).lifted(gaussian_field()));
    EXPECT_FALSE(t.has_value());
    // 6 + 4 sqrt2 = (2 + sqrt2)^2
    const auto u = field_sqrt(FieldElement(6) + FieldElement(4) * sqrt2());
    ASSERT_TRUE(u.has_value());
    EXPECT_EQ(*u * *u, FieldElement(6) + FieldElement(4) * sqrt2());
}

TEST(NumberField, SquarefreeMinimalPolynomialRequired) {
    EXPECT_THROW(canonical_field({Integer(1), Integer(2), Integer(1)}, "-1", "0", 64), DomainError);
}

TEST(QPoly, GcdAndDivision) {
    const QPoly a({Rational(-1), Rational(0), Rational(1)});  // x^2 - 1
    const QPoly b({Rational(1), Rational(1)});                 // x + 1
    const auto [q, r] = a.divmod(b);
    EXPECT_TRUE(r.is_zero());
    EXPECT_EQ(q, QPoly({Rational(-1), Rational(1)}));
    EXPECT_EQ(gcd(a, b * b), b.monic());
    EXPECT_FALSE(is_squarefree(b * b));
}

TEST(ClosedForm, GradedProducts) {
    const ClosedForm o2 = ClosedForm::omega_pow(2);
    EXPECT_EQ(o2 * o2, ClosedForm::omega_pow(4));
    const ClosedForm t = ClosedForm::term(FieldElement(3), 0, -1);
    EXPECT_EQ(t * t, ClosedForm::term(FieldElement(9), 0, -2));
    EXPECT_TRUE((ClosedForm::term(FieldElement(12), 4, 0) * ClosedForm()).is_zero());
}

TEST(ClosedForm, ZeroTest) {
    EXPECT_TRUE((ClosedForm::omega_pow(4) - ClosedForm::omega_pow(4)).is_zero());
    EXPECT_FALSE((ClosedForm::omega_pow(4) - ClosedForm::omega_pow(2)).is_zero());
    const ClosedForm x = ClosedForm((sqrt2() - FieldElement(1)) * (sqrt2() + FieldElement(1))) - ClosedForm(1L);
    EXPECT_TRUE(x.is_zero());
}

TEST(ClosedForm, ProductExponentsAddRandomized) {
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<int> om(0, 6), pi(-4, 0), c(-5, 5);
    for (int k = 0; k < 50; ++k) {
        ClosedForm a, b;
        for (int j = 0; j < 3; ++j) {
            a += ClosedForm::term(FieldElement(c(rng)), om(rng), pi(rng));
            b += ClosedForm::term(FieldElement(c(rng)), om(rng), pi(rng));
        }
        const ClosedForm p = a * b;
        for (const auto& [key, v] : p.terms()) {
            EXPECT_FALSE(v.is_zero());
            EXPECT_GE(key.first, 0);
            EXPECT_LE(key.second, 0);
        }
        EXPECT_EQ(a * b, b * a);
        EXPECT_EQ(a * (b + a), a * b + a * a);
    }
}

TEST(ClosedForm, RejectsPositivePiExponent) { EXPECT_THROW(ClosedForm::term(FieldElement(1), 0, 1), DomainError); }

TEST(ClosedForm, DisplayOrder) {
    const ClosedForm x = ClosedForm::term(FieldElement(Rational(1, 120)), 0, -5) + ClosedForm::term(FieldElement(2), 12, 0) +
                         ClosedForm::term(FieldElement(Rational(1, 15)), 8, -2) + ClosedForm::term(FieldElement(-1), 8, -1);
    EXPECT_EQ(x.str(), "2*Omega^12 + 1/15*Omega^8*pi^-2 - Omega^8*pi^-1 + 1/120*pi^-5");
}
