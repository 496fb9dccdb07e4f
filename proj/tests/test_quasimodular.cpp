#include <gtest/gtest.h>

#include "qmhyp/quasimodular.hpp"

using namespace qmhyp;

namespace {

constexpr std::size_t kPrec = 80;

QMPoly E2() { return QMPoly::E2(); }
QMPoly E4() { return QMPoly::E4(); }
QMPoly E6() { return QMPoly::E6(); }

}  // namespace

TEST(Derivation, Level1Generators) {
    EXPECT_EQ(qm_derive(E2()), (E2() * E2() - E4()) * Rational(1, 12));
    EXPECT_EQ(qm_derive(E4()), (E2() * E4() - E6()) * Rational(1, 3));
    EXPECT_EQ(qm_derive(E6()), (E2() * E6() - E4() * E4()) * Rational(1, 2));
}

TEST(Derivation, AgreesWithSeriesDerivative) {
    for (int level : {1, 4})
        for (int idx = 0; idx < 3; ++idx) {
            const QMPoly g = QMPoly::gen(level, idx);
            for (unsigned t = 1; t <= 4; ++t)
                EXPECT_EQ(qm_to_qseries(qm_derive(g, t), kPrec), apply_D(qm_to_qseries(g, kPrec), t))
                    << "level " << level << " generator " << idx << " order " << t;
        }
}

TEST(Derivation, ThirdDerivativeOfE2) {
    EXPECT_EQ(qm_derive(E2(), 3).str(), "-1/96*E4^2 + 1/36*E6*E2 - 1/48*E4*E2^2 + 1/288*E2^4");
}

TEST(Derivation, LeibnizRule) {
    const QMPoly a = E2() * E4() + E6() * Rational(3), b = E4() * E4() - E2() * E6();
    EXPECT_EQ(qm_derive(a * b), qm_derive(a) * b + a * qm_derive(b));
    const QMPoly g = QMPoly::G(), h = QMPoly::H();
    const QMPoly c = g * h + QMPoly::E2(4), d = g * g * g - h * Rational(7);
    EXPECT_EQ(qm_derive(c * d), qm_derive(c) * d + c * qm_derive(d));
}

TEST(Ramanujan, HigherEisenstein) {
    EXPECT_EQ(ramanujan_E(4), E4());
    EXPECT_EQ(ramanujan_E(6), E6());
    EXPECT_EQ(ramanujan_E(8), E4() * E4());
    EXPECT_EQ(ramanujan_E(10), E4() * E6());
    EXPECT_EQ(ramanujan_E(14), E4() * E4() * E6());
    // E12 is not determined by weight alone; compare against its q-expansion
    for (unsigned k : {12u, 16u, 20u, 26u}) EXPECT_EQ(qm_to_qseries(ramanujan_E(k), kPrec), eisenstein_qexp(k, kPrec)) << k;
    EXPECT_THROW(ramanujan_E(5), DomainError);
}

TEST(Recognition, ExpressInGenerators) {
    const QMPoly e12 = express_in_generators(eisenstein_qexp(12, kPrec), 12, 1);
    EXPECT_EQ(e12, ramanujan_E(12));
    const QMPoly de4 = express_in_generators(apply_D(eisenstein_qexp(4, kPrec), 1), 6, 1, true);
    EXPECT_EQ(de4, qm_derive(E4()));
    const QSeries e5 = eisenstein_chi_qexp(ChiKind::ChiOne, 5, kPrec);
    const QMPoly p5 = express_in_generators(e5, 5, 4);
    EXPECT_EQ(qm_to_qseries(p5, kPrec), e5);
    EXPECT_TRUE(p5.e2_free());
}

TEST(Recognition, RejectsSeriesOutsideTheRing) {
    QSeries bad = eisenstein_qexp(4, kPrec);
    bad[6] += Rational(1);
    EXPECT_THROW(express_in_generators(bad, 4, 1), RecognitionError);
    EXPECT_THROW(express_in_generators(QSeries::monomial(1, 1, kPrec), 2, 4), RecognitionError);
}

TEST(Serre, ModularFormsStayModular) {
    EXPECT_EQ(serre_theta(E4(), 4), E6() * Rational(-1, 3));
    EXPECT_EQ(serre_theta(E6(), 6), E4() * E4() * Rational(-1, 2));
    EXPECT_TRUE(serre_theta(QMPoly::G(), 1).e2_free());
    EXPECT_TRUE(serre_theta(QMPoly::H(), 2).e2_free());
    EXPECT_THROW(serre_theta(E4(), 6), DomainError);
}

TEST(LevelFour, GeneratorsMatchSeries) {
    EXPECT_EQ(qm_to_qseries(QMPoly::G(), kPrec), g_qexp(kPrec));
    EXPECT_EQ(qm_to_qseries(QMPoly::H(), kPrec), h_qexp(kPrec));
    // E4 = G^4 + 224 G^2 H + 256 H^2 in the level-4 ring
    const QMPoly g = QMPoly::G(), h = QMPoly::H();
    const QMPoly e4 = pow(g, 4) + g * g * h * Rational(224) + h * h * Rational(256);
    EXPECT_EQ(qm_to_qseries(e4, kPrec), eisenstein_qexp(4, kPrec));
    EXPECT_EQ(express_in_generators(eisenstein_qexp(4, kPrec), 4, 4), e4);
}

TEST(LevelFour, WeightIsHomogeneous) {
    const QMPoly g = QMPoly::G(), h = QMPoly::H();
    EXPECT_EQ((g * h).weight(), std::optional<int>(3));
    EXPECT_FALSE((g + h).weight().has_value());
    EXPECT_THROW(QMPoly::G() + QMPoly::E4(), DomainError);
}
