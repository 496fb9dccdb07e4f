#pragma once

#include <numeric>
#include <string>
#include <vector>

#include "qmhyp/arith_tables.hpp"
#include "qmhyp/qseries.hpp"
#include "qmhyp/quasimodular.hpp"

namespace qmhyp {

enum class HeckeVariant { T, TStar };

/// Hecke operator on an integral-q series of weight k with nebentypus character; the output has
/// roughly 1/n of the input's q-precision.
inline QSeries hecke_T(const QSeries& f, long n, int k, int level, Character chi, HeckeVariant variant = HeckeVariant::T) {
    if (n < 1) throw DomainError("Hecke index must be positive");
    if (!f.integral_q_support()) throw DomainError("Hecke operators need integral q-support");
    if (variant == HeckeVariant::TStar) {
        QSeries acc;
        bool first = true;
        for (long d = 1; d * d <= n; ++d) {
            if (n % (d * d)) continue;
            const int mu = mobius(d);
            if (!mu) continue;
            QSeries t = hecke_T(f, n / (d * d), k, level, chi, HeckeVariant::T);
            // Möbius weight mu(d) d^{k-2} chi(d)
            Rational w = Rational(mu * char_value(chi, d)) * pow(Rational(d), k - 2);
            if (first) {
                acc = t * w;
                first = false;
            } else {
                acc += t * w;
            }
        }
        return acc;
    }
    const std::size_t qprec = (f.prec() + 1) / 2;  // q-coefficients 0..qprec-1 known
    const std::size_t out_q = (qprec - 1) / static_cast<std::size_t>(n) + 1;
    QSeries r(2 * out_q - 1);
    for (std::size_t m = 0; m < out_q; ++m) {
        Rational s;
        const long mm = static_cast<long>(m);
        if (mm == 0) {
            // a_0(T_n f) = sum_{d | n} chi(d) d^{k-1} a_0
            for (long d : divisors(n)) {
                if (std::gcd(d, static_cast<long>(level)) != 1 && chi != Character::Trivial) continue;
                s += Rational(char_value(chi, d)) * pow(Rational(d), k - 1) * f[0];
            }
        } else {
            for (long d : divisors(std::gcd(mm, n))) {
                const int c = char_value(chi, d);
                if (!c || std::gcd(d, static_cast<long>(level)) != 1) continue;
                s += Rational(c) * pow(Rational(d), k - 1) * f.q_coeff(static_cast<std::size_t>(mm * n / (d * d)));
            }
        }
        r[2 * m] = s;
    }
    return r;
}

/// Monic polynomial sum_j a_j X^{d-j} whose roots are the transforms of a form under the coset
/// representatives of determinant-n matrices.
struct TransformationPolynomial {
    long n = 2;
    int k = 0;
    int level = 1;
    Character chi = Character::Trivial;
    std::vector<QMPoly> coeffs;   // a_0 .. a_d
    std::vector<QSeries> series;  // the same coefficients as q-series

    [[nodiscard]] std::size_t degree() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }

    [[nodiscard]] std::string str(const std::string& var = "X") const {
        std::string out;
        const std::size_t d = degree();
        for (std::size_t j = 0; j <= d; ++j) {
            const std::size_t e = d - j;
            std::string xpow = e == 0 ? "" : (e == 1 ? var : var + "^" + std::to_string(e));
            for (const auto& [ex, c] : coeffs[j].ordered_terms()) {
                const bool neg = c.sign() < 0;
                const Rational m = neg ? -c : c;
                const std::string mono = QMPoly::monomial(coeffs[j].level(), ex).str();
                std::string piece;
                std::vector<std::string> parts;
                if (m != Rational(1) || (mono == "1" && xpow.empty())) parts.push_back(m.pretty());
                if (mono != "1") parts.push_back(mono);
                if (!xpow.empty()) parts.push_back(xpow);
                for (std::size_t i = 0; i < parts.size(); ++i) piece += (i ? "*" : "") + parts[i];
                if (out.empty()) out = neg ? "-" + piece : piece;
                else out += (neg ? " - " : " + ") + piece;
            }
        }
        return out.empty() ? "0" : out;
    }
};

/// Number of cosets: n prod_{p | n, p not dividing level} (1 + 1/p).
inline long coset_count(long n, int level) {
    Rational d(n);
    for (long p : prime_divisors(n))
        if (level % p != 0) d *= Rational(p + 1, p);
    if (!d.is_integer()) throw DomainError("coset count is not an integer");
    return d.num().get_si();
}

/// Transformation polynomial of lambda * g|V_n + mu * g through the Newton-identity recurrence on
/// Hecke images of powers of g. Each coefficient is recognized in the ring of the given level
/// (first without E2, then with E2 for quasimodular inputs).
inline TransformationPolynomial psi_polynomial(const QSeries& g, long n, int k, int level, Character chi,
                                               const Rational& lambda = 1, const Rational& mu = 0) {
    if (std::gcd(n, static_cast<long>(level)) != 1)
        throw DomainError("the Hecke recurrence needs gcd(n, level) = 1");
    const long d = coset_count(n, level);
    TransformationPolynomial tp;
    tp.n = n;
    tp.k = k;
    tp.level = level;
    tp.chi = chi;

    const int max_weight = static_cast<int>(d) * k;
    const std::size_t basis = weight_basis(level, max_weight, true).size();
    const std::size_t need_w = 2 * basis + 16;
    const std::size_t in_w = static_cast<std::size_t>(n) * (need_w + 2) + 2;
    if (g.prec() < in_w) throw DomainError("input series has too few coefficients for the recurrence");
    const QSeries gg = g.truncated(in_w);

    // power sums of the plain transforms x_gamma
    std::vector<QSeries> px(static_cast<std::size_t>(d) + 1);
    px[0] = QSeries::constant(Rational(d), need_w);
    QSeries gr = QSeries::constant(1, in_w);
    for (long r = 1; r <= d; ++r) {
        gr *= gg;
        const Character cr = (chi == Character::Chi4 && r % 2 == 1) ? Character::Chi4 : Character::Trivial;
        QSeries t = hecke_T(gr, n, static_cast<int>(r) * k, level, cr, HeckeVariant::TStar).truncated(need_w);
        // conj(chi)^r(n) n^{1-kr}
        const Rational w = Rational(cr == Character::Chi4 ? chi4(n) : 1) * pow(Rational(n), 1 - k * r);
        px[static_cast<std::size_t>(r)] = t * w;
    }
    // power sums of y = lambda x + mu g
    std::vector<QSeries> py(px.size());
    const QSeries gshort = g.truncated(need_w);
    for (std::size_t r = 0; r < px.size(); ++r) {
        QSeries acc(need_w);
        for (std::size_t i = 0; i <= r; ++i) {
            const Rational c = Rational(binomial(r, i)) * pow(lambda, static_cast<long>(i)) *
                               pow(mu, static_cast<long>(r - i));
            if (c.is_zero()) continue;
            acc += px[i] * pow(gshort, static_cast<unsigned>(r - i)) * c;
        }
        py[r] = acc;
    }
    tp.series.push_back(QSeries::constant(1, need_w));
    for (long j = 1; j <= d; ++j) {
        QSeries acc(need_w);
        for (long r = 1; r <= j; ++r) acc += py[static_cast<std::size_t>(r)] * tp.series[static_cast<std::size_t>(j - r)];
        tp.series.push_back(acc * Rational(-1, j));
    }
    tp.coeffs.push_back(QMPoly::monomial(level, {0, 0, 0}, 1));
    for (long j = 1; j <= d; ++j) {
        const QSeries& s = tp.series[static_cast<std::size_t>(j)];
        const int wt = static_cast<int>(j) * k;
        try {
            tp.coeffs.push_back(express_in_generators(s, wt, level, false));
        } catch (const RecognitionError&) {
            try {
                tp.coeffs.push_back(express_in_generators(s, wt, level, true));
            } catch (const RecognitionError& e) {
                throw RecognitionError("coefficient a_" + std::to_string(j) + " not recognized: " + e.what());
            }
        }
    }
    return tp;
}

/// Rescales Psi for g|V_n into Phi for g: a_j -> chi^j(n) n^{kj/2} a_j.
inline TransformationPolynomial phi_from_psi(const TransformationPolynomial& psi) {
    TransformationPolynomial out = psi;
    for (std::size_t j = 1; j < psi.coeffs.size(); ++j) {
        const long kj = static_cast<long>(psi.k) * static_cast<long>(j);
        if (kj % 2 != 0) {
            const Integer nn(psi.n);
            if (!mpz_perfect_square_p(nn.get_mpz_t()))
                throw DomainError("n^{kj/2} is irrational for this coefficient");
        }
        Rational f = kj % 2 == 0 ? pow(Rational(psi.n), kj / 2)
                                 : pow(Rational(Integer(sqrt(Integer(psi.n)))), kj);
        if (psi.chi == Character::Chi4 && j % 2 == 1) f *= Rational(chi4(psi.n));
        out.coeffs[j] = psi.coeffs[j] * f;
        out.series[j] = psi.series[j] * f;
    }
    return out;
}

inline TransformationPolynomial psi_from_phi(const TransformationPolynomial& phi) {
    TransformationPolynomial out = phi;
    for (std::size_t j = 1; j < phi.coeffs.size(); ++j) {
        const long kj = static_cast<long>(phi.k) * static_cast<long>(j);
        Rational f = kj % 2 == 0 ? pow(Rational(phi.n), kj / 2)
                                 : pow(Rational(Integer(sqrt(Integer(phi.n)))), kj);
        if (phi.chi == Character::Chi4 && j % 2 == 1) f *= Rational(chi4(phi.n));
        const Rational inv = Rational(1) / f;
        out.coeffs[j] = phi.coeffs[j] * inv;
        out.series[j] = phi.series[j] * inv;
    }
    return out;
}

/// First w-exponent where sum_j c_j root^{d-j} fails to vanish, or -1.
inline long polynomial_residual(const QSeries& root, const std::vector<QSeries>& coeffs) {
    const std::size_t d = coeffs.size() - 1;
    std::size_t prec = root.prec();
    for (const auto& c : coeffs) prec = std::min(prec, c.prec());
    QSeries acc(prec);
    for (std::size_t j = 0; j <= d; ++j)
        acc += coeffs[j] * pow(root.truncated(prec), static_cast<unsigned>(d - j));
    return acc.first_difference(QSeries(prec));
}

struct Level4PsiReport {
    long g_first_failure = -1;  // w-exponent, -1 when the identity holds
    long h_first_failure = -1;
    std::size_t terms = 0;
    [[nodiscard]] bool ok() const { return g_first_failure < 0 && h_first_failure < 0; }
};

/// The degree-two polynomials with roots G(2z) and H(2z):
/// X^2 - G X + 4H and X^2 + (H/2 - G^2/16) X + H^2/16.
inline std::vector<QMPoly> level4_psi_g() {
    return {QMPoly::monomial(4, {0, 0, 0}), -QMPoly::G(), QMPoly::H() * Rational(4)};
}
inline std::vector<QMPoly> level4_psi_h() {
    return {QMPoly::monomial(4, {0, 0, 0}), QMPoly::H() * Rational(1, 2) - QMPoly::G() * QMPoly::G() * Rational(1, 16),
            QMPoly::H() * QMPoly::H() * Rational(1, 16)};
}

/// Checks the two level-4 polynomials against q-expansions to n_terms coefficients of q.
inline Level4PsiReport verify_level4_psi(std::size_t n_terms, const std::vector<QMPoly>& g_poly = level4_psi_g(),
                                         const std::vector<QMPoly>& h_poly = level4_psi_h()) {
    const std::size_t prec = 2 * n_terms;
    auto lower = [&](const std::vector<QMPoly>& ps) {
        std::vector<QSeries> out;
        for (const auto& p : ps) out.push_back(qm_to_qseries(p, prec));
        return out;
    };
    Level4PsiReport rep;
    rep.terms = n_terms;
    rep.g_first_failure = polynomial_residual(apply_Vm(g_qexp((prec + 1) / 2 + 1), 2).truncated(prec), lower(g_poly));
    rep.h_first_failure = polynomial_residual(apply_Vm(h_qexp((prec + 1) / 2 + 1), 2).truncated(prec), lower(h_poly));
    return rep;
}

}  // namespace qmhyp
