#pragma once

#include <array>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qmhyp/arith_tables.hpp"
#include "qmhyp/qseries.hpp"

namespace qmhyp {

/// Polynomial in the generators of a graded ring of quasimodular forms:
/// level 1 uses (E2, E4, E6) of weights (2, 4, 6); level 4 uses (E2, G, H) of weights (2, 1, 2).
class QMPoly {
public:
    using Exp = std::array<int, 3>;

    QMPoly() = default;
    explicit QMPoly(int level) : level_(level) { check_level(); }
    QMPoly(int level, const Rational& c) : level_(level) {
        check_level();
        if (!c.is_zero()) t_[{0, 0, 0}] = c;
    }
    static QMPoly gen(int level, int index, const Rational& c = 1) {
        QMPoly p(level);
        Exp e{0, 0, 0};
        e.at(static_cast<std::size_t>(index)) = 1;
        if (!c.is_zero()) p.t_[e] = c;
        return p;
    }
    static QMPoly monomial(int level, Exp e, const Rational& c = 1) {
        QMPoly p(level);
        if (!c.is_zero()) p.t_[e] = c;
        return p;
    }
    static QMPoly E2(int level = 1) { return gen(level, 0); }
    static QMPoly E4() { return gen(1, 1); }
    static QMPoly E6() { return gen(1, 2); }
    static QMPoly G() { return gen(4, 1); }
    static QMPoly H() { return gen(4, 2); }

    [[nodiscard]] int level() const { return level_; }
    [[nodiscard]] const std::map<Exp, Rational>& terms() const { return t_; }
    [[nodiscard]] bool is_zero() const { return t_.empty(); }
    [[nodiscard]] std::array<int, 3> weights() const {
        return level_ == 1 ? std::array<int, 3>{2, 4, 6} : std::array<int, 3>{2, 1, 2};
    }
    [[nodiscard]] int monomial_weight(const Exp& e) const {
        const auto w = weights();
        return w[0] * e[0] + w[1] * e[1] + w[2] * e[2];
    }
    /// The common weight of all monomials, or nullopt for a non-homogeneous polynomial. Zero has weight 0.
    [[nodiscard]] std::optional<int> weight() const {
        std::optional<int> w;
        for (const auto& [e, c] : t_) {
            const int k = monomial_weight(e);
            if (w && *w != k) return std::nullopt;
            w = k;
        }
        return w ? w : std::optional<int>(0);
    }
    [[nodiscard]] bool e2_free() const {
        for (const auto& [e, c] : t_)
            if (e[0] != 0) return false;
        return true;
    }
    [[nodiscard]] Rational coeff(const Exp& e) const {
        auto it = t_.find(e);
        return it == t_.end() ? Rational(0) : it->second;
    }

    void add(const Exp& e, const Rational& c) {
        if (c.is_zero()) return;
        auto [it, ins] = t_.try_emplace(e, c);
        if (!ins) {
            it->second += c;
            if (it->second.is_zero()) t_.erase(it);
        }
    }

    QMPoly& operator+=(const QMPoly& o) {
        adopt(o);
        for (const auto& [e, c] : o.t_) add(e, c);
        return *this;
    }
    QMPoly& operator-=(const QMPoly& o) {
        adopt(o);
        for (const auto& [e, c] : o.t_) add(e, -c);
        return *this;
    }
    QMPoly& operator*=(const Rational& s) {
        if (s.is_zero()) t_.clear();
        for (auto& [e, c] : t_) c *= s;
        return *this;
    }
    friend QMPoly operator+(QMPoly a, const QMPoly& b) { return a += b; }
    friend QMPoly operator-(QMPoly a, const QMPoly& b) { return a -= b; }
    friend QMPoly operator-(QMPoly a) { return a *= Rational(-1); }
    friend QMPoly operator*(QMPoly a, const Rational& s) { return a *= s; }
    friend QMPoly operator*(const Rational& s, QMPoly a) { return a *= s; }
    friend QMPoly operator*(const QMPoly& a, const QMPoly& b) {
        QMPoly r(a.level_);
        r.adopt(b);
        for (const auto& [ea, ca] : a.t_)
            for (const auto& [eb, cb] : b.t_) r.add({ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]}, ca * cb);
        return r;
    }
    QMPoly& operator*=(const QMPoly& o) { return *this = *this * o; }
    friend bool operator==(const QMPoly& a, const QMPoly& b) {
        if (a.t_.empty() && b.t_.empty()) return true;
        return a.level_ == b.level_ && a.t_ == b.t_;
    }

    /// Generator names for display.
    [[nodiscard]] std::array<const char*, 3> names() const {
        return level_ == 1 ? std::array<const char*, 3>{"E2", "E4", "E6"} : std::array<const char*, 3>{"E2", "G", "H"};
    }

    /// Monomials in display order: increasing E2 degree, then decreasing degree in the second generator.
    [[nodiscard]] std::vector<std::pair<Exp, Rational>> ordered_terms() const {
        std::vector<std::pair<Exp, Rational>> v(t_.begin(), t_.end());
        std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
            if (a.first[0] != b.first[0]) return a.first[0] < b.first[0];
            if (a.first[1] != b.first[1]) return a.first[1] > b.first[1];
            return a.first[2] > b.first[2];
        });
        return v;
    }

    [[nodiscard]] std::string str() const {
        if (t_.empty()) return "0";
        const auto nm = names();
        std::string out;
        for (const auto& [e, c] : ordered_terms()) {
            std::string mono;
            for (int k : {1, 2, 0}) {
                if (e[static_cast<std::size_t>(k)] == 0) continue;
                if (!mono.empty()) mono += "*";
                mono += nm[static_cast<std::size_t>(k)];
                if (e[static_cast<std::size_t>(k)] > 1) mono += "^" + std::to_string(e[static_cast<std::size_t>(k)]);
            }
            const bool neg = c.sign() < 0;
            const Rational m = neg ? -c : c;
            std::string piece = mono.empty() ? m.pretty() : (m == Rational(1) ? mono : m.pretty() + "*" + mono);
            if (out.empty()) out = neg ? "-" + piece : piece;
            else out += (neg ? " - " : " + ") + piece;
        }
        return out;
    }

private:
    void check_level() const {
        if (level_ != 1 && level_ != 4) throw DomainError("quasimodular ring level must be 1 or 4");
    }
    void adopt(const QMPoly& o) {
        if (o.t_.empty()) return;
        if (t_.empty()) {
            level_ = o.level_;
            return;
        }
        if (level_ != o.level_) throw DomainError("cannot combine level-1 and level-4 polynomials");
    }

    int level_ = 1;
    std::map<Exp, Rational> t_;
};

inline QMPoly pow(const QMPoly& p, unsigned e) {
    QMPoly r(p.level(), Rational(1));
    for (unsigned k = 0; k < e; ++k) r *= p;
    return r;
}

/// Derivatives of the generators under q d/dq.
inline QMPoly generator_derivative(int level, int index) {
    const auto E2 = QMPoly::E2(level);
    if (level == 1) {
        const auto E4 = QMPoly::E4(), E6 = QMPoly::E6();
        switch (index) {
            case 0: return (E2 * E2 - E4) * Rational(1, 12);
            case 1: return (E2 * E4 - E6) * Rational(1, 3);
            default: return (E2 * E6 - E4 * E4) * Rational(1, 2);
        }
    }
    const auto G = QMPoly::G(), H = QMPoly::H();
    switch (index) {
        case 0:
            return pow(G, 4) * Rational(-1, 12) - G * G * H * Rational(56, 3) - H * H * Rational(64, 3) +
                   E2 * E2 * Rational(1, 12);
        case 1: return pow(G, 3) * Rational(-1, 12) + G * H * Rational(20, 3) + G * E2 * Rational(1, 12);
        default: return G * G * H * Rational(5, 6) - H * H * Rational(8, 3) + H * E2 * Rational(1, 6);
    }
}

/// The derivation D = q d/dq on the graded ring.
inline QMPoly qm_derive(const QMPoly& p) {
    QMPoly r(p.level());
    for (const auto& [e, c] : p.terms()) {
        for (int k = 0; k < 3; ++k) {
            if (e[static_cast<std::size_t>(k)] == 0) continue;
            QMPoly::Exp lower = e;
            lower[static_cast<std::size_t>(k)] -= 1;
            r += QMPoly::monomial(p.level(), lower, c * Rational(e[static_cast<std::size_t>(k)])) *
                 generator_derivative(p.level(), k);
        }
    }
    return r;
}

inline QMPoly qm_derive(const QMPoly& p, unsigned times) {
    QMPoly r = p;
    for (unsigned k = 0; k < times; ++k) r = qm_derive(r);
    return r;
}

/// Serre derivative of a homogeneous polynomial of weight k.
inline QMPoly serre_theta(const QMPoly& p, int k) {
    const auto w = p.weight();
    if (!w || (!p.is_zero() && *w != k)) throw DomainError("Serre derivative needs a homogeneous input of weight " + std::to_string(k));
    QMPoly r = qm_derive(p) - QMPoly::E2(p.level()) * p * Rational(k, 12);
    if (p.e2_free() && !r.e2_free()) throw DomainError("Serre derivative of a modular form left the modular ring");
    return r;
}

/// q-expansions of the three generators of a level.
inline std::array<QSeries, 3> generator_qexps(int level, std::size_t prec) {
    if (level == 1) return {eisenstein_qexp(2, prec), eisenstein_qexp(4, prec), eisenstein_qexp(6, prec)};
    return {eisenstein_qexp(2, prec), g_qexp(prec), h_qexp(prec)};
}

inline QSeries qm_to_qseries(const QMPoly& p, std::size_t prec = kDefaultPrec) {
    const auto gens = generator_qexps(p.level(), prec);
    std::array<std::vector<QSeries>, 3> powers;
    auto power = [&](int k, int e) -> const QSeries& {
        auto& v = powers[static_cast<std::size_t>(k)];
        if (v.empty()) v.push_back(QSeries::constant(1, prec));
        while (static_cast<int>(v.size()) <= e) v.push_back(v.back() * gens[static_cast<std::size_t>(k)]);
        return v[static_cast<std::size_t>(e)];
    };
    QSeries r(prec);
    for (const auto& [e, c] : p.terms()) {
        QSeries m = power(0, e[0]) * power(1, e[1]) * power(2, e[2]);
        r += m * c;
    }
    return r;
}

/// E_k (k >= 4 even) as a polynomial in E4, E6 by Ramanujan's recurrence for
/// F_n = -B_n / (2n (n-2)!) E_n:  (n-2)(n+5) F_{n+4} = 12 sum_{a+b=n+4} F_a F_b.
inline QMPoly ramanujan_E(unsigned k) {
    if (k < 4 || k % 2) throw DomainError("Ramanujan recurrence needs even k >= 4");
    static std::mutex mu;
    static std::map<unsigned, QMPoly> F;
    std::lock_guard lock(mu);
    if (F.empty()) {
        F[4] = QMPoly::E4() * Rational(1, 480);
        F[6] = QMPoly::E6() * Rational(-1, 12096);
    }
    for (unsigned m = 8; m <= k; m += 2) {
        if (F.count(m)) continue;
        const unsigned n = m - 4;
        QMPoly s(1);
        for (unsigned a = 4; a + 4 <= m; a += 2) s += F.at(a) * F.at(m - a);
        F[m] = s * Rational(12, static_cast<long>((n - 2) * (n + 5)));
    }
    const Rational scale = Rational(-2 * static_cast<long>(k)) * Rational(factorial(k - 2)) / bernoulli(k);
    return F.at(k) * scale;
}

/// Monomials of a given weight; with_e2 includes powers of E2.
inline std::vector<QMPoly::Exp> weight_basis(int level, int weight, bool with_e2) {
    std::vector<QMPoly::Exp> out;
    const QMPoly probe(level);
    const auto w = probe.weights();
    for (int c = 0; c * 2 <= weight; ++c) {
        if (c > 0 && !with_e2) break;
        for (int a = 0; a * w[1] + 2 * c <= weight; ++a) {
            const int rest = weight - 2 * c - a * w[1];
            if (rest % w[2] == 0) out.push_back({c, a, rest / w[2]});
        }
    }
    return out;
}

/// Writes a q-series as a combination of the weight-k monomials by an exact linear solve over its
/// q-coefficients. Throws RecognitionError if the series is not in the span (naming the first
/// mismatching coefficient) or if the precision cannot pin the combination down.
inline QMPoly express_in_generators(const QSeries& target, int weight, int level, bool with_e2 = false) {
    const auto basis = weight_basis(level, weight, with_e2);
    if (!target.integral_q_support()) throw RecognitionError("series has half-integral exponents; not in the ring");
    const std::size_t n = basis.size();
    const std::size_t avail = (target.prec() + 1) / 2;
    if (n == 0) {
        if (target.is_zero()) return QMPoly(level);
        throw RecognitionError("no monomials of weight " + std::to_string(weight) + "; series is nonzero");
    }
    const std::size_t rows = std::min(avail, 2 * n + 10);
    if (rows < n) throw RecognitionError("not enough coefficients to determine the combination");
    const std::size_t prec = 2 * rows;
    std::vector<QSeries> cols;
    for (const auto& e : basis) cols.push_back(qm_to_qseries(QMPoly::monomial(level, e), prec));

    // Pick independent rows greedily in q-order and solve the square system.
    std::vector<std::vector<Rational>> red;  // reduced rows (row-echelon), with rhs appended
    std::vector<std::size_t> pivots;
    for (std::size_t r = 0; r < rows && pivots.size() < n; ++r) {
        std::vector<Rational> row(n + 1);
        for (std::size_t j = 0; j < n; ++j) row[j] = cols[j][2 * r];
        row[n] = target[2 * r];
        for (std::size_t i = 0; i < red.size(); ++i) {
            const Rational f = row[pivots[i]];
            if (f.is_zero()) continue;
            for (std::size_t j = 0; j <= n; ++j) row[j] -= f * red[i][j];
        }
        std::size_t p = 0;
        while (p < n && row[p].is_zero()) ++p;
        if (p == n) continue;
        const Rational lead = row[p];
        for (auto& x : row) x /= lead;
        for (std::size_t i = 0; i < red.size(); ++i) {
            const Rational f = red[i][p];
            if (f.is_zero()) continue;
            for (std::size_t j = 0; j <= n; ++j) red[i][j] -= f * row[j];
        }
        red.push_back(std::move(row));
        pivots.push_back(p);
    }
    if (pivots.size() < n) throw RecognitionError("underdetermined system: raise the precision");
    QMPoly out(level);
    for (std::size_t i = 0; i < n; ++i) out.add(basis[pivots[i]], red[i][n]);
    const QSeries back = qm_to_qseries(out, target.prec());
    const long diff = back.first_difference(target);
    if (diff >= 0)
        throw RecognitionError("series is not in the weight-" + std::to_string(weight) + " ring: first mismatch at w^" +
                               std::to_string(diff));
    return out;
}

/// Polynomial in two variables, used for the (x, y)-coordinate form of the derivation.
using XYPoly = std::map<std::pair<int, int>, Rational>;

namespace detail {

inline void xy_add(XYPoly& p, std::pair<int, int> e, const Rational& c) {
    if (c.is_zero()) return;
    auto [it, ins] = p.try_emplace(e, c);
    if (!ins) {
        it->second += c;
        if (it->second.is_zero()) p.erase(it);
    }
}

/// Applies  k*m0 + m1 d/dx + m2 d/dy  with the multipliers given as XYPolys.
inline XYPoly xy_apply(const XYPoly& f, const Rational& k, const XYPoly& m0, const XYPoly& m1, const XYPoly& m2) {
    XYPoly r;
    for (const auto& [e, c] : f) {
        for (const auto& [e0, c0] : m0) xy_add(r, {e.first + e0.first, e.second + e0.second}, k * c * c0);
        if (e.first > 0)
            for (const auto& [e1, c1] : m1)
                xy_add(r, {e.first - 1 + e1.first, e.second + e1.second}, c * Rational(e.first) * c1);
        if (e.second > 0)
            for (const auto& [e2, c2] : m2)
                xy_add(r, {e.first + e2.first, e.second - 1 + e2.second}, c * Rational(e.second) * c2);
    }
    return r;
}

}  // namespace detail

/// Iterates the coordinate-form operator: with x = E4/E2^2, y = E6/E2^3 at level 1 and
/// x = G/E2^{1/2}, y = H/E2 at level 4, returns f_n for D^n(E2^{k/2} f0(x, y)).
inline XYPoly xy_derivative_coefficients(int level, int k, const XYPoly& f0, unsigned n) {
    using detail::xy_add;
    XYPoly m0, m1, m2;
    if (level == 1) {
        xy_add(m0, {0, 0}, Rational(1, 24));
        xy_add(m0, {1, 0}, Rational(-1, 24));
        xy_add(m1, {2, 0}, Rational(1, 6));
        xy_add(m1, {1, 0}, Rational(1, 6));
        xy_add(m1, {0, 1}, Rational(-1, 3));
        xy_add(m2, {1, 1}, Rational(1, 4));
        xy_add(m2, {2, 0}, Rational(-1, 2));
        xy_add(m2, {0, 1}, Rational(1, 4));
    } else {
        xy_add(m0, {4, 0}, Rational(-1, 24));
        xy_add(m0, {2, 1}, Rational(-28, 3));
        xy_add(m0, {0, 2}, Rational(-32, 3));
        xy_add(m0, {0, 0}, Rational(1, 24));
        xy_add(m1, {5, 0}, Rational(1, 24));
        xy_add(m1, {3, 1}, Rational(28, 3));
        xy_add(m1, {3, 0}, Rational(-1, 12));
        xy_add(m1, {1, 2}, Rational(32, 3));
        xy_add(m1, {1, 1}, Rational(20, 3));
        xy_add(m1, {1, 0}, Rational(1, 24));
        xy_add(m2, {4, 1}, Rational(1, 12));
        xy_add(m2, {2, 2}, Rational(56, 3));
        xy_add(m2, {2, 1}, Rational(5, 6));
        xy_add(m2, {0, 3}, Rational(64, 3));
        xy_add(m2, {0, 2}, Rational(-8, 3));
        xy_add(m2, {0, 1}, Rational(1, 12));
    }
    XYPoly f = f0;
    for (unsigned j = 0; j < n; ++j) f = detail::xy_apply(f, Rational(k + 2 * static_cast<int>(j)), m0, m1, m2);
    return f;
}

/// Converts E2^{w/2} f(x, y) back to a ring polynomial (w the total weight).
inline QMPoly xy_to_qmpoly(int level, int weight, const XYPoly& f) {
    QMPoly r(level);
    for (const auto& [e, c] : f) {
        // level 1: x^a y^b -> E2^{w/2-2a-3b} E4^a E6^b ; level 4: E2^{w/2-a/2-b} G^a H^b
        const int twice_e2 = level == 1 ? weight - 4 * e.first - 6 * e.second : weight - e.first - 2 * e.second;
        if (twice_e2 < 0 || twice_e2 % 2) throw DomainError("coordinate polynomial does not lift to the ring");
        r.add({twice_e2 / 2, e.first, e.second}, c);
    }
    return r;
}

}  // namespace qmhyp
