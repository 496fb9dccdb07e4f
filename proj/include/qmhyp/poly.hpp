#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qmhyp/rational.hpp"

namespace qmhyp {

/// Dense univariate polynomial over the rationals, coefficients in increasing degree.
class QPoly {
public:
    QPoly() = default;
    explicit QPoly(std::vector<Rational> c) : c_(std::move(c)) { trim(); }
    static QPoly monomial(const Rational& c, std::size_t deg) {
        std::vector<Rational> v(deg + 1);
        v[deg] = c;
        return QPoly(std::move(v));
    }
    static QPoly from_integers(const std::vector<Integer>& c) {
        std::vector<Rational> v;
        v.reserve(c.size());
        for (const auto& z : c) v.emplace_back(z);
        return QPoly(std::move(v));
    }

    [[nodiscard]] bool is_zero() const { return c_.empty(); }
    /// Degree; -1 for the zero polynomial.
    [[nodiscard]] long degree() const { return static_cast<long>(c_.size()) - 1; }
    [[nodiscard]] const std::vector<Rational>& coeffs() const { return c_; }
    [[nodiscard]] Rational coeff(std::size_t k) const { return k < c_.size() ? c_[k] : Rational(0); }
    [[nodiscard]] Rational lead() const { return c_.empty() ? Rational(0) : c_.back(); }

    [[nodiscard]] Rational eval(const Rational& x) const {
        Rational r;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * x + *it;
        return r;
    }

    [[nodiscard]] QPoly derivative() const {
        if (c_.size() <= 1) return {};
        std::vector<Rational> d(c_.size() - 1);
        for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * Rational(static_cast<long>(k));
        return QPoly(std::move(d));
    }

    [[nodiscard]] QPoly monic() const {
        if (c_.empty()) return {};
        const Rational l = lead();
        std::vector<Rational> v(c_);
        for (auto& x : v) x /= l;
        return QPoly(std::move(v));
    }

    friend QPoly operator+(const QPoly& a, const QPoly& b) {
        std::vector<Rational> v(std::max(a.c_.size(), b.c_.size()));
        for (std::size_t k = 0; k < a.c_.size(); ++k) v[k] += a.c_[k];
        for (std::size_t k = 0; k < b.c_.size(); ++k) v[k] += b.c_[k];
        return QPoly(std::move(v));
    }
    friend QPoly operator-(const QPoly& a) {
        std::vector<Rational> v(a.c_);
        for (auto& x : v) x = -x;
        return QPoly(std::move(v));
    }
    friend QPoly operator-(const QPoly& a, const QPoly& b) { return a + (-b); }
    friend QPoly operator*(const QPoly& a, const QPoly& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<Rational> v(a.c_.size() + b.c_.size() - 1);
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (a.c_[i].is_zero()) continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j) v[i + j] += a.c_[i] * b.c_[j];
        }
        return QPoly(std::move(v));
    }
    friend bool operator==(const QPoly& a, const QPoly& b) { return a.c_ == b.c_; }

    /// Euclidean division; throws on a zero divisor.
    [[nodiscard]] std::pair<QPoly, QPoly> divmod(const QPoly& d) const {
        if (d.is_zero()) throw DomainError("polynomial division by zero");
        std::vector<Rational> r(c_);
        const long dd = d.degree();
        if (degree() < dd) return {QPoly(), *this};
        std::vector<Rational> q(static_cast<std::size_t>(degree() - dd + 1));
        const Rational l = d.lead();
        for (long k = degree(); k >= dd; --k) {
            const Rational f = r[static_cast<std::size_t>(k)] / l;
            q[static_cast<std::size_t>(k - dd)] = f;
            if (f.is_zero()) continue;
            for (long j = 0; j <= dd; ++j) r[static_cast<std::size_t>(k - dd + j)] -= f * d.c_[static_cast<std::size_t>(j)];
        }
        return {QPoly(std::move(q)), QPoly(std::move(r))};
    }

    [[nodiscard]] std::string str(const std::string& var = "x") const {
        if (c_.empty()) return "0";
        std::string out;
        for (long k = degree(); k >= 0; --k) {
            const Rational& a = c_[static_cast<std::size_t>(k)];
            if (a.is_zero()) continue;
            const bool neg = a.sign() < 0;
            const Rational m = neg ? -a : a;
            if (out.empty()) out += neg ? "-" : "";
            else out += neg ? " - " : " + ";
            const bool unit = (m == Rational(1)) && k > 0;
            if (!unit) out += m.pretty();
            if (k > 0) {
                if (!unit) out += "*";
                out += var;
                if (k > 1) out += "^" + std::to_string(k);
            }
        }
        return out;
    }

private:
    void trim() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }
    std::vector<Rational> c_;
};

/// Monic greatest common divisor.
inline QPoly gcd(QPoly a, QPoly b) {
    while (!b.is_zero()) {
        auto r = a.divmod(b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

/// Returns (g, s) with s*a ≡ g (mod m), g = gcd(a, m) monic.
inline std::pair<QPoly, QPoly> ext_gcd_mod(const QPoly& a, const QPoly& m) {
    QPoly r0 = m, r1 = a;
    QPoly s0, s1(std::vector<Rational>{Rational(1)});
    while (!r1.is_zero()) {
        auto [q, r] = r0.divmod(r1);
        QPoly s = s0 - q * s1;
        r0 = std::move(r1);
        r1 = std::move(r);
        s0 = std::move(s1);
        s1 = std::move(s);
    }
    const Rational l = r0.lead();
    QPoly inv_l(std::vector<Rational>{Rational(1) / l});
    return {r0 * inv_l, s0 * inv_l};
}

inline bool is_squarefree(const QPoly& f) { return gcd(f, f.derivative()).degree() == 0; }

}  // namespace qmhyp
