#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "qmhyp/arith_tables.hpp"
#include "qmhyp/errors.hpp"
#include "qmhyp/number_field.hpp"
#include "qmhyp/rational.hpp"

namespace qmhyp {

/// Truncated power series in w = q^{1/2}. Coefficients of w^0 .. w^{prec-1} are known exactly.
template <class R>
class Series {
public:
    Series() = default;
    explicit Series(std::size_t prec) : c_(prec, R(0)) {}
    Series(std::size_t prec, std::vector<R> coeffs) : c_(std::move(coeffs)) { c_.resize(prec, R(0)); }

    static Series constant(const R& c, std::size_t prec) {
        Series s(prec);
        if (prec) s.c_[0] = c;
        return s;
    }
    /// c * w^e.
    static Series monomial(const R& c, std::size_t e, std::size_t prec) {
        Series s(prec);
        if (e < prec) s.c_[e] = c;
        return s;
    }

    [[nodiscard]] std::size_t prec() const { return c_.size(); }
    [[nodiscard]] const R& operator[](std::size_t k) const { return c_.at(k); }
    [[nodiscard]] R& operator[](std::size_t k) { return c_.at(k); }
    /// Coefficient of q^n (w^{2n}).
    [[nodiscard]] const R& q_coeff(std::size_t n) const { return c_.at(2 * n); }

    [[nodiscard]] bool is_zero() const {
        return std::all_of(c_.begin(), c_.end(), [](const R& x) { return x == R(0); });
    }
    /// True when every nonzero coefficient sits at an even w-exponent.
    [[nodiscard]] bool integral_q_support() const {
        for (std::size_t k = 1; k < c_.size(); k += 2)
            if (!(c_[k] == R(0))) return false;
        return true;
    }
    /// Smallest exponent carrying a nonzero coefficient, or prec() if none.
    [[nodiscard]] std::size_t valuation() const {
        for (std::size_t k = 0; k < c_.size(); ++k)
            if (!(c_[k] == R(0))) return k;
        return c_.size();
    }

    [[nodiscard]] Series truncated(std::size_t prec) const {
        Series s(*this);
        s.c_.resize(std::min(prec, c_.size()));
        return s;
    }

    Series& operator+=(const Series& o) {
        c_.resize(std::min(c_.size(), o.c_.size()));
        for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += o.c_[k];
        return *this;
    }
    Series& operator-=(const Series& o) {
        c_.resize(std::min(c_.size(), o.c_.size()));
        for (std::size_t k = 0; k < c_.size(); ++k) c_[k] -= o.c_[k];
        return *this;
    }
    Series& operator*=(const R& s) {
        for (auto& x : c_) x *= s;
        return *this;
    }
    friend Series operator+(Series a, const Series& b) { return a += b; }
    friend Series operator-(Series a, const Series& b) { return a -= b; }
    friend Series operator-(Series a) {
        for (auto& x : a.c_) x = -x;
        return a;
    }
    friend Series operator*(Series a, const R& s) { return a *= s; }
    friend Series operator*(const R& s, Series a) { return a *= s; }
    friend Series operator*(const Series& a, const Series& b) {
        const std::size_t n = std::min(a.prec(), b.prec());
        Series r(n);
        const std::size_t va = a.valuation(), vb = b.valuation();
        for (std::size_t i = va; i < n; ++i) {
            if (a.c_[i] == R(0)) continue;
            for (std::size_t j = vb; i + j < n; ++j)
                if (!(b.c_[j] == R(0))) r.c_[i + j] += a.c_[i] * b.c_[j];
        }
        return r;
    }
    Series& operator*=(const Series& o) { return *this = *this * o; }

    /// Equality on the common known range.
    friend bool operator==(const Series& a, const Series& b) {
        const std::size_t n = std::min(a.prec(), b.prec());
        for (std::size_t k = 0; k < n; ++k)
            if (!(a.c_[k] == b.c_[k])) return false;
        return true;
    }

    /// First w-exponent at which two series differ on their common range, or -1.
    [[nodiscard]] long first_difference(const Series& o) const {
        const std::size_t n = std::min(prec(), o.prec());
        for (std::size_t k = 0; k < n; ++k)
            if (!(c_[k] == o.c_[k])) return static_cast<long>(k);
        return -1;
    }

    [[nodiscard]] const std::vector<R>& coeffs() const { return c_; }

private:
    std::vector<R> c_;
};

using QSeries = Series<Rational>;

template <class R>
Series<R> pow(const Series<R>& f, unsigned e) {
    Series<R> r = Series<R>::constant(R(1), f.prec());
    Series<R> b = f;
    while (e) {
        if (e & 1) r *= b;
        e >>= 1;
        if (e) b *= b;
    }
    return r;
}

/// Multiplicative inverse; the constant term must be nonzero.
template <class R>
Series<R> invert(const Series<R>& f) {
    if (f.prec() == 0) return f;
    if (f[0] == R(0)) throw DomainError("series inverse needs a nonzero constant term");
    const std::size_t n = f.prec();
    Series<R> g(n);
    const R inv0 = R(1) / f[0];
    g[0] = inv0;
    for (std::size_t k = 1; k < n; ++k) {
        R s(0);
        for (std::size_t j = 1; j <= k; ++j)
            if (!(f[j] == R(0))) s += f[j] * g[k - j];
        g[k] = -(s * inv0);
    }
    return g;
}

/// The derivation q d/dq: the coefficient at w^a is multiplied by a/2.
template <class R>
Series<R> apply_D(const Series<R>& f) {
    Series<R> r(f);
    for (std::size_t k = 0; k < f.prec(); ++k) r[k] = f[k] * R(Rational(static_cast<long>(k), 2));
    return r;
}

template <class R>
Series<R> apply_D(const Series<R>& f, unsigned times) {
    Series<R> r(f);
    for (std::size_t k = 0; k < f.prec(); ++k) r[k] = f[k] * R(pow(Rational(static_cast<long>(k), 2), static_cast<long>(times)));
    return r;
}

/// Substitution q -> q^m for a positive rational m. The exponent a maps to m*a, which must be an
/// integer for every nonzero coefficient; the known range scales accordingly.
template <class R>
Series<R> apply_Vm(const Series<R>& f, const Rational& m) {
    if (m.sign() <= 0) throw DomainError("V_m needs m > 0");
    const Integer num = m.num(), den = m.den();
    const std::size_t mnum = num.get_ui(), mden = den.get_ui();
    // Known exponents a < prec map to m*a; the first unknown one is m*prec.
    const std::size_t new_prec = (f.prec() * mnum + mden - 1) / mden;
    Series<R> r(new_prec);
    for (std::size_t a = 0; a < f.prec(); ++a) {
        if (f[a] == R(0)) continue;
        if ((a * mnum) % mden != 0)
            throw DomainError("V_" + m.pretty() + " maps exponent " + std::to_string(a) + " off the w-lattice");
        const std::size_t e = a * mnum / mden;
        if (e < new_prec) r[e] = f[a];
    }
    return r;
}

template <class R>
Series<R> apply_Vm(const Series<R>& f, long m) {
    return apply_Vm(f, Rational(m));
}

/// Twist by the character modulo 4: the coefficient of q^n is multiplied by chi(n).
template <class R>
Series<R> twist_chi4(const Series<R>& f) {
    if (!f.integral_q_support()) throw DomainError("twist needs a series supported on integral powers of q");
    Series<R> r(f.prec());
    for (std::size_t k = 0; k < f.prec(); k += 2) {
        const int c = chi4(static_cast<long>(k / 2));
        if (c) r[k] = f[k] * R(c);
    }
    return r;
}

/// Converts a rational series to another coefficient ring.
template <class R>
Series<R> convert(const QSeries& f) {
    Series<R> r(f.prec());
    for (std::size_t k = 0; k < f.prec(); ++k) r[k] = R(f[k]);
    return r;
}

/// Extracts a rational series; throws if some coefficient is irrational.
inline QSeries to_rational(const Series<FieldElement>& f) {
    QSeries r(f.prec());
    for (std::size_t k = 0; k < f.prec(); ++k) r[k] = f[k].rational();
    return r;
}

}  // namespace qmhyp
