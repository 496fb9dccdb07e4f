#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>

#include "qmhyp/errors.hpp"

namespace qmhyp {

using Integer = mpz_class;

/// Exact rational number, always in lowest terms with a positive denominator.
class Rational {
public:
    Rational() = default;
    Rational(long v) : v_(v) {}  // NOLINT(google-explicit-constructor)
    Rational(int v) : v_(v) {}   // NOLINT(google-explicit-constructor)
    Rational(const Integer& v) : v_(v) {}  // NOLINT(google-explicit-constructor)
    Rational(const Integer& num, const Integer& den) {
        if (den == 0) throw DomainError("rational with zero denominator");
        v_ = mpq_class(num, den);
        v_.canonicalize();
    }
    Rational(long num, long den) : Rational(Integer(num), Integer(den)) {}
    explicit Rational(const mpq_class& v) : v_(v) { v_.canonicalize(); }

    /// Parses "n", "-n" or "n/d".
    static Rational parse(std::string_view text) {
        std::string s(text);
        const auto slash = s.find('/');
        try {
            if (slash == std::string::npos) return Rational(Integer(s));
            return Rational(Integer(s.substr(0, slash)), Integer(s.substr(slash + 1)));
        } catch (const std::invalid_argument&) {
            throw SchemaError("not a rational: '" + s + "'");
        }
    }

    [[nodiscard]] Integer num() const { return v_.get_num(); }
    [[nodiscard]] Integer den() const { return v_.get_den(); }
    [[nodiscard]] const mpq_class& raw() const { return v_; }

    [[nodiscard]] bool is_zero() const { return sgn(v_) == 0; }
    [[nodiscard]] bool is_integer() const { return v_.get_den() == 1; }
    [[nodiscard]] int sign() const { return sgn(v_); }
    [[nodiscard]] double to_double() const { return v_.get_d(); }

    /// Serialized form; always "num/den".
    [[nodiscard]] std::string str() const { return v_.get_num().get_str() + "/" + v_.get_den().get_str(); }
    /// Display form; omits a unit denominator.
    [[nodiscard]] std::string pretty() const { return is_integer() ? v_.get_num().get_str() : str(); }

    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.is_zero()) throw DomainError("rational division by zero");
        v_ /= o.v_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.v_)); }

    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        const int c = cmp(a.v_, b.v_);
        return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.pretty(); }

private:
    mpq_class v_;
};

inline Rational pow(const Rational& base, long e) {
    if (e < 0) return pow(Rational(1) / base, -e);
    Integer n, d;
    mpz_pow_ui(n.get_mpz_t(), base.num().get_mpz_t(), static_cast<unsigned long>(e));
    mpz_pow_ui(d.get_mpz_t(), base.den().get_mpz_t(), static_cast<unsigned long>(e));
    return Rational(n, d);
}

inline Integer ipow(const Integer& base, unsigned long e) {
    Integer r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

inline Integer factorial(unsigned long n) {
    Integer r;
    mpz_fac_ui(r.get_mpz_t(), n);
    return r;
}

inline Integer binomial(unsigned long n, unsigned long k) {
    Integer r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

}  // namespace qmhyp

template <>
struct std::hash<qmhyp::Rational> {
    std::size_t operator()(const qmhyp::Rational& r) const noexcept {
        return std::hash<std::string>{}(r.str());
    }
};
