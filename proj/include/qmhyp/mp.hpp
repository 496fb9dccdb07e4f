#pragma once

#include <boost/multiprecision/mpfr.hpp>
#include <mpfr.h>

#include <cmath>
#include <iomanip>
#include <sstream>
#include <string>

#include "qmhyp/rational.hpp"

namespace qmhyp {

using Real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>, boost::multiprecision::et_off>;

inline unsigned bits_to_digits10(unsigned bits) { return static_cast<unsigned>(std::ceil(bits * 0.30103)) + 2; }

/// Sets the default working precision for newly created reals for the lifetime of the guard.
class PrecisionScope {
public:
    explicit PrecisionScope(unsigned bits) : saved_(Real::default_precision()) {
        Real::default_precision(bits_to_digits10(bits));
    }
    ~PrecisionScope() { Real::default_precision(saved_); }
    PrecisionScope(const PrecisionScope&) = delete;
    PrecisionScope& operator=(const PrecisionScope&) = delete;

private:
    unsigned saved_;
};

inline Real real_pi() {
    Real r;
    mpfr_const_pi(r.backend().data(), MPFR_RNDN);
    return r;
}

inline Real to_real(const Rational& q) {
    Real r;
    mpfr_set_q(r.backend().data(), q.raw().get_mpq_t(), MPFR_RNDN);
    return r;
}

inline Real to_real(const Integer& z) {
    Real r;
    mpfr_set_z(r.backend().data(), z.get_mpz_t(), MPFR_RNDN);
    return r;
}

/// 2^e exactly.
inline Real pow2(long e) {
    Real r = 1;
    mpfr_mul_2si(r.backend().data(), r.backend().data(), e, MPFR_RNDN);
    return r;
}

inline std::string to_decimal(const Real& x, int digits = 30) {
    std::ostringstream os;
    os << std::setprecision(digits) << std::scientific << x;
    return os.str();
}

/// Rectangular complex number over Real.
struct Complex {
    Real re{0};
    Real im{0};

    Complex() = default;
    Complex(Real r) : re(std::move(r)), im(0) {}  // NOLINT(google-explicit-constructor)
    Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}

    [[nodiscard]] Real norm2() const { return re * re + im * im; }
    [[nodiscard]] Real abs() const { return sqrt(norm2()); }
    [[nodiscard]] Complex conj() const { return {re, -im}; }

    Complex& operator+=(const Complex& o) { re += o.re; im += o.im; return *this; }
    Complex& operator-=(const Complex& o) { re -= o.re; im -= o.im; return *this; }
    Complex& operator*=(const Complex& o) {
        Real r = re * o.re - im * o.im;
        im = re * o.im + im * o.re;
        re = std::move(r);
        return *this;
    }
    Complex& operator/=(const Complex& o) {
        const Real d = o.norm2();
        Real r = (re * o.re + im * o.im) / d;
        im = (im * o.re - re * o.im) / d;
        re = std::move(r);
        return *this;
    }
    Complex& operator*=(const Real& s) { re *= s; im *= s; return *this; }

    friend Complex operator+(Complex a, const Complex& b) { return a += b; }
    friend Complex operator-(Complex a, const Complex& b) { return a -= b; }
    friend Complex operator*(Complex a, const Complex& b) { return a *= b; }
    friend Complex operator/(Complex a, const Complex& b) { return a /= b; }
    friend Complex operator*(Complex a, const Real& s) { return a *= s; }
    friend Complex operator*(const Real& s, Complex a) { return a *= s; }
    friend Complex operator-(const Complex& a) { return {-a.re, -a.im}; }
};

inline Complex cpow(Complex base, long e) {
    if (e < 0) return cpow(Complex(Real(1)) / base, -e);
    Complex r(Real(1));
    while (e > 0) {
        if (e & 1) r *= base;
        base *= base;
        e >>= 1;
    }
    return r;
}

/// exp(x + iy).
inline Complex cexp(const Complex& z) {
    const Real m = exp(z.re);
    return {m * cos(z.im), m * sin(z.im)};
}

/// Principal square root.
inline Complex csqrt(const Complex& z) {
    const Real r = z.abs();
    if (r == 0) return {};
    Real a = sqrt((r + z.re) / 2);
    Real b = sqrt((r - z.re) / 2);
    if (z.im < 0) b = -b;
    return {a, b};
}

/// |a - b| / max(|a|, |b|); zero when both vanish.
inline Real rel_diff(const Complex& a, const Complex& b) {
    const Real scale = std::max(a.abs(), b.abs());
    if (scale == 0) return Real(0);
    return (a - b).abs() / scale;
}

}  // namespace qmhyp
