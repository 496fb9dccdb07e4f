#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qmhyp/croots.hpp"
#include "qmhyp/errors.hpp"
#include "qmhyp/mp.hpp"
#include "qmhyp/poly.hpp"
#include "qmhyp/rational.hpp"

namespace qmhyp {

/// A number field Q[x]/(m(x)) together with a chosen complex embedding of x.
class FieldDescriptor {
public:
    /// `min_poly` is monic, lowest degree first. The hint must be closer to the intended root
    /// than to any other root.
    FieldDescriptor(std::vector<Integer> min_poly, std::string hint_re, std::string hint_im, unsigned hint_bits,
                    std::string name = "K")
        : min_poly_(std::move(min_poly)),
          hint_re_(std::move(hint_re)),
          hint_im_(std::move(hint_im)),
          hint_bits_(hint_bits),
          name_(std::move(name)) {
        if (min_poly_.size() < 2) throw DomainError("minimal polynomial must have degree >= 1");
        if (min_poly_.back() != 1) throw DomainError("minimal polynomial must be monic");
        if (!is_squarefree(QPoly::from_integers(min_poly_)))
            throw DomainError("minimal polynomial is not squarefree");
        check_isolation();
    }

    [[nodiscard]] std::size_t degree() const { return min_poly_.size() - 1; }
    [[nodiscard]] const std::vector<Integer>& min_poly() const { return min_poly_; }
    [[nodiscard]] const std::string& hint_re() const { return hint_re_; }
    [[nodiscard]] const std::string& hint_im() const { return hint_im_; }
    [[nodiscard]] unsigned hint_bits() const { return hint_bits_; }
    [[nodiscard]] const std::string& name() const { return name_; }

    [[nodiscard]] bool same_as(const FieldDescriptor& o) const {
        return this == &o || (min_poly_ == o.min_poly_ && hint_re_ == o.hint_re_ && hint_im_ == o.hint_im_);
    }

    /// Registers a named element (e.g. "i", "sqrt2") by its coordinates.
    void add_named(const std::string& name, std::vector<Rational> coords) {
        if (coords.size() != degree()) throw DomainError("named element has wrong length");
        named_[name] = std::move(coords);
    }
    [[nodiscard]] const std::vector<Rational>* named(const std::string& name) const {
        auto it = named_.find(name);
        return it == named_.end() ? nullptr : &it->second;
    }

    /// Installs a human-readable basis (label, coordinates); must span the field.
    void set_display_basis(std::vector<std::pair<std::string, std::vector<Rational>>> basis);
    [[nodiscard]] bool has_display_basis() const { return !display_labels_.empty(); }
    [[nodiscard]] const std::vector<std::string>& display_labels() const { return display_labels_; }
    /// Coordinates of an element in the display basis.
    [[nodiscard]] std::vector<Rational> to_display(const std::vector<Rational>& coords) const {
        std::vector<Rational> out(degree());
        for (std::size_t r = 0; r < degree(); ++r)
            for (std::size_t c = 0; c < degree(); ++c)
                if (!coords[c].is_zero()) out[r] += display_inv_[r][c] * coords[c];
        return out;
    }

    /// The embedded generator, refined by Newton iteration to `bits` bits.
    [[nodiscard]] Complex embedding(unsigned bits) const {
        std::lock_guard lock(mu_);
        auto it = emb_cache_.find(bits);
        if (it != emb_cache_.end()) return it->second;
        PrecisionScope ps(bits + 32);
        auto r = newton_polish(complex_poly(), hint(), bits + 16);
        if (!r) throw PrecisionError("embedding hint does not converge for field " + name_);
        emb_cache_.emplace(bits, *r);
        return *r;
    }

    /// All conjugates of the generator, the chosen embedding first.
    [[nodiscard]] std::vector<Complex> conjugates(unsigned bits) const {
        std::lock_guard lock(mu_);
        auto it = conj_cache_.find(bits);
        if (it != conj_cache_.end()) return it->second;
        PrecisionScope ps(bits + 32);
        auto roots = complex_roots(complex_poly(), bits + 16);
        const Complex h = hint();
        std::size_t best = 0;
        for (std::size_t k = 1; k < roots.size(); ++k)
            if ((roots[k] - h).norm2() < (roots[best] - h).norm2()) best = k;
        std::swap(roots[0], roots[best]);
        conj_cache_.emplace(bits, roots);
        return roots;
    }

private:
    [[nodiscard]] std::vector<Complex> complex_poly() const {
        std::vector<Complex> c;
        for (const auto& z : min_poly_) c.emplace_back(to_real(z));
        return c;
    }
    [[nodiscard]] Complex hint() const { return {Real(hint_re_), Real(hint_im_)}; }

    void check_isolation() const {
        PrecisionScope ps(std::max(hint_bits_, 64u) + 32);
        auto roots = complex_roots(complex_poly(), std::max(hint_bits_, 64u));
        const Complex h = hint();
        std::vector<Real> d;
        for (const auto& r : roots) d.push_back((r - h).abs());
        std::sort(d.begin(), d.end());
        if (d.size() > 1 && !(d[0] * 4 < d[1]))
            throw DomainError("embedding hint does not isolate a single root of the minimal polynomial");
    }

    std::vector<Integer> min_poly_;
    std::string hint_re_, hint_im_;
    unsigned hint_bits_;
    std::string name_;
    std::map<std::string, std::vector<Rational>> named_;
    std::vector<std::string> display_labels_;
    std::vector<std::vector<Rational>> display_inv_;
    mutable std::mutex mu_;
    mutable std::map<unsigned, Complex> emb_cache_;
    mutable std::map<unsigned, std::vector<Complex>> conj_cache_;
};

using Field = std::shared_ptr<const FieldDescriptor>;

/// Exact element of a number field; a null field denotes a plain rational.
class FieldElement {
public:
    FieldElement() : c_{Rational(0)} {}
    FieldElement(const Rational& q) : c_{q} {}  // NOLINT(google-explicit-constructor)
    FieldElement(long v) : c_{Rational(v)} {}   // NOLINT(google-explicit-constructor)
    FieldElement(int v) : c_{Rational(v)} {}    // NOLINT(google-explicit-constructor)
    FieldElement(Field f, std::vector<Rational> coords) : f_(std::move(f)), c_(std::move(coords)) {
        if (!f_) {
            if (c_.size() != 1) throw DomainError("rational element needs exactly one coordinate");
        } else if (c_.size() != f_->degree()) {
            throw DomainError("coordinate vector length differs from field degree");
        }
    }
    /// The rational q viewed inside the field f.
    static FieldElement embed_rational(const Field& f, const Rational& q) {
        if (!f) return FieldElement(q);
        std::vector<Rational> c(f->degree());
        c[0] = q;
        return {f, std::move(c)};
    }
    static FieldElement generator(const Field& f) {
        std::vector<Rational> c(f->degree());
        if (f->degree() == 1) {
            c[0] = Rational(Integer(-f->min_poly()[0]));
        } else {
            c[1] = 1;
        }
        return {f, std::move(c)};
    }
    /// A named element of the field; throws FieldError if the field has no such element.
    static FieldElement named(const Field& f, const std::string& name) {
        const auto* c = f ? f->named(name) : nullptr;
        if (!c) throw FieldError("field " + (f ? f->name() : std::string("Q")) + " has no element named '" + name + "'");
        return {f, *c};
    }

    [[nodiscard]] const Field& field() const { return f_; }
    [[nodiscard]] const std::vector<Rational>& coords() const { return c_; }

    [[nodiscard]] bool is_zero() const {
        for (const auto& x : c_)
            if (!x.is_zero()) return false;
        return true;
    }
    [[nodiscard]] bool is_rational() const {
        for (std::size_t k = 1; k < c_.size(); ++k)
            if (!c_[k].is_zero()) return false;
        return true;
    }
    /// The rational value; throws if the element is irrational.
    [[nodiscard]] Rational rational() const {
        if (!is_rational()) throw FieldError("element is not rational");
        return c_[0];
    }
    [[nodiscard]] FieldElement lifted(const Field& f) const {
        if (!f || f_) return *this;
        return embed_rational(f, c_[0]);
    }

    FieldElement& operator+=(const FieldElement& o) {
        unify(o);
        const auto& oc = o.f_ || !f_ ? o.c_ : o.lifted(f_).c_;
        for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += oc[k];
        return *this;
    }
    FieldElement& operator-=(const FieldElement& o) { return *this += -o; }
    FieldElement& operator*=(const FieldElement& o) {
        if (!o.f_ || !f_) {
            if (!o.f_) {
                const Rational s = o.c_[0];
                for (auto& x : c_) x *= s;
                return *this;
            }
            FieldElement tmp = o;
            tmp *= *this;
            return *this = std::move(tmp);
        }
        check_same(o);
        const std::size_t n = c_.size();
        std::vector<Rational> prod(2 * n - 1);
        for (std::size_t a = 0; a < n; ++a) {
            if (c_[a].is_zero()) continue;
            for (std::size_t b = 0; b < n; ++b)
                if (!o.c_[b].is_zero()) prod[a + b] += c_[a] * o.c_[b];
        }
        reduce(prod);
        c_ = std::move(prod);
        return *this;
    }
    FieldElement& operator/=(const FieldElement& o) { return *this *= o.inverse(); }

    [[nodiscard]] FieldElement inverse() const {
        if (is_zero()) throw DomainError("division by zero in number field");
        if (!f_) return FieldElement(Rational(1) / c_[0]);
        const QPoly m = QPoly::from_integers(f_->min_poly());
        auto [g, s] = ext_gcd_mod(QPoly(c_), m);
        if (g.degree() != 0) throw DomainError("element is a zero divisor; minimal polynomial reducible");
        std::vector<Rational> out(c_.size());
        const auto r = s.divmod(m).second;
        for (std::size_t k = 0; k < out.size(); ++k) out[k] = r.coeff(k);
        return {f_, std::move(out)};
    }

    friend FieldElement operator+(FieldElement a, const FieldElement& b) { return a += b; }
    friend FieldElement operator-(FieldElement a, const FieldElement& b) { return a -= b; }
    friend FieldElement operator*(FieldElement a, const FieldElement& b) { return a *= b; }
    friend FieldElement operator/(FieldElement a, const FieldElement& b) { return a /= b; }
    friend FieldElement operator-(FieldElement a) {
        for (auto& x : a.c_) x = -x;
        return a;
    }
    friend bool operator==(const FieldElement& a, const FieldElement& b) {
        if (a.f_ && b.f_) {
            a.check_same(b);
            return a.c_ == b.c_;
        }
        if (!a.f_ && !b.f_) return a.c_ == b.c_;
        return a.is_rational() && b.is_rational() && a.c_[0] == b.c_[0];
    }

    /// Value under the field's chosen embedding.
    [[nodiscard]] Complex embed(unsigned bits) const {
        if (!f_) {
            PrecisionScope ps(bits);
            return Complex(to_real(c_[0]));
        }
        return embed_at(f_->embedding(bits), bits);
    }
    /// Value under the embedding sending the generator to `theta`.
    [[nodiscard]] Complex embed_at(const Complex& theta, unsigned bits) const {
        PrecisionScope ps(bits);
        Complex r;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * theta + Complex(to_real(*it));
        return r;
    }

    /// Human-readable form (display basis when available, otherwise powers of the generator).
    [[nodiscard]] std::string str() const;

    /// Largest bit size among numerators and denominators.
    [[nodiscard]] std::size_t height_bits() const {
        std::size_t b = 1;
        for (const auto& x : c_) {
            b = std::max(b, mpz_sizeinbase(x.num().get_mpz_t(), 2));
            b = std::max(b, mpz_sizeinbase(x.den().get_mpz_t(), 2));
        }
        return b;
    }

private:
    void check_same(const FieldElement& o) const {
        if (f_ && o.f_ && !f_->same_as(*o.f_))
            throw FieldError("mismatched fields: " + f_->name() + " vs " + o.f_->name());
    }
    void unify(const FieldElement& o) {
        check_same(o);
        if (!f_ && o.f_) *this = lifted(o.f_);
    }
    void reduce(std::vector<Rational>& p) const {
        const auto& m = f_->min_poly();
        const std::size_t n = m.size() - 1;
        for (std::size_t k = p.size(); k-- > n;) {
            if (p[k].is_zero()) continue;
            const Rational t = p[k];
            for (std::size_t j = 0; j < n; ++j)
                if (m[j] != 0) p[k - n + j] -= t * Rational(m[j]);
            p[k] = 0;
        }
        p.resize(n);
    }

    Field f_;
    std::vector<Rational> c_;
};

inline FieldElement pow(FieldElement base, long e) {
    if (e < 0) return pow(base.inverse(), -e);
    FieldElement r = FieldElement::embed_rational(base.field(), Rational(1));
    while (e > 0) {
        if (e & 1) r *= base;
        base *= base;
        e >>= 1;
    }
    return r;
}

namespace detail {

inline std::string join_terms(const std::vector<std::pair<Rational, std::string>>& terms) {
    std::string out;
    for (const auto& [c, label] : terms) {
        if (c.is_zero()) continue;
        const bool neg = c.sign() < 0;
        const Rational m = neg ? -c : c;
        if (out.empty()) out += neg ? "-" : "";
        else out += neg ? " - " : " + ";
        if (label.empty()) out += m.pretty();
        else if (m == Rational(1)) out += label;
        else out += m.pretty() + "*" + label;
    }
    return out.empty() ? "0" : out;
}

/// Exact inverse of a square rational matrix by Gauss-Jordan elimination.
inline std::vector<std::vector<Rational>> invert(std::vector<std::vector<Rational>> a) {
    const std::size_t n = a.size();
    std::vector<std::vector<Rational>> inv(n, std::vector<Rational>(n));
    for (std::size_t k = 0; k < n; ++k) inv[k][k] = 1;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && a[piv][col].is_zero()) ++piv;
        if (piv == n) throw DomainError("singular matrix");
        std::swap(a[piv], a[col]);
        std::swap(inv[piv], inv[col]);
        const Rational p = a[col][col];
        for (std::size_t j = 0; j < n; ++j) {
            a[col][j] /= p;
            inv[col][j] /= p;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || a[r][col].is_zero()) continue;
            const Rational f = a[r][col];
            for (std::size_t j = 0; j < n; ++j) {
                a[r][j] -= f * a[col][j];
                inv[r][j] -= f * inv[col][j];
            }
        }
    }
    return inv;
}

}  // namespace detail

inline void FieldDescriptor::set_display_basis(std::vector<std::pair<std::string, std::vector<Rational>>> basis) {
    if (basis.size() != degree()) throw DomainError("display basis has wrong size");
    // Column j of the matrix holds the coordinates of basis element j.
    std::vector<std::vector<Rational>> m(degree(), std::vector<Rational>(degree()));
    for (std::size_t j = 0; j < degree(); ++j)
        for (std::size_t r = 0; r < degree(); ++r) m[r][j] = basis[j].second.at(r);
    display_inv_ = detail::invert(std::move(m));
    display_labels_.clear();
    for (auto& b : basis) display_labels_.push_back(b.first);
}

inline std::string FieldElement::str() const {
    std::vector<std::pair<Rational, std::string>> terms;
    if (!f_) return c_[0].pretty();
    if (f_->has_display_basis()) {
        const auto d = f_->to_display(c_);
        for (std::size_t k = 0; k < d.size(); ++k) terms.emplace_back(d[k], f_->display_labels()[k]);
    } else {
        for (std::size_t k = 0; k < c_.size(); ++k)
            terms.emplace_back(c_[k], k == 0 ? "" : (k == 1 ? std::string("t") : "t^" + std::to_string(k)));
    }
    return detail::join_terms(terms);
}

/// Square root inside the field, if one exists. Conjugate embeddings of the square roots are
/// combined over all sign patterns, coordinates are recovered by rational reconstruction, and
/// every candidate is verified exactly.
inline std::optional<FieldElement> field_sqrt(const FieldElement& d) {
    if (d.is_zero()) return d;
    if (!d.field()) {
        const Rational q = d.rational();
        if (q.sign() < 0) return std::nullopt;
        Integer a, b;
        mpz_sqrt(a.get_mpz_t(), q.num().get_mpz_t());
        mpz_sqrt(b.get_mpz_t(), q.den().get_mpz_t());
        if (a * a != q.num() || b * b != q.den()) return std::nullopt;
        return FieldElement(Rational(a, b));
    }
    const Field& f = d.field();
    const std::size_t n = f->degree();
    const unsigned bits = static_cast<unsigned>(256 + 8 * d.height_bits());
    const auto conj = f->conjugates(bits);
    PrecisionScope ps(bits);

    // Vandermonde inverse W with coords = W * (values at conjugates).
    std::vector<std::vector<Complex>> v(n, std::vector<Complex>(n));
    for (std::size_t j = 0; j < n; ++j) {
        Complex p(Real(1));
        for (std::size_t k = 0; k < n; ++k) {
            v[j][k] = p;
            p *= conj[j];
        }
    }
    std::vector<std::vector<Complex>> w(n, std::vector<Complex>(n));
    for (std::size_t k = 0; k < n; ++k) w[k][k] = Complex(Real(1));
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (v[r][col].norm2() > v[piv][col].norm2()) piv = r;
        std::swap(v[piv], v[col]);
        std::swap(w[piv], w[col]);
        const Complex p = v[col][col];
        for (std::size_t j = 0; j < n; ++j) {
            v[col][j] /= p;
            w[col][j] /= p;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const Complex fac = v[r][col];
            for (std::size_t j = 0; j < n; ++j) {
                v[r][j] -= fac * v[col][j];
                w[r][j] -= fac * w[col][j];
            }
        }
    }
    // w = V^{-1}; u[j] is column j of w scaled by a square root of the j-th conjugate of d.
    std::vector<std::vector<Complex>> u(n, std::vector<Complex>(n));
    for (std::size_t j = 0; j < n; ++j) {
        const Complex s = csqrt(d.embed_at(conj[j], bits));
        for (std::size_t k = 0; k < n; ++k) u[j][k] = w[k][j] * s;
    }
    const Real imag_tol = pow2(-static_cast<long>(bits) / 2);
    const Integer max_den = Integer(1) << static_cast<mp_bitcnt_t>(bits / 3);
    for (unsigned long mask = 0; mask < (1ul << n); ++mask) {
        if (mask & 1ul) continue;  // r and -r both work; fix the sign at the first conjugate
        std::vector<Complex> c(n);
        bool real = true;
        for (std::size_t k = 0; k < n && real; ++k) {
            for (std::size_t j = 0; j < n; ++j) {
                if (mask >> j & 1ul) c[k] -= u[j][k];
                else c[k] += u[j][k];
            }
            if (abs(c[k].im) > imag_tol * std::max(Real(1), abs(c[k].re))) real = false;
        }
        if (!real) continue;
        std::vector<Rational> coords(n);
        for (std::size_t k = 0; k < n; ++k) coords[k] = best_rational(c[k].re, max_den);
        FieldElement r(f, std::move(coords));
        if (r * r == d) return r;
    }
    return std::nullopt;
}

}  // namespace qmhyp
