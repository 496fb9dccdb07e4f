#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qmhyp/number_field.hpp"

namespace qmhyp {

/// Finite sum of field multiples of Omega^a * pi^b with a >= 0 and b <= 0.
class ClosedForm {
public:
    using Key = std::pair<int, int>;  // (omega exponent, pi exponent)

    ClosedForm() = default;
    ClosedForm(const FieldElement& c) { add_term(0, 0, c); }  // NOLINT(google-explicit-constructor)
    ClosedForm(const Rational& c) { add_term(0, 0, FieldElement(c)); }  // NOLINT(google-explicit-constructor)
    ClosedForm(long c) : ClosedForm(Rational(c)) {}  // NOLINT(google-explicit-constructor)

    static ClosedForm term(const FieldElement& c, int omega, int pi) {
        ClosedForm r;
        r.add_term(omega, pi, c);
        return r;
    }
    static ClosedForm omega_pow(int a) { return term(FieldElement(1), a, 0); }
    static ClosedForm inv_pi_pow(int b) { return term(FieldElement(1), 0, -b); }

    [[nodiscard]] const std::map<Key, FieldElement>& terms() const { return t_; }
    [[nodiscard]] bool is_zero() const { return t_.empty(); }

    /// The field of the coefficients, or null when all coefficients are plain rationals.
    [[nodiscard]] Field field() const {
        for (const auto& [k, c] : t_)
            if (c.field()) return c.field();
        return nullptr;
    }

    /// Coefficient of Omega^a * pi^b (zero when absent).
    [[nodiscard]] FieldElement coeff(int omega, int pi) const {
        auto it = t_.find({omega, pi});
        return it == t_.end() ? FieldElement() : it->second;
    }

    void add_term(int omega, int pi, const FieldElement& c) {
        if (omega < 0 || pi > 0) throw DomainError("closed form exponents must satisfy omega >= 0 and pi <= 0");
        if (c.is_zero()) return;
        auto [it, inserted] = t_.try_emplace({omega, pi}, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) t_.erase(it);
        }
    }

    ClosedForm& operator+=(const ClosedForm& o) {
        for (const auto& [k, c] : o.t_) add_term(k.first, k.second, c);
        return *this;
    }
    ClosedForm& operator-=(const ClosedForm& o) {
        for (const auto& [k, c] : o.t_) add_term(k.first, k.second, -c);
        return *this;
    }
    ClosedForm& operator*=(const FieldElement& s) {
        if (s.is_zero()) {
            t_.clear();
            return *this;
        }
        for (auto& [k, c] : t_) c *= s;
        return *this;
    }
    friend ClosedForm operator+(ClosedForm a, const ClosedForm& b) { return a += b; }
    friend ClosedForm operator-(ClosedForm a, const ClosedForm& b) { return a -= b; }
    friend ClosedForm operator-(ClosedForm a) {
        for (auto& [k, c] : a.t_) c = -c;
        return a;
    }
    friend ClosedForm operator*(const ClosedForm& a, const ClosedForm& b) {
        ClosedForm r;
        for (const auto& [ka, ca] : a.t_)
            for (const auto& [kb, cb] : b.t_) r.add_term(ka.first + kb.first, ka.second + kb.second, ca * cb);
        return r;
    }
    ClosedForm& operator*=(const ClosedForm& o) { return *this = *this * o; }
    friend ClosedForm operator*(ClosedForm a, const FieldElement& s) { return a *= s; }
    friend ClosedForm operator*(const FieldElement& s, ClosedForm a) { return a *= s; }
    friend bool operator==(const ClosedForm& a, const ClosedForm& b) { return (a - b).is_zero(); }

    /// Numeric value for given Omega and pi.
    [[nodiscard]] Complex evaluate(const Real& omega, const Real& pi, unsigned bits) const {
        PrecisionScope ps(bits);
        Complex r;
        for (const auto& [k, c] : t_) {
            const Real scale = pow(omega, k.first) * pow(pi, k.second);
            r += c.embed(bits) * scale;
        }
        return r;
    }

    /// Display order: decreasing Omega exponent, then decreasing power of 1/pi.
    [[nodiscard]] std::vector<std::pair<Key, FieldElement>> ordered_terms() const {
        std::vector<std::pair<Key, FieldElement>> v(t_.begin(), t_.end());
        std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
            if (a.first.first != b.first.first) return a.first.first > b.first.first;
            return a.first.second < b.first.second;
        });
        return v;
    }

    [[nodiscard]] std::string str() const {
        if (t_.empty()) return "0";
        std::string out;
        for (const auto& [k, c] : ordered_terms()) {
            std::string mono;
            if (k.first != 0) mono = k.first == 1 ? "Omega" : "Omega^" + std::to_string(k.first);
            if (k.second != 0) {
                if (!mono.empty()) mono += "*";
                mono += "pi^" + std::to_string(k.second);
            }
            std::string cs = c.str();
            bool neg = false;
            const bool compound = cs.find(" + ") != std::string::npos || cs.find(" - ") != std::string::npos;
            if (!compound && cs[0] == '-') {
                neg = true;
                cs = cs.substr(1);
            }
            if (compound) cs = "(" + cs + ")";
            std::string piece;
            if (mono.empty()) piece = cs;
            else if (cs == "1") piece = mono;
            else piece = cs + "*" + mono;
            if (out.empty()) out = neg ? "-" + piece : piece;
            else out += (neg ? " - " : " + ") + piece;
        }
        return out;
    }

private:
    std::map<Key, FieldElement> t_;
};

inline ClosedForm pow(const ClosedForm& base, unsigned e) {
    ClosedForm r(1);
    for (unsigned k = 0; k < e; ++k) r *= base;
    return r;
}

}  // namespace qmhyp
