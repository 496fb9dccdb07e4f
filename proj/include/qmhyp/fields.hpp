#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "qmhyp/number_field.hpp"

namespace qmhyp {

namespace detail {

inline std::vector<Rational> ratvec(std::initializer_list<std::pair<long, long>> v) {
    std::vector<Rational> out;
    for (auto [n, d] : v) out.emplace_back(n, d);
    return out;
}

}  // namespace detail

/// Q(t) with t = 2^{1/4} + i, minimal polynomial x^8 + 4x^6 + 2x^4 + 28x^2 + 1. Contains i, sqrt(2)
/// and 2^{1/4}; every Gaussian CM value used by the library lies in it.
inline Field gaussian_field() {
    static const Field f = [] {
        auto d = std::make_shared<FieldDescriptor>(
            std::vector<Integer>{1, 0, 28, 0, 2, 0, 4, 0, 1}, "1.189207115002721066717", "1.0", 64, "Q(2^(1/4), i)");
        const auto i = detail::ratvec({{0, 1}, {-127, 24}, {0, 1}, {-5, 24}, {0, 1}, {-19, 24}, {0, 1}, {-5, 24}});
        const auto r = detail::ratvec({{0, 1}, {151, 24}, {0, 1}, {5, 24}, {0, 1}, {19, 24}, {0, 1}, {5, 24}});
        d->add_named("i", i);
        d->add_named("root4_2", r);
        const Field tmp = d;
        const FieldElement ei(tmp, i), er(tmp, r);
        d->add_named("sqrt2", (er * er).coords());
        std::vector<std::pair<std::string, std::vector<Rational>>> basis;
        const char* rl[] = {"", "2^(1/4)", "sqrt(2)", "2^(3/4)"};
        FieldElement ipow = FieldElement::embed_rational(tmp, 1);
        for (int b = 0; b < 2; ++b) {
            FieldElement rp = FieldElement::embed_rational(tmp, 1);
            for (int a = 0; a < 4; ++a) {
                std::string label = rl[a];
                if (b == 1) label = label.empty() ? "i" : "i*" + label;
                basis.emplace_back(label.empty() ? "" : label, (ipow * rp).coords());
                rp *= er;
            }
            ipow *= ei;
        }
        d->set_display_basis(std::move(basis));
        return Field(d);
    }();
    return f;
}

/// Q(sqrt(m)) for a positive non-square integer m, with the positive real embedding.
inline Field quadratic_field(long m) {
    static std::mutex mu;
    static std::map<long, Field> cache;
    std::lock_guard lock(mu);
    auto it = cache.find(m);
    if (it != cache.end()) return it->second;
    PrecisionScope ps(96);
    const Real root = sqrt(Real(m));
    auto d = std::make_shared<FieldDescriptor>(std::vector<Integer>{Integer(-m), 0, 1}, to_decimal(root, 25), "0", 64,
                                               "Q(sqrt(" + std::to_string(m) + "))");
    const std::string label = "sqrt(" + std::to_string(m) + ")";
    d->add_named("sqrt" + std::to_string(m), {Rational(0), Rational(1)});
    d->set_display_basis({{"", {Rational(1), Rational(0)}}, {label, {Rational(0), Rational(1)}}});
    Field f = d;
    cache.emplace(m, f);
    return f;
}

/// Canonical descriptor for a minimal polynomial: the shared Gaussian field or a cached quadratic
/// field when the polynomial matches one of them, otherwise a fresh descriptor.
inline Field canonical_field(const std::vector<Integer>& min_poly, const std::string& re, const std::string& im,
                             unsigned bits) {
    auto fresh = std::make_shared<FieldDescriptor>(min_poly, re, im, bits);
    if (min_poly == gaussian_field()->min_poly()) {
        PrecisionScope ps(96);
        if (rel_diff(fresh->embedding(64), gaussian_field()->embedding(64)) < pow2(-40)) return gaussian_field();
    }
    if (min_poly.size() == 3 && min_poly[1] == 0 && min_poly[0] < 0 && min_poly[0].fits_slong_p()) {
        PrecisionScope ps(96);
        if (fresh->embedding(64).re > 0) return quadratic_field(-min_poly[0].get_si());
    }
    return fresh;
}

}  // namespace qmhyp
