#pragma once

#include <map>
#include <mutex>
#include <vector>

#include "qmhyp/errors.hpp"
#include "qmhyp/poly.hpp"
#include "qmhyp/rational.hpp"

namespace qmhyp {

enum class Character { Trivial, Chi4 };

/// The nontrivial character modulo 4.
inline int chi4(long n) {
    const long r = ((n % 4) + 4) % 4;
    return r == 1 ? 1 : (r == 3 ? -1 : 0);
}

inline int char_value(Character c, long n) { return c == Character::Trivial ? 1 : chi4(n); }

inline std::vector<long> divisors(long n) {
    std::vector<long> small, large;
    for (long d = 1; d * d <= n; ++d) {
        if (n % d) continue;
        small.push_back(d);
        if (d * d != n) large.push_back(n / d);
    }
    small.insert(small.end(), large.rbegin(), large.rend());
    return small;
}

inline int mobius(long n) {
    int mu = 1;
    for (long p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        n /= p;
        if (n % p == 0) return 0;
        mu = -mu;
    }
    if (n > 1) mu = -mu;
    return mu;
}

inline std::vector<long> prime_divisors(long n) {
    std::vector<long> ps;
    for (long p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        ps.push_back(p);
        while (n % p == 0) n /= p;
    }
    if (n > 1) ps.push_back(n);
    return ps;
}

/// Bernoulli number with B_1 = -1/2.
inline Rational bernoulli(unsigned k) {
    static std::mutex mu;
    static std::vector<Rational> table{Rational(1)};
    std::lock_guard lock(mu);
    while (table.size() <= k) {
        const unsigned m = static_cast<unsigned>(table.size());
        // sum_{j<=m} C(m+1, j) B_j = 0
        Rational s;
        for (unsigned j = 0; j < m; ++j) s += Rational(binomial(m + 1, j)) * table[j];
        table.push_back(-s / Rational(Integer(m + 1)));
    }
    return table[k];
}

inline Rational bernoulli_poly(unsigned k, const Rational& x) {
    Rational r;
    for (unsigned j = 0; j <= k; ++j) r += Rational(binomial(k, j)) * bernoulli(j) * pow(x, static_cast<long>(k - j));
    return r;
}

/// Generalized Bernoulli number attached to the character modulo 4.
inline Rational gen_bernoulli_chi4(unsigned k) {
    if (k == 0) throw DomainError("generalized Bernoulli number needs k >= 1");
    if (k % 2 == 0) return 0;
    Rational s;
    for (long a = 1; a <= 4; ++a)
        if (chi4(a)) s += Rational(chi4(a)) * bernoulli_poly(k, Rational(a, 4));
    return s * pow(Rational(4), static_cast<long>(k) - 1);
}

/// sum over m | n of psi(n/m) phi(m) m^k.
inline Integer divisor_sigma(unsigned k, long n, Character psi = Character::Trivial, Character phi = Character::Trivial) {
    if (n < 1) throw DomainError("divisor sum needs n >= 1");
    Integer s = 0;
    for (long m : divisors(n)) {
        const int c = char_value(psi, n / m) * char_value(phi, m);
        if (c) s += c * ipow(Integer(m), k);
    }
    return s;
}

/// Central factorial number t(n, k): the coefficient of x^k in x^2 prod_{j<n/2}(x^2 - j^2) for
/// even n, and in x prod_{j<=(n-1)/2}(x^2 - (2j-1)^2/4) for odd n.
inline Rational central_factorial(long n, long k) {
    if (n < 1) throw DomainError("central factorial needs n >= 1");
    if ((n - k) % 2 != 0) throw DomainError("central factorial indices must have equal parity");
    if (k < 1 || k > n) throw DomainError("central factorial index k out of range");
    static std::mutex mu;
    static std::map<long, QPoly> cache;
    std::lock_guard lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) {
        QPoly p;
        if (n % 2 == 0) {
            p = QPoly::monomial(1, 2);
            for (long j = 1; j < n / 2; ++j) p = p * QPoly({Rational(-j * j), Rational(0), Rational(1)});
        } else {
            p = QPoly::monomial(1, 1);
            for (long j = 1; j <= (n - 1) / 2; ++j)
                p = p * QPoly({-Rational((2 * j - 1) * (2 * j - 1), 4), Rational(0), Rational(1)});
        }
        it = cache.emplace(n, std::move(p)).first;
    }
    return it->second.coeff(static_cast<std::size_t>(k));
}

}  // namespace qmhyp
