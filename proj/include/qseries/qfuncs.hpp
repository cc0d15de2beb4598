// q-shifted factorials, q-binomial coefficients, infinite products and the
// Jacobi triple product check: the workhorse functions of the engine.
//
// Conventions, fixed once here:
//   (a)_n = (a;q)_n = (a)_inf / (a q^n)_inf for any integer n, so that
//   1/(a)_n vanishes whenever the extension hits a (1 - q^0) factor; in
//   particular 1/(q)_n = 0 for n < 0, which makes every finite Bailey sum
//   self-truncating.
#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <tuple>
#include <vector>

#include "qseries/polynomial.hpp"
#include "qseries/series.hpp"
#include "qseries/types.hpp"

namespace qseries {

// (c; q^mod)_n as an exact polynomial, n >= 0.
inline QPolynomial pochhammer_mod(SignedPower c, std::int64_t mod, std::int64_t n) {
    if (n < 0) throw error("pochhammer_mod: negative length; use inv_pochhammer");
    QPolynomial r = QPolynomial::one();
    for (std::int64_t i = 0; i < n; ++i) {
        const HalfExp e = c.exp + HalfExp::integer(i * mod);
        QPolynomial factor = QPolynomial::one();
        factor.add_term(e, -Int(c.sign));
        r *= factor;
    }
    return r;
}

inline QPolynomial pochhammer(SignedPower c, std::int64_t n) {
    return pochhammer_mod(c, 1, n);
}

// (c; q)_n as a truncated series: factors beyond the order multiply to 1,
// so long products cost only what the truncation can see.
inline QSeries pochhammer_truncated(SignedPower c, std::int64_t n, HalfExp order) {
    if (n < 0) throw error("pochhammer_truncated: negative length");
    QSeries r = QSeries::one(order);
    for (std::int64_t i = 0; i < n; ++i) {
        const HalfExp e = c.exp + HalfExp::integer(i);
        if (e > order) break;
        QPolynomial factor = QPolynomial::one();
        factor.add_term(e, -Int(c.sign));
        r = (r * factor).truncated(order);
    }
    return r;
}

// (c; q^mod)_inf truncated at the given order. Only factors whose q-power
// does not exceed the order can change the result; the rest multiply to 1.
inline QSeries pochhammer_infinite(SignedPower c, std::int64_t mod, HalfExp order) {
    if (mod < 1) throw error("pochhammer_infinite: modulus must be >= 1");
    if (c.is_one()) throw error("pochhammer_infinite: vanishing factor (1 - 1)");
    QSeries r = QSeries::one(order);
    for (std::int64_t i = 0;; ++i) {
        const HalfExp e = c.exp + HalfExp::integer(i * mod);
        if (e > order) break;
        if (e.halves == 0 && c.sign == 1) return QSeries::zero(order);
        QPolynomial factor = QPolynomial::one();
        factor.add_term(e, -Int(c.sign));
        // Keep the running order pinned: factors with negative valuation
        // would otherwise shrink it below the request.
        r = (r * factor).truncated(order);
    }
    return r;
}

inline QSeries pochhammer_infinite(SignedPower c, HalfExp order) {
    return pochhammer_infinite(c, 1, order);
}

// 1/(c; q)_n truncated at the given order. For n >= 0 this inverts the
// finite product factor by factor (geometric series when possible); for
// n < 0 the ratio-of-infinite-products definition gives the exact value
//   1/(c)_{-t} = prod_{i=-t}^{-1} (1 - c q^i),
// which is the zero series whenever a factor vanishes - the convention that
// makes sums over negative Pochhammer inverses self-truncating.
namespace detail {
struct InvPochCache {
    std::mutex m;
    std::map<std::tuple<int, std::int64_t, std::int64_t, std::int64_t>, QSeries> table;
    static InvPochCache& get() {
        static InvPochCache c;
        return c;
    }
};
}  // namespace detail

inline QSeries inv_pochhammer(SignedPower c, std::int64_t n, HalfExp order) {
    if (n < 0) {
        QPolynomial p = QPolynomial::one();
        for (std::int64_t i = n; i < 0; ++i) {
            const HalfExp e = c.exp + HalfExp::integer(i);
            if (e.halves == 0 && c.sign == 1) return QSeries::zero(order);
            QPolynomial factor = QPolynomial::one();
            factor.add_term(e, -Int(c.sign));
            p *= factor;
        }
        return QSeries(p, order);
    }
    // Factors whose q-power exceeds the order are 1 to this truncation, so
    // long Pochhammers coincide with shorter ones (and with (c)_inf).
    if (c.exp.halves > 0) {
        const std::int64_t relevant = (order.halves - c.exp.halves) / 2 + 1;
        n = std::min(n, std::max<std::int64_t>(relevant, 0));
    }
    auto& cache = detail::InvPochCache::get();
    const auto key = std::make_tuple(c.sign, c.exp.halves, n, order.halves);
    {
        std::lock_guard lk(cache.m);
        auto it = cache.table.find(key);
        if (it != cache.table.end()) return it->second;
    }
    QSeries r = QSeries::one(order);
    for (std::int64_t i = 0; i < n; ++i) {
        const HalfExp e = c.exp + HalfExp::integer(i);
        if (e > order) break;
        if (e.halves > 0) {
            // 1/(1 - s q^e) = sum_k s^k q^(ke)
            QSeries geo(order);
            Int s = 1;
            for (HalfExp t{0}; t <= order; t = t + e) {
                geo.add_term(t, s);
                s *= c.sign;
            }
            r = r * geo;
        } else {
            QPolynomial factor = QPolynomial::one();
            factor.add_term(e, -Int(c.sign));
            r = r * invert_leading_unit(QSeries(factor, order + e + e));
            r = r.truncated(order);
        }
    }
    std::lock_guard lk(cache.m);
    return cache.table.emplace(key, std::move(r)).first->second;
}

inline QSeries inv_pochhammer_infinite(SignedPower c, std::int64_t mod, HalfExp order) {
    return invert_leading_unit(pochhammer_infinite(c, mod, order));
}

inline QSeries inv_pochhammer_infinite(SignedPower c, HalfExp order) {
    return inv_pochhammer_infinite(c, 1, order);
}

// Inverse of a unit series: requires constant term +-1 (anything else is not
// invertible over the integers; a zero constant term is not invertible at all).
inline QSeries invert_unit_series(const QSeries& x) {
    auto val = x.valuation();
    if (!val || val->halves != 0)
        throw error("invert_unit_series: constant term is zero");
    const Int c0 = x.terms().begin()->second;
    if (c0 != 1 && c0 != -1)
        throw error("invert_unit_series: constant term is not +-1");
    return invert_leading_unit(x);
}

// Gaussian binomial [A B] = (q^(A-B+1))_B / (q)_B for B >= 0, else 0.
// The division is exact for every integer A; for A < 0 the result is the
// Laurent polynomial (-1)^B q^(AB - binom(B,2)) [B-A-1 B]. Computed densely,
// one binomial factor at a time:
//   [A b] = [A b-1] * (1 - q^(A-b+1)) / (1 - q^b),
// and cached, since the configuration sums hit the same (A, B) repeatedly.
namespace detail {
struct QBinomialCache {
    std::mutex m;
    std::map<std::pair<std::int64_t, std::int64_t>, QPolynomial> table;
    static QBinomialCache& get() {
        static QBinomialCache c;
        return c;
    }
};
}  // namespace detail

inline QPolynomial q_binomial(std::int64_t A, std::int64_t B) {
    if (B < 0) return QPolynomial::zero();
    if (B == 0) return QPolynomial::one();
    if (A >= 0 && B > A) return QPolynomial::zero();
    if (A < 0) {
        QPolynomial base = q_binomial(B - A - 1, B);
        base = base.shifted(HalfExp::integer(A * B - B * (B - 1) / 2));
        return (B % 2 == 1) ? -base : base;
    }
    if (B > A - B) B = A - B;  // [A B] = [A A-B]
    if (B == 0) return QPolynomial::one();
    auto& cache = detail::QBinomialCache::get();
    {
        std::lock_guard lk(cache.m);
        auto it = cache.table.find({A, B});
        if (it != cache.table.end()) return it->second;
    }
    std::size_t cap = 1;
    for (std::int64_t b = 1; b <= B; ++b)
        cap = std::max(cap, static_cast<std::size_t>(b * (A - b + 1)) + 1);
    std::vector<Int> dense(cap + 1);
    dense[0] = 1;
    std::int64_t deg = 0;
    std::vector<QPolynomial> row(static_cast<std::size_t>(B) + 1);  // row[b] = [A b]
    for (std::int64_t b = 1; b <= B; ++b) {
        const std::int64_t t = A - b + 1;
        for (std::int64_t i = deg; i >= 0; --i)
            if (dense[static_cast<std::size_t>(i)] != 0)
                dense[static_cast<std::size_t>(i + t)] -= dense[static_cast<std::size_t>(i)];
        deg += t;
        // divide by (1 - q^b): Q[i] = P[i] + Q[i-b], exactness checked below
        for (std::int64_t i = b; i <= deg; ++i)
            dense[static_cast<std::size_t>(i)] += dense[static_cast<std::size_t>(i - b)];
        for (std::int64_t i = deg - b + 1; i <= deg; ++i) {
            if (dense[static_cast<std::size_t>(i)] != 0)
                throw error("q_binomial: internal division not exact");
        }
        deg -= b;
        QPolynomial& r = row[static_cast<std::size_t>(b)];
        for (std::int64_t i = 0; i <= deg; ++i)
            if (dense[static_cast<std::size_t>(i)] != 0)
                r.add_term(HalfExp::integer(i), dense[static_cast<std::size_t>(i)]);
    }
    std::lock_guard lk(cache.m);
    for (std::int64_t b = 1; b < B; ++b)  // the whole row is a by-product
        cache.table.emplace(std::make_pair(A, b), std::move(row[static_cast<std::size_t>(b)]));
    return cache.table.emplace(std::make_pair(A, B), std::move(row[static_cast<std::size_t>(B)]))
        .first->second;
}

// One factor (c; q^mod)_inf^power of a product expression such as
// 1/(q, q^4; q^5)_inf. Negative powers are reciprocals.
struct ProductFactor {
    SignedPower base;
    std::int64_t modulus = 1;
    int power = 1;
};

inline QSeries product_list(const std::vector<ProductFactor>& factors, HalfExp order) {
    QSeries r = QSeries::one(order);
    for (const auto& f : factors) {
        if (f.base.is_one()) throw error("product_list: factor equal to 1");
        if (f.power == 0) continue;
        QSeries g = pochhammer_infinite(f.base, f.modulus, order);
        if (f.power < 0) g = invert_leading_unit(g);
        for (int i = 0; i < (f.power < 0 ? -f.power : f.power); ++i) r = r * g;
    }
    return r;
}

// Checks the triple-product instance used in the Andrews-Gordon derivation:
//   sum_{r in Z} (-1)^r q^(k r^2 + binom(r,2) + (k-i+1) r)
//     = (q^i, q^(2k+1-i), q^(2k+1); q^(2k+1))_inf.
// The bilateral sum is finite at any order because the exponent grows
// quadratically in |r|.
struct TripleProductReport {
    bool equal = false;
    QSeries lhs, rhs;
};

inline TripleProductReport triple_product_check(std::int64_t k, std::int64_t i,
                                                HalfExp order) {
    if (k < 1 || i < 1 || i > k) throw error("triple_product_check: need 1 <= i <= k");
    QSeries lhs(order);
    for (std::int64_t r = 0;; ++r) {
        bool any = false;
        const auto add = [&](std::int64_t s) {
            const std::int64_t e2 = 2 * k * s * s + s * (s - 1) + 2 * (k - i + 1) * s;
            const HalfExp e = HalfExp::half_steps(e2);
            if (e <= order) {
                any = true;
                lhs.add_term(e, (s % 2 == 0) ? 1 : -1);
            }
        };
        add(r);
        if (r > 0) add(-r);
        if (!any && r > 0) break;
    }
    const std::int64_t m = 2 * k + 1;
    QSeries rhs = product_list({{SignedPower::q_to(i), m, 1},
                                {SignedPower::q_to(m - i), m, 1},
                                {SignedPower::q_to(m), m, 1}},
                               order);
    return {agree_to(lhs, rhs, std::min(lhs.order(), rhs.order())), lhs, rhs};
}

// q^shift * x(1/q) for exact polynomials. Truncated series are rejected at
// the type level: there is no series overload (the substitution needs the
// full coefficient list).
inline QPolynomial reverse_q(const QPolynomial& x, HalfExp shift) {
    return x.reversed(shift);
}

}  // namespace qseries
