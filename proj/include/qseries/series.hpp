// Truncated formal series in q on the half-integer grid. A QSeries knows its
// coefficients for every exponent <= order(); anything beyond is unknown, and
// arithmetic propagates orders so that no unknown coefficient is ever claimed.
#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "qseries/polynomial.hpp"
#include "qseries/types.hpp"

namespace qseries {

class QSeries {
public:
    using TermMap = std::map<HalfExp, Int>;

    explicit QSeries(HalfExp order) : order_(order) {}

    static QSeries zero(HalfExp order) { return QSeries(order); }

    static QSeries one(HalfExp order) {
        QSeries s(order);
        s.add_term(HalfExp{0}, 1);
        return s;
    }

    static QSeries monomial(Int c, HalfExp e, HalfExp order) {
        QSeries s(order);
        s.add_term(e, std::move(c));
        return s;
    }

    // The one sanctioned conversion: polynomial -> series at a stated order.
    QSeries(const QPolynomial& p, HalfExp order) : order_(order) {
        for (const auto& [e, c] : p.terms())
            if (e <= order_) terms_.emplace(e, c);
    }

    HalfExp order() const { return order_; }
    bool is_zero() const { return terms_.empty(); }
    const TermMap& terms() const { return terms_; }

    std::optional<HalfExp> valuation() const {
        if (terms_.empty()) return std::nullopt;
        return terms_.begin()->first;
    }

    // Coefficient of q^e; e must lie within the known range.
    Int coeff(HalfExp e) const {
        if (e > order_) throw error("QSeries::coeff beyond truncation order");
        auto it = terms_.find(e);
        return it == terms_.end() ? Int(0) : it->second;
    }

    void add_term(HalfExp e, const Int& c) {
        if (c == 0 || e > order_) return;
        auto [it, inserted] = terms_.emplace(e, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    QSeries truncated(HalfExp new_order) const {
        QSeries r(std::min(order_, new_order));
        for (const auto& [e, c] : terms_)
            if (e <= r.order_) r.terms_.emplace(e, c);
        return r;
    }

    friend QSeries operator+(const QSeries& a, const QSeries& b) {
        QSeries r(std::min(a.order_, b.order_));
        for (const auto& [e, c] : a.terms_) r.add_term(e, c);
        for (const auto& [e, c] : b.terms_) r.add_term(e, c);
        return r;
    }

    friend QSeries operator-(const QSeries& a, const QSeries& b) {
        QSeries r(std::min(a.order_, b.order_));
        for (const auto& [e, c] : a.terms_) r.add_term(e, c);
        for (const auto& [e, c] : b.terms_) r.add_term(e, -c);
        return r;
    }

    QSeries operator-() const {
        QSeries r(order_);
        for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
        return r;
    }

    // Product order: unknown terms of a enter the product only at exponents
    // beyond order(a) + val(b), and symmetrically, so everything up to the
    // smaller of those two bounds is determined. For valuation-0 operands
    // this is the usual min of the operand orders.
    friend QSeries operator*(const QSeries& a, const QSeries& b) {
        const HalfExp bound =
            std::min(a.order_ + b.val_lower_bound(), b.order_ + a.val_lower_bound());
        QSeries r(bound);
        for (const auto& [ea, ca] : a.terms_) {
            if (b.terms_.empty()) break;
            if (ea + b.terms_.begin()->first > bound) continue;
            for (const auto& [eb, cb] : b.terms_) {
                if (ea + eb > bound) break;
                r.add_term(ea + eb, ca * cb);
            }
        }
        return r;
    }

    // Multiplying by an exact polynomial shifts the known range by the
    // polynomial's valuation (the polynomial carries no unknown terms).
    friend QSeries operator*(const QSeries& s, const QPolynomial& p) {
        if (p.is_zero()) return QSeries(s.order_);
        QSeries r(s.order_ + *p.valuation());
        for (const auto& [ea, ca] : s.terms_)
            for (const auto& [eb, cb] : p.terms()) {
                if (ea + eb > r.order_) break;
                r.add_term(ea + eb, ca * cb);
            }
        return r;
    }

    friend QSeries operator*(const QPolynomial& p, const QSeries& s) { return s * p; }

    friend QSeries operator+(const QSeries& s, const QPolynomial& p) {
        QSeries r = s;
        for (const auto& [e, c] : p.terms()) r.add_term(e, c);
        return r;
    }

    friend QSeries operator-(const QSeries& s, const QPolynomial& p) {
        QSeries r = s;
        for (const auto& [e, c] : p.terms()) r.add_term(e, -c);
        return r;
    }

    QSeries scaled(const Int& k) const {
        QSeries r(order_);
        if (k == 0) return r;
        for (const auto& [e, c] : terms_) r.terms_.emplace(e, c * k);
        return r;
    }

    QSeries shifted(HalfExp shift) const {
        QSeries r(order_ + shift);
        for (const auto& [e, c] : terms_) r.terms_.emplace(e + shift, c);
        return r;
    }

    // Stored terms and order both equal. For "same up to an order" use
    // agree_to / first_mismatch below.
    friend bool operator==(const QSeries&, const QSeries&) = default;

private:
    // Least exponent a nonzero term may have: the stored valuation, or just
    // beyond the order when nothing is stored.
    HalfExp val_lower_bound() const {
        if (!terms_.empty()) return terms_.begin()->first;
        return order_ + HalfExp::half_steps(1);
    }

    TermMap terms_;
    HalfExp order_;
};

// Polynomial -> series conversion that never hides the valuation: when the
// polynomial lies entirely beyond the requested order, the result is issued
// at the valuation instead, so certified tail sums can see the term's least
// exponent. Sound because every coefficient of an exact polynomial is known.
inline QSeries series_with_leading(const QPolynomial& p, HalfExp order) {
    const auto v = p.valuation();
    if (v && *v > order) return QSeries(p, *v);
    return QSeries(p, order);
}

// First exponent <= limit where the two series disagree, if any. The limit
// must not exceed either order (unknown coefficients cannot be compared).
inline std::optional<HalfExp> first_mismatch(const QSeries& a, const QSeries& b,
                                             HalfExp limit) {
    if (limit > a.order() || limit > b.order())
        throw error("first_mismatch: comparison limit exceeds a truncation order");
    auto ia = a.terms().begin(), ib = b.terms().begin();
    while (ia != a.terms().end() || ib != b.terms().end()) {
        const bool va = ia != a.terms().end() && ia->first <= limit;
        const bool vb = ib != b.terms().end() && ib->first <= limit;
        if (!va && !vb) break;
        if (va && (!vb || ia->first < ib->first)) return ia->first;
        if (vb && (!va || ib->first < ia->first)) return ib->first;
        if (ia->second != ib->second) return ia->first;
        ++ia, ++ib;
    }
    return std::nullopt;
}

inline bool agree_to(const QSeries& a, const QSeries& b, HalfExp limit) {
    return !first_mismatch(a, b, limit).has_value();
}

// Inverse of a series whose lowest coefficient is a unit (+-1). The public
// entry point invert_unit_series (qfuncs.hpp) additionally insists on a
// constant term of +-1; this internal routine also handles the Laurent case
// q^v * unit, which arises from half-step rho specializations.
inline QSeries invert_leading_unit(const QSeries& x) {
    auto val = x.valuation();
    if (!val) throw error("invert: series is zero to its order");
    const Int lead = x.terms().begin()->second;
    if (lead != 1 && lead != -1)
        throw error("invert: lowest coefficient is not +-1, not invertible over the integers");
    const HalfExp v = *val;
    // u = x shifted to valuation 0; known to order(x) - v.
    const HalfExp uord = x.order() - v;
    const std::int64_t n = uord.halves;
    if (n < 0) throw error("invert: no known range left after valuation shift");
    std::vector<Int> u(static_cast<std::size_t>(n) + 1), b(static_cast<std::size_t>(n) + 1);
    for (const auto& [e, c] : x.terms()) {
        const std::int64_t h = (e - v).halves;
        if (h <= n) u[static_cast<std::size_t>(h)] = c;
    }
    b[0] = lead;  // lead is its own inverse
    for (std::int64_t k = 1; k <= n; ++k) {
        Int acc = 0;
        for (std::int64_t t = 1; t <= k; ++t)
            if (u[static_cast<std::size_t>(t)] != 0 && b[static_cast<std::size_t>(k - t)] != 0)
                acc += u[static_cast<std::size_t>(t)] * b[static_cast<std::size_t>(k - t)];
        b[static_cast<std::size_t>(k)] = -lead * acc;
    }
    // 1/x = q^(-v) * (1/u); 1/u is known to uord, so the result to uord - v.
    QSeries r(uord - v);
    for (std::int64_t k = 0; k <= n; ++k)
        if (b[static_cast<std::size_t>(k)] != 0)
            r.add_term(HalfExp::half_steps(k) - v, b[static_cast<std::size_t>(k)]);
    return r;
}

}  // namespace qseries
