// Exact sparse Laurent polynomials in q on the half-integer exponent grid.
#pragma once

#include <map>
#include <optional>
#include <utility>

#include "qseries/types.hpp"

namespace qseries {

// Invariants: no stored zero coefficients; exponents unique (map keys);
// equality is term-by-term. Values are immutable in spirit: every operation
// returns a fresh polynomial.
class QPolynomial {
public:
    using TermMap = std::map<HalfExp, Int>;

    QPolynomial() = default;

    static QPolynomial zero() { return {}; }

    static QPolynomial one() { return monomial(1, HalfExp{0}); }

    static QPolynomial monomial(Int c, HalfExp e) {
        QPolynomial p;
        if (c != 0) p.terms_.emplace(e, std::move(c));
        return p;
    }

    static QPolynomial from_terms(TermMap terms) {
        QPolynomial p;
        p.terms_ = std::move(terms);
        for (auto it = p.terms_.begin(); it != p.terms_.end();)
            it = (it->second == 0) ? p.terms_.erase(it) : std::next(it);
        return p;
    }

    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }
    const TermMap& terms() const { return terms_; }

    Int coeff(HalfExp e) const {
        auto it = terms_.find(e);
        return it == terms_.end() ? Int(0) : it->second;
    }

    std::optional<HalfExp> valuation() const {
        if (terms_.empty()) return std::nullopt;
        return terms_.begin()->first;
    }

    std::optional<HalfExp> degree() const {
        if (terms_.empty()) return std::nullopt;
        return terms_.rbegin()->first;
    }

    void add_term(HalfExp e, const Int& c) {
        if (c == 0) return;
        auto [it, inserted] = terms_.emplace(e, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    QPolynomial& operator+=(const QPolynomial& o) {
        for (const auto& [e, c] : o.terms_) add_term(e, c);
        return *this;
    }

    QPolynomial& operator-=(const QPolynomial& o) {
        for (const auto& [e, c] : o.terms_) add_term(e, -c);
        return *this;
    }

    friend QPolynomial operator+(QPolynomial a, const QPolynomial& b) { return a += b; }
    friend QPolynomial operator-(QPolynomial a, const QPolynomial& b) { return a -= b; }

    QPolynomial operator-() const {
        QPolynomial r;
        for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
        return r;
    }

    friend QPolynomial operator*(const QPolynomial& a, const QPolynomial& b) {
        QPolynomial r;
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) r.add_term(ea + eb, ca * cb);
        return r;
    }

    QPolynomial& operator*=(const QPolynomial& o) { return *this = *this * o; }

    QPolynomial scaled(const Int& k) const {
        QPolynomial r;
        if (k == 0) return r;
        for (const auto& [e, c] : terms_) r.terms_.emplace(e, c * k);
        return r;
    }

    // Multiplication by the monomial q^shift.
    QPolynomial shifted(HalfExp shift) const {
        QPolynomial r;
        for (const auto& [e, c] : terms_) r.terms_.emplace(e + shift, c);
        return r;
    }

    // q |-> 1/q followed by multiplication with q^shift, i.e.
    // q^shift * x(1/q). Exact; an involution when shift = 0.
    QPolynomial reversed(HalfExp shift) const {
        QPolynomial r;
        for (const auto& [e, c] : terms_) r.terms_.emplace(shift - e, c);
        return r;
    }

    friend bool operator==(const QPolynomial&, const QPolynomial&) = default;

private:
    TermMap terms_;
};

// Exact division: returns num/den, requiring that the division leaves no
// remainder and that den's lowest coefficient is a unit (+-1), so the
// quotient stays over the integers. Throws on failure.
inline QPolynomial exact_divide(QPolynomial num, const QPolynomial& den) {
    if (den.is_zero()) throw error("exact_divide: division by zero polynomial");
    if (num.is_zero()) return num;
    const HalfExp dval = *den.valuation();
    const Int dlow = den.coeff(dval);
    if (dlow != 1 && dlow != -1)
        throw error("exact_divide: divisor's lowest coefficient is not a unit");
    const HalfExp max_quot_exp = *num.degree() - *den.degree();
    QPolynomial quot;
    while (!num.is_zero()) {
        const HalfExp nval = *num.valuation();
        const HalfExp qe = nval - dval;
        if (qe > max_quot_exp) throw error("exact_divide: division is not exact");
        Int qc = num.coeff(nval) * dlow;  // dlow is +-1, so this is division
        quot.add_term(qe, qc);
        for (const auto& [e, c] : den.terms()) num.add_term(qe + e, -(qc * c));
    }
    return quot;
}

}  // namespace qseries
