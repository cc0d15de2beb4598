// A_1^(1) string functions from the Hecke-type indefinite double sum, the
// conjugate Bailey pairs built on them, the binomial-difference conjugate
// pairs, and the summation formula behind the latter.
#pragma once

#include <cmath>
#include <cstdlib>

#include "qseries/bailey.hpp"
#include "qseries/configsum.hpp"

namespace qseries {

struct StringFunctionQuery {
    PPPair pp;
    std::int64_t m = 0;
    int ell = 0;

    StringFunctionQuery(PPPair pp_, std::int64_t m_, int ell_) : pp(pp_), m(m_), ell(ell_) {
        if (!(0 <= ell && ell <= pp.p_prime - 2))
            throw error("StringFunctionQuery: need 0 <= ell <= p'-2");
    }
};

namespace detail {

// One region of the double sum: j runs over a half line (j >= j_from if
// from_below, else j <= j_from), i over a half line away from the boundary.
// For fixed i the exponent is an upward parabola in j, so the admissible j
// window around the clamped vertex is scanned exactly, and the constrained
// minimum drives the certified cutoff in i: three consecutive i with all
// admissible exponents beyond the order and strictly increasing minima.
// The minima can dip negative near |i| ~ m before growing; the rule only
// fires on the far side of the dip.
struct StringRegion {
    std::int64_t p, pp, m;
    std::int64_t lsign;  // +1 or -1 on the (l+1)(2pj+i)/2 term
    std::int64_t lplus1;

    // doubled exponent 2E(i, j)
    std::int64_t e2(std::int64_t i, std::int64_t j) const {
        return i * (i + m) + 2 * pp * j * (p * j + i) + lsign * lplus1 * (2 * p * j + i);
    }

    std::int64_t vertex_j(std::int64_t i) const {
        // minimize over real j: 2E = 2pp j^2 + (2pp' i ... ) j + c
        const double a = 2.0 * static_cast<double>(p) * static_cast<double>(pp);
        const double b = 2.0 * static_cast<double>(pp) * static_cast<double>(i) +
                         2.0 * static_cast<double>(lsign * lplus1 * p);
        return static_cast<std::int64_t>(std::llround(-b / (2.0 * a)));
    }
};

inline void string_region_sum(QSeries& acc, int overall_sign, const StringRegion& reg,
                              std::int64_t i_from, std::int64_t i_step, std::int64_t j_from,
                              std::int64_t j_step, HalfExp order, const std::string& what) {
    const std::int64_t bound = order.halves;
    std::vector<std::int64_t> beyond;
    const std::int64_t cap =
        8 * (std::llabs(reg.m) + reg.lplus1 + reg.p + reg.pp) +
        8 * static_cast<std::int64_t>(std::sqrt(static_cast<double>(std::max<std::int64_t>(bound, 0)) + 1.0)) +
        64;
    for (std::int64_t step = 0; step < cap; ++step) {
        const std::int64_t i = i_from + i_step * step;
        // clamp the parabola vertex into the region
        std::int64_t j0 = reg.vertex_j(i);
        if (j_step > 0 && j0 < j_from) j0 = j_from;
        if (j_step < 0 && j0 > j_from) j0 = j_from;
        std::int64_t min_e2 = reg.e2(i, j0);
        const int term_sign = (i % 2 == 0 ? 1 : -1) * overall_sign;
        // scan outward in both directions from j0, staying in the region;
        // the exponent is an upward parabola in j, so once it exceeds the
        // bound while non-decreasing in the scan direction it stays beyond
        for (int dir : {+1, -1}) {
            std::int64_t j = (dir == +1) ? j0 : j0 - 1;
            while ((j_step > 0) ? (j >= j_from) : (j <= j_from)) {
                const std::int64_t e = reg.e2(i, j);
                if (e < min_e2) min_e2 = e;
                if (e <= bound) {
                    acc.add_term(HalfExp::half_steps(e), term_sign);
                } else if (reg.e2(i, j + dir) >= e) {
                    break;
                }
                j += dir;
            }
        }
        if (min_e2 > bound) {
            if (!beyond.empty() && beyond.back() > min_e2)
                throw tail_error(what + ": region minima decreased at i = " +
                                 std::to_string(i));
            beyond.push_back(min_e2);
            if (beyond.size() >= 3) return;
        } else {
            beyond.clear();
        }
    }
    throw tail_error(what + ": no certified i-cutoff within " + std::to_string(cap) + " rows");
}

}  // namespace detail

// Normalized level-(p'/p - 2) string function C^{(p,p')}_{m,l}(q): the
// sign-alternating double sum over the two Hecke regions divided by
// (q)_inf^3. Zero unless m + l is even.
inline QSeries string_function(const StringFunctionQuery& qy, HalfExp order) {
    if ((qy.m + qy.ell) % 2 != 0) return QSeries::zero(order);
    const std::int64_t p = qy.pp.p, pp = qy.pp.p_prime;
    QSeries raw(order);
    const std::string what = "C(" + qy.pp.str() + ")_{" + std::to_string(qy.m) + "," +
                             std::to_string(qy.ell) + "}";
    const detail::StringRegion plus{p, pp, qy.m, +1, qy.ell + 1};
    const detail::StringRegion minus{p, pp, qy.m, -1, qy.ell + 1};
    // { sum_{i>=0, j>=0} - sum_{i<0, j<0} } (-1)^i q^(E+)
    detail::string_region_sum(raw, +1, plus, 0, +1, 0, +1, order, what);
    detail::string_region_sum(raw, -1, plus, -1, -1, -1, -1, order, what);
    // - { sum_{i>=0, j>0} - sum_{i<0, j<=0} } (-1)^i q^(E-)
    detail::string_region_sum(raw, -1, minus, 0, +1, 1, +1, order, what);
    detail::string_region_sum(raw, +1, minus, -1, -1, 0, -1, order, what);
    const QSeries inv_eta = inv_pochhammer_infinite(SignedPower::q_to(1), 1, order);
    return ((raw * inv_eta) * inv_eta) * inv_eta;
}

// Theorem thmCBP2: gamma_L = (q)_eta C^{(p,p')}_{2L+eta, l},
// delta_L = X^{(p,p')}_{0, l+1}(2L+eta, 1), a conjugate pair relative to
// q^eta. The (q)_eta prefactor and the parity constraint are enforced here.
inline ConjugatePair conj_pair_cbp2(PPPair pp, int eta, int ell) {
    if (eta < 0) throw error("conj_pair_cbp2: eta must be nonnegative");
    if (!(0 <= ell && ell <= pp.p_prime - 2))
        throw error("conj_pair_cbp2: need 0 <= ell <= p'-2");
    if ((ell + eta) % 2 != 0) throw error("conj_pair_cbp2: ell + eta must be even");
    ConjugatePair cp;
    cp.eta = eta;
    cp.label = "cbp2(" + pp.str() + ",eta=" + std::to_string(eta) +
               ",ell=" + std::to_string(ell) + ")";
    const QPolynomial prefactor = pochhammer(SignedPower::q_to(1), eta);
    cp.gamma = SeriesGen([pp, eta, ell, prefactor](int L, HalfExp order) {
        const QSeries c = string_function(StringFunctionQuery(pp, 2 * std::int64_t(L) + eta, ell),
                                          order);
        return (c * prefactor).truncated(order);
    });
    cp.delta_exact = [pp, eta, ell](int L) {
        if (L < 0) return QPolynomial::zero();
        return x_bosonic(ConfigSumQuery(pp, 0, ell + 1, 2 * std::int64_t(L) + eta, 1));
    };
    const PolyGen dx = cp.delta_exact;
    cp.delta = SeriesGen([dx](int L, HalfExp order) { return series_with_leading(dx(L), order); });
    return cp;
}

// The binomial-difference conjugate pairs (relative to q^eta, any integer j):
//   delta_L = [2L+eta; L-j] - [2L+eta; L-j-1],
//   gamma_L = 1/((q)_inf^2 (aq)_inf) sum_{i>=1} (-1)^i q^(i(i+2L+eta)/2)
//             { q^(i(2j+eta+1)/2) - q^(-i(2j+eta+1)/2) }.
inline ConjugatePair conj_pair_binomial(int eta, int j) {
    if (eta < 0) throw error("conj_pair_binomial: eta must be nonnegative");
    ConjugatePair cp;
    cp.eta = eta;
    cp.label = "K(eta=" + std::to_string(eta) + ",j=" + std::to_string(j) + ")";
    cp.gamma = SeriesGen([eta, j](int L, HalfExp order) {
        const std::string what = "K gamma(L=" + std::to_string(L) + ")";
        const QSeries isum = certified_tail_sum(order, 1, what, [&](int i_) {
            const std::int64_t i = i_;
            const std::int64_t base = i * (i + 2 * std::int64_t(L) + eta);
            const std::int64_t off = i * (2 * std::int64_t(j) + eta + 1);
            QSeries t(order);
            const Int sgn = (i % 2 == 0) ? 1 : -1;
            t.add_term(HalfExp::half_steps(base + off), sgn);
            t.add_term(HalfExp::half_steps(base - off), -sgn);
            return t;
        });
        const QSeries invq = inv_pochhammer_infinite(SignedPower::q_to(1), 1, order);
        const QSeries invaq = inv_pochhammer_infinite(SignedPower::q_to(eta + 1), 1, order);
        return (((isum * invq) * invq) * invaq).truncated(order);
    });
    cp.delta_exact = [eta, j](int L) {
        if (L < 0) return QPolynomial::zero();
        return q_binomial(2 * std::int64_t(L) + eta, L - j) -
               q_binomial(2 * std::int64_t(L) + eta, std::int64_t(L) - j - 1);
    };
    const PolyGen dx = cp.delta_exact;
    cp.delta = SeriesGen([dx](int L, HalfExp order) { return series_with_leading(dx(L), order); });
    return cp;
}

// The summation formula behind the binomial-difference pairs, specialized to
// a = q^x, b = q^y (x = y = 0 is rejected: (ab)_r degenerates at ab = 1):
//   sum_{r>=0} q^r (ab)_{2r} / ((q)_r (ab)_r (aq)_r (bq)_r)
//     = 1/((q)_inf (aq)_inf (bq)_inf) sum_{i>=1} (-1)^(i-1) q^binom(i,2)
//       (a^i - b^i)/(a - b),
// with (a^i - b^i)/(a - b) expanded as sum_{t<i} a^(i-1-t) b^t, valid also
// at x = y.
struct SummationCheck {
    bool equal = false;
    QSeries lhs, rhs;
};

inline SummationCheck summation_formula_check(int x, int y, HalfExp order) {
    if (x < 0 || y < 0) throw error("summation_formula_check: need x, y >= 0");
    if (x == 0 && y == 0)
        throw error("summation_formula_check: x = y = 0 degenerates (ab)_r");
    const QSeries lhs = certified_tail_sum(order, 0, "summation lhs", [&](int r_) {
        const std::int64_t r = r_;
        // (ab)_{2r}/(ab)_r = (ab q^r)_r with ab = q^(x+y)
        QSeries t(order);
        t.add_term(HalfExp::integer(r), 1);
        t = t * pochhammer_truncated(SignedPower::q_to(x + y + r), r, order);
        t = t * inv_pochhammer(SignedPower::q_to(1), r, order);
        t = t * inv_pochhammer(SignedPower::q_to(x + 1), r, order);
        return (t * inv_pochhammer(SignedPower::q_to(y + 1), r, order)).truncated(order);
    });
    QSeries isum = certified_tail_sum(order, 1, "summation rhs", [&](int i_) {
        const std::int64_t i = i_;
        QSeries t(order);
        const Int sgn = (i % 2 == 1) ? 1 : -1;
        for (std::int64_t tt = 0; tt < i; ++tt)
            t.add_term(HalfExp::integer(i * (i - 1) / 2 + x * (i - 1 - tt) + y * tt), sgn);
        return t;
    });
    QSeries rhs = isum * inv_pochhammer_infinite(SignedPower::q_to(1), 1, order);
    rhs = rhs * inv_pochhammer_infinite(SignedPower::q_to(x + 1), 1, order);
    rhs = (rhs * inv_pochhammer_infinite(SignedPower::q_to(y + 1), 1, order)).truncated(order);
    const HalfExp limit = std::min({order, lhs.order(), rhs.order()});
    return {agree_to(lhs, rhs, limit), lhs, rhs};
}

}  // namespace qseries
