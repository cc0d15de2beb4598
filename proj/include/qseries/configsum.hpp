// One-dimensional configuration sums of the Andrews-Baxter-Forrester model:
// exact bosonic evaluation, the fermionic forms built on the fractional
// incidence/Cartan matrices of the continued fraction of p/(p'-p), the
// q -> 1/q dualities, and the Bailey pair family they generate.
#pragma once

#include <numeric>
#include <vector>

#include "qseries/bailey.hpp"
#include "qseries/qfuncs.hpp"

namespace qseries {

struct PPPair {
    int p = 1, p_prime = 2;

    PPPair(int p_, int p_prime_) : p(p_), p_prime(p_prime_) {
        if (!(1 <= p && p < p_prime)) throw error("PPPair: need 1 <= p < p'");
        if (std::gcd(p, p_prime) != 1) throw error("PPPair: p and p' must be coprime");
    }

    std::string str() const { return std::to_string(p) + "," + std::to_string(p_prime); }
};

// Continued fraction digits of p/(p'-p) = [nu_0, nu_1, ..., nu_n], greedy
// normalization with a trailing 1 absorbed so the expansion is unique. The
// p' = p+1 and tadpole special cases of the incidence matrix serve as the
// regression tests pinning this normalization down.
inline std::vector<int> continued_fraction(PPPair pp) {
    if (!(pp.p < pp.p_prime && pp.p_prime < 2 * pp.p))
        throw error("continued_fraction: need p < p' < 2p (dualize first)");
    int num = pp.p, den = pp.p_prime - pp.p;
    std::vector<int> nu;
    while (den != 0) {
        nu.push_back(num / den);
        const int rem = num % den;
        num = den;
        den = rem;
    }
    if (nu.size() >= 2 && nu.back() == 1) {
        nu.pop_back();
        nu.back() += 1;
    }
    // mandatory reconstruction check
    long rn = nu.back(), rd = 1;
    for (auto it = std::next(nu.rbegin()); it != nu.rend(); ++it) {
        const long nn = *it * rn + rd;
        rd = rn;
        rn = nn;
    }
    if (rn != pp.p || rd != pp.p_prime - pp.p)
        throw error("continued_fraction: reconstruction failed for " + pp.str());
    return nu;
}

// (p, p') data derived from the continued fraction: positions t_m, dimension
// d, fractional incidence matrix I and Cartan-type matrix B = 2*Id - I.
// I is not symmetric in general; quadratic forms use mBm as written.
struct FractionalStructure {
    std::vector<int> nu;
    std::vector<int> t;  // t_1..t_n (1-based values)
    int d = 0;
    std::vector<std::vector<int>> inc;     // d x d, entries in {-1, 0, 1}
    std::vector<std::vector<int>> cartan;  // B = 2I - inc

    // (I m)_j for 1-based row j.
    std::int64_t inc_row_dot(int j, const std::vector<std::int64_t>& m) const {
        std::int64_t acc = 0;
        for (int k = 1; k <= d; ++k) acc += inc[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(k - 1)] * m[static_cast<std::size_t>(k - 1)];
        return acc;
    }

    std::int64_t quadratic_form(const std::vector<std::int64_t>& u) const {
        std::int64_t acc = 0;
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k)
                acc += u[static_cast<std::size_t>(j)] * cartan[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] * u[static_cast<std::size_t>(k)];
        return acc;
    }
};

inline FractionalStructure fractional_matrices(const std::vector<int>& nu) {
    if (nu.empty()) throw error("fractional_matrices: empty digit list");
    FractionalStructure fs;
    fs.nu = nu;
    const int n = static_cast<int>(nu.size()) - 1;
    int sum = 0;
    for (int m = 1; m <= n; ++m) {
        sum += nu[static_cast<std::size_t>(m - 1)];
        fs.t.push_back(sum);
    }
    fs.d = -2 + std::accumulate(nu.begin(), nu.end(), 0);
    if (fs.d < 0) throw error("fractional_matrices: dimension would be negative");
    const int d = fs.d;
    fs.inc.assign(static_cast<std::size_t>(d), std::vector<int>(static_cast<std::size_t>(d), 0));
    fs.cartan.assign(static_cast<std::size_t>(d), std::vector<int>(static_cast<std::size_t>(d), 0));
    const bool last_is_two = nu.back() == 2;
    const int t_case_max = n - (last_is_two ? 1 : 0);
    const auto is_t_row = [&](int i) {
        for (int m = 1; m <= t_case_max; ++m)
            if (fs.t[static_cast<std::size_t>(m - 1)] == i) return true;
        return false;
    };
    const auto set = [&](int i, int j, int v) {
        if (1 <= j && j <= d) fs.inc[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)] += v;
    };
    for (int i = 1; i <= d; ++i) {
        if (i == d) {
            set(i, i - 1, 1);
            if (last_is_two) set(i, i, 1);
        } else if (is_t_row(i)) {
            set(i, i - 1, 1);
            set(i, i, 1);
            set(i, i + 1, -1);
        } else {
            set(i, i - 1, 1);
            set(i, i + 1, 1);
        }
    }
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            fs.cartan[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                (i == j ? 2 : 0) - fs.inc[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    return fs;
}

inline FractionalStructure fractional_structure(PPPair pp) {
    return fractional_matrices(continued_fraction(pp));
}

// A configuration sum query X^{(p,p')}_{r,s}(L, b).
struct ConfigSumQuery {
    PPPair pp;
    int r = 0, s = 1, b = 1;
    std::int64_t L = 0;

    ConfigSumQuery(PPPair pp_, int r_, int s_, std::int64_t L_, int b_)
        : pp(pp_), r(r_), s(s_), b(b_), L(L_) {
        if (!(1 <= b && b <= pp.p_prime - 1)) throw error("ConfigSumQuery: need 1 <= b <= p'-1");
        if (!(1 <= s && s <= pp.p_prime - 1)) throw error("ConfigSumQuery: need 1 <= s <= p'-1");
        if (!(0 <= r && r <= pp.p - 1)) throw error("ConfigSumQuery: need 0 <= r <= p-1");
        if (L < 0) throw error("ConfigSumQuery: need L >= 0");
        if ((L + s + b) % 2 != 0) throw error("ConfigSumQuery: L + s + b must be even");
    }
};

// Exact evaluation of the alternating j-sum
//   X^{(p,p')}_{r,s}(L,b) = sum_j { q^(j(pp'j+p'r-ps)) [L; (L+s-b)/2 - p'j]
//                                 - q^((pj+r)(p'j+s)) [L; (L-s-b)/2 - p'j] }.
// The j window is finite because the binomials vanish outside it.
inline QPolynomial x_bosonic(const ConfigSumQuery& qy) {
    const std::int64_t p = qy.pp.p, pp = qy.pp.p_prime;
    const std::int64_t L = qy.L, r = qy.r, s = qy.s, b = qy.b;
    const std::int64_t J = (L + s + b) / (2 * pp) + 2;
    QPolynomial x;
    for (std::int64_t j = -J; j <= J; ++j) {
        const QPolynomial bin1 = q_binomial(L, (L + s - b) / 2 - pp * j);
        if (!bin1.is_zero())
            x += bin1.shifted(HalfExp::integer(j * (p * pp * j + pp * r - p * s)));
        const QPolynomial bin2 = q_binomial(L, (L - s - b) / 2 - pp * j);
        if (!bin2.is_zero())
            x -= bin2.shifted(HalfExp::integer((p * j + r) * (pp * j + s)));
    }
    return x;
}

namespace detail {

// Binomial convention of the fermionic forms: [n; b] vanishes unless
// 0 <= b <= n, except that b = 0 is the empty product (equal to 1) for any
// top. This is what makes the sums manifestly positive with finite support.
inline QPolynomial fermi_binomial(std::int64_t n, std::int64_t b) {
    if (b < 0) return QPolynomial::zero();
    if (b == 0) return QPolynomial::one();
    if (n < b) return QPolynomial::zero();
    return q_binomial(n, b);
}

// Shared enumerator for the fermionic forms: sums term(u) over
// u in [0, cap]^d (m = 2u) and certifies that the boundary shell
// contributes nothing, growing the box if it does.
template <class TermFn>
QPolynomial fermionic_box_sum(int d, std::int64_t cap0, TermFn term) {
    if (d == 0) {
        std::vector<std::int64_t> empty;
        return term(empty, false).first;  // single empty term
    }
    std::int64_t cap = std::max<std::int64_t>(cap0, 2);
    for (int attempt = 0; attempt < 7; ++attempt) {
        QPolynomial acc;
        bool shell_dirty = false;
        std::vector<std::int64_t> u(static_cast<std::size_t>(d), 0);
        while (true) {
            bool on_shell = false;
            for (int j = 0; j < d; ++j) on_shell |= u[static_cast<std::size_t>(j)] == cap;
            auto [value, nonzero] = term(u, on_shell);
            if (on_shell && nonzero) {
                shell_dirty = true;
                break;
            }
            if (!on_shell) acc += value;
            int pos = 0;
            while (pos < d && u[static_cast<std::size_t>(pos)] == cap) {
                u[static_cast<std::size_t>(pos)] = 0;
                ++pos;
            }
            if (pos == d) break;
            ++u[static_cast<std::size_t>(pos)];
        }
        if (!shell_dirty) return acc;
        cap *= 2;
    }
    throw error("fermionic sum: support did not close inside the search box");
}

}  // namespace detail

// Fermionic form of Theorem thmF:
//   X^{(p,p')}_{r,s}(2L, s) = sum_{m in 2Z^d} q^(mBm/4)
//       prod_j [ L delta_{j,1} + (I m)_j / 2 ; m_j ].
inline QPolynomial x_fermionic(PPPair pp, int r, int s, std::int64_t L) {
    if (!(1 < pp.p && pp.p_prime < 2 * pp.p))
        throw error("x_fermionic: need 1 < p < p' < 2p");
    const std::int64_t det = std::int64_t(pp.p_prime) * r - std::int64_t(pp.p) * s;
    if (det != 1 && det != -1) throw error("x_fermionic: need |p'r - ps| = 1");
    if (!(1 <= s && s <= pp.p_prime - 1)) throw error("x_fermionic: need 1 <= s <= p'-1");
    if (L < 0) throw error("x_fermionic: need L >= 0");
    const FractionalStructure fs = fractional_structure(pp);
    return detail::fermionic_box_sum(
        fs.d, 2 * L + 3, [&](const std::vector<std::int64_t>& u, bool) {
            std::vector<std::int64_t> m(u.size());
            for (std::size_t i = 0; i < u.size(); ++i) m[i] = 2 * u[i];
            QPolynomial t = QPolynomial::one();
            for (int j = 1; j <= fs.d && !t.is_zero(); ++j) {
                const std::int64_t im = fs.inc_row_dot(j, m);
                const std::int64_t top = (j == 1 ? L : 0) + im / 2;
                t *= detail::fermi_binomial(top, m[static_cast<std::size_t>(j - 1)]);
            }
            if (t.is_zero()) return std::make_pair(t, false);
            t = t.shifted(HalfExp::integer(fs.quadratic_form(u)));
            return std::make_pair(t, true);
        });
}

// Fermionic form of Theorem thmF2 for X^{(p,p')}_{0,1}(2L, 1):
//   q^L sum_{m in 2Z^d} q^(mBm/4 + (1/2) sum_i m_{t_i})
//       prod_j [ L delta_{j,1} - sum_i delta_{j,t_i} + (I m)_j / 2 ; m_j ].
inline QPolynomial x_fermionic_01(PPPair pp, std::int64_t L) {
    if (!(1 < pp.p && pp.p_prime < 2 * pp.p))
        throw error("x_fermionic_01: need 1 < p < p' < 2p");
    if (L < 0) throw error("x_fermionic_01: need L >= 0");
    const FractionalStructure fs = fractional_structure(pp);
    QPolynomial inner = detail::fermionic_box_sum(
        fs.d, 2 * L + 3, [&](const std::vector<std::int64_t>& u, bool) {
            std::vector<std::int64_t> m(u.size());
            for (std::size_t i = 0; i < u.size(); ++i) m[i] = 2 * u[i];
            QPolynomial t = QPolynomial::one();
            for (int j = 1; j <= fs.d && !t.is_zero(); ++j) {
                const std::int64_t im = fs.inc_row_dot(j, m);
                int tmark = 0;
                for (int ti : fs.t)
                    if (ti == j) tmark = 1;
                const std::int64_t top = (j == 1 ? L : 0) - tmark + im / 2;
                t *= detail::fermi_binomial(top, m[static_cast<std::size_t>(j - 1)]);
            }
            if (t.is_zero()) return std::make_pair(t, false);
            std::int64_t e = fs.quadratic_form(u);
            for (int ti : fs.t) e += u[static_cast<std::size_t>(ti - 1)];
            t = t.shifted(HalfExp::integer(e));
            return std::make_pair(t, true);
        });
    return inner.shifted(HalfExp::integer(L));
}

// The q -> 1/q symmetry, evaluated from the dual regime:
//   X^{(p,p')}_{r,s}(L,b;q) = q^((L^2-(b-s)^2)/4) X^{(p'-p,p')}_{b-r,s}(L,b;1/q).
// Returns the right-hand side; equality with x_bosonic(qy) is the duality.
inline QPolynomial x_dual(const ConfigSumQuery& qy) {
    const int dp = qy.pp.p_prime - qy.pp.p;
    if (!(0 <= qy.b - qy.r && qy.b - qy.r <= dp - 1))
        throw error("x_dual: dual index b - r out of range");
    const std::int64_t num = qy.L * qy.L - std::int64_t(qy.b - qy.s) * (qy.b - qy.s);
    if (num % 4 != 0) throw error("x_dual: non-integral shift exponent (parity violation)");
    const ConfigSumQuery dual(PPPair(dp, qy.pp.p_prime), qy.b - qy.r, qy.s, qy.L, qy.b);
    return reverse_q(x_bosonic(dual), HalfExp::integer(num / 4));
}

// The second symmetry (for the (0,1)-type sums at even length):
//   X^{(p'-p,p')}_{r,s}(2L,1;q) = q^(L(L+1)) X^{(p,p')}_{r,s}(2L,1;1/q).
// Returns the right-hand side evaluated from (p,p').
inline QPolynomial x_dual_01(PPPair pp, int r, int s, std::int64_t L) {
    const ConfigSumQuery qy(pp, r, s, 2 * L, 1);
    return reverse_q(x_bosonic(qy), HalfExp::integer(L * (L + 1)));
}

// The Bailey pair family read off the configuration sums (relative to 1):
//   alpha_L = q^(j(jpp'+rp'-sp)) + q^(j(jpp'-rp'+sp))  for L = jp' > 0,
//           = -q^((jp+-r)(jp'+-s))                      for L = jp' +- s > 0,
//           = 0 otherwise, alpha_0 = 1;
//   beta_L  = X^{(p,p')}_{r,s}(2L, s) / (q)_{2L}.
inline BaileyPair abf_bailey_pair(PPPair pp, int r, int s) {
    const std::int64_t det = std::int64_t(pp.p_prime) * r - std::int64_t(pp.p) * s;
    if (det != 1 && det != -1) throw error("abf_bailey_pair: need |p'r - ps| = 1");
    if (!(1 <= s && s <= pp.p_prime - 1)) throw error("abf_bailey_pair: need 1 <= s <= p'-1");
    if (!(0 <= r && r <= pp.p - 1)) throw error("abf_bailey_pair: need 0 <= r <= p-1");
    const std::int64_t p = pp.p, ppr = pp.p_prime;
    BaileyPair out;
    out.eta = 0;
    out.label = "ABF(" + pp.str() + "," + std::to_string(r) + "," + std::to_string(s) + ")";
    const std::string label = out.label;
    out.alpha_exact = [p, ppr, r, s, label](int L_) -> QPolynomial {
        const std::int64_t L = L_;
        if (L < 0) return QPolynomial::zero();
        if (L == 0) return QPolynomial::one();
        QPolynomial result;
        int hits = 0;
        if (L % ppr == 0) {
            const std::int64_t j = L / ppr;
            result = QPolynomial::monomial(1, HalfExp::integer(j * (j * p * ppr + ppr * r - p * s))) +
                     QPolynomial::monomial(1, HalfExp::integer(j * (j * p * ppr - ppr * r + p * s)));
            ++hits;
        }
        if ((L - s) % ppr == 0 && (L - s) / ppr >= 0) {
            const std::int64_t j = (L - s) / ppr;
            result = QPolynomial::monomial(-1, HalfExp::integer((j * p + r) * (j * ppr + s)));
            ++hits;
        }
        if ((L + s) % ppr == 0 && (L + s) / ppr >= 1) {
            const std::int64_t j = (L + s) / ppr;
            result = QPolynomial::monomial(-1, HalfExp::integer((j * p - r) * (j * ppr - s)));
            ++hits;
        }
        if (hits > 1)
            throw error(label + ": alpha support families collide at L = " + std::to_string(L));
        return result;
    };
    const PolyGen ax = out.alpha_exact;
    out.alpha = SeriesGen([ax](int L, HalfExp order) { return series_with_leading(ax(L), order); });
    const PPPair pair_pp = pp;
    out.beta = SeriesGen([pair_pp, r, s](int L, HalfExp order) {
        const QPolynomial x = x_bosonic(ConfigSumQuery(pair_pp, r, s, 2 * std::int64_t(L), s));
        return inv_pochhammer(SignedPower::q_to(1), 2 * std::int64_t(L), order) * x;
    });
    return out;
}

}  // namespace qseries
