// Bailey pairs and conjugate Bailey pairs relative to a = q^eta, their
// verification, the inverse transform, the chain step and both lattice
// theorems. Pairs are lazy: alpha and beta are memoized generators, because
// chain and lattice towers are built compositionally and only finitely many
// indices are ever demanded.
#pragma once

#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qseries/qfuncs.hpp"

namespace qseries {

// Memoized (L, order) -> QSeries generator, safe for concurrent reads.
class SeriesGen {
public:
    using Fn = std::function<QSeries(int, HalfExp)>;

    SeriesGen() = default;

    explicit SeriesGen(Fn fn) : st_(std::make_shared<State>()) { st_->fn = std::move(fn); }

    QSeries operator()(int L, HalfExp order) const {
        if (!st_) throw error("SeriesGen: empty generator");
        if (L < 0) return QSeries::zero(order);
        const auto key = std::make_pair(L, order.halves);
        {
            std::lock_guard lk(st_->m);
            auto it = st_->cache.find(key);
            if (it != st_->cache.end()) return it->second;
        }
        QSeries value = st_->fn(L, order);  // pure, so racing computes agree
        std::lock_guard lk(st_->m);
        return st_->cache.emplace(key, std::move(value)).first->second;
    }

private:
    struct State {
        std::mutex m;
        std::map<std::pair<int, std::int64_t>, QSeries> cache;
        Fn fn;
    };
    std::shared_ptr<State> st_;
};

using PolyGen = std::function<QPolynomial(int)>;

// A Bailey pair relative to a = q^eta:
//   beta_L = sum_{r=0}^{L} alpha_r / ( (q)_{L-r} (aq)_{L+r} ).
// alpha_exact is set when a closed polynomial form is known (catalog pairs,
// rho -> infinity chain steps); it is absent for genuinely rational towers.
struct BaileyPair {
    int eta = 0;
    std::string label;
    SeriesGen alpha, beta;
    PolyGen alpha_exact;
};

// A conjugate Bailey pair relative to a = q^eta:
//   gamma_L = sum_{r=L}^{inf} delta_r / ( (q)_{r-L} (aq)_{r+L} ),
// the infinite sum being handled by the certified-tail rule below.
struct ConjugatePair {
    int eta = 0;
    std::string label;
    SeriesGen gamma, delta;
    PolyGen delta_exact;
};

// rho specialization: infinity, or sign * q^(k/2) with k >= 0.
struct RhoSpec {
    bool finite = false;
    int sign = 1;
    std::int64_t k_halves = 0;

    static RhoSpec infinity() { return {}; }

    static RhoSpec finite_power(int sign, std::int64_t k_halves) {
        if (k_halves < 0) throw error("RhoSpec: k must be nonnegative");
        if (sign != 1 && sign != -1) throw error("RhoSpec: sign must be +-1");
        return {true, sign, k_halves};
    }

    SignedPower power() const {
        if (!finite) throw error("RhoSpec: infinite rho has no power");
        return {sign, HalfExp::half_steps(k_halves)};
    }

    std::string str() const {
        if (!finite) return "inf";
        return SignedPower{sign, HalfExp::half_steps(k_halves)}.str();
    }
};

namespace detail {

// The recurring rho-dependent factor of Bailey's machinery,
//   (rho1)_r (rho2)_r (aq/rho1 rho2)^r / ((aq/rho1)_n (aq/rho2)_n),
// with a = q^eta and the usual limits when a rho tends to infinity:
//   (rho)_r (c/rho)^r -> (-1)^r q^(binom(r,2)) c^r.
// Specializations that would zero a denominator factor, or make it
// non-invertible over the integers, are rejected on construction.
struct RhoFactors {
    int eta;
    RhoSpec r1, r2;
    std::optional<SignedPower> c1, c2;  // aq/rho_i for finite rho_i
    std::optional<SignedPower> c12;     // aq/(rho1 rho2), both finite

    RhoFactors(int eta_, RhoSpec r1_, RhoSpec r2_) : eta(eta_), r1(r1_), r2(r2_) {
        const auto quotient = [this](const RhoSpec& r) {
            // q^(eta+1) / (s q^(k/2)) = s q^(eta+1-k/2)
            return SignedPower{r.sign,
                               HalfExp::integer(eta + 1) - HalfExp::half_steps(r.k_halves)};
        };
        if (r1.finite) c1 = quotient(r1);
        if (r2.finite) c2 = quotient(r2);
        if (r1.finite && r2.finite)
            c12 = SignedPower{r1.sign * r2.sign,
                              HalfExp::integer(eta + 1) -
                                  HalfExp::half_steps(r1.k_halves + r2.k_halves)};
        for (const auto& c : {c1, c2}) {
            if (!c) continue;
            if (c->exp.halves == 0) {
                if (c->sign == 1)
                    throw error("rho specialization zeroes the denominator factor (aq/rho)_L");
                throw error(
                    "rho specialization makes (aq/rho)_L non-invertible over the integers");
            }
        }
    }

    // (rho1)_r (rho2)_r (aq/rho1 rho2)^r, exact, with infinite-rho limits.
    QPolynomial num(int r) const {
        if (r < 0) return QPolynomial::zero();
        if (!r1.finite && !r2.finite)
            return QPolynomial::monomial(1, HalfExp::integer(std::int64_t(r) * r + std::int64_t(eta) * r));
        if (r1.finite && r2.finite) {
            QPolynomial p = pochhammer(r1.power(), r) * pochhammer(r2.power(), r);
            Int sgn = (c12->sign == -1 && r % 2 == 1) ? -1 : 1;
            return p.shifted(std::int64_t(r) * c12->exp).scaled(sgn);
        }
        const SignedPower rho = r1.finite ? r1.power() : r2.power();
        const SignedPower c = r1.finite ? *c1 : *c2;
        // (-1)^r q^binom(r,2) c^r (rho)_r
        Int sgn = 1;
        if (r % 2 == 1) sgn = -sgn;
        if (c.sign == -1 && r % 2 == 1) sgn = -sgn;
        const HalfExp shift = HalfExp::half_steps(std::int64_t(r) * (r - 1)) + std::int64_t(r) * c.exp;
        return pochhammer(rho, r).shifted(shift).scaled(sgn);
    }

    // 1 / ( (aq/rho1)_n (aq/rho2)_n ), finite factors only.
    QSeries inv_den_at(int n, HalfExp order) const {
        QSeries r = QSeries::one(order);
        if (c1) r = r * inv_pochhammer(*c1, n, order);
        if (c2) r = r * inv_pochhammer(*c2, n, order);
        return r;
    }

    QSeries inv_den_inf(HalfExp order) const {
        QSeries r = QSeries::one(order);
        if (c1) r = r * inv_pochhammer_infinite(*c1, 1, order);
        if (c2) r = r * inv_pochhammer_infinite(*c2, 1, order);
        return r;
    }

    // (aq/rho1 rho2)_n; equals 1 when either rho is infinite.
    QPolynomial c12_poch(int n) const {
        if (!c12) return QPolynomial::one();
        return pochhammer(*c12, n);
    }

    QSeries c12_poch_inf(HalfExp order) const {
        if (!c12) return QSeries::one(order);
        if (c12->is_one()) throw error("rho specialization zeroes (aq/rho1 rho2)_inf");
        return pochhammer_infinite(*c12, order);
    }
};

}  // namespace detail

// ---------------------------------------------------------------------------
// Certified tail summation.
//
// All infinite sums in scope have terms whose valuation grows without bound.
// This is checked, not assumed: the sum stops only once three consecutive
// nonzero terms have valuation beyond the order with strictly increasing
// valuations (identically zero terms are exact and do not disturb the run;
// a long run of zero terms ends a finite-support sum). A failed check
// aborts loudly - never a silent pass.
// ---------------------------------------------------------------------------

inline constexpr int tail_nonzero_run = 3;
inline constexpr int tail_zero_run = 40;

template <class TermFn>
QSeries certified_tail_sum(HalfExp order, int start, const std::string& what, TermFn term) {
    QSeries acc(order);
    std::vector<HalfExp> beyond;  // valuations of the current beyond-order run
    int zeros = 0;
    const long cap = 2000 + 8 * std::max<std::int64_t>(order.halves, 0);
    for (long idx = start; idx < start + cap; ++idx) {
        const QSeries t = term(static_cast<int>(idx));
        const auto val = t.valuation();
        if (!val) {
            if (++zeros >= tail_zero_run) return acc;
            continue;
        }
        zeros = 0;
        if (*val > order) {
            if (!beyond.empty() && beyond.back() >= *val)
                throw tail_error(what + ": tail valuations not strictly increasing at index " +
                                 std::to_string(idx));
            beyond.push_back(*val);
            if (static_cast<int>(beyond.size()) >= tail_nonzero_run) return acc;
            continue;
        }
        beyond.clear();
        acc = acc + t;
        if (acc.order() < order)
            throw tail_error(what + ": term at index " + std::to_string(idx) +
                             " lost truncation order");
    }
    throw tail_error(what + ": no certified cutoff within " + std::to_string(cap) + " terms");
}

// ---------------------------------------------------------------------------
// Verification
// ---------------------------------------------------------------------------

struct CoeffMismatch {
    int L = 0;
    HalfExp exponent{};
    Int lhs, rhs;
};

struct VerifyReport {
    std::string label;
    int eta = 0;
    int l_max = 0;
    HalfExp order{};
    std::string status;  // "verified" | "mismatch" | "tail-uncertified"
    std::optional<CoeffMismatch> mismatch;
    std::string detail;
    double runtime_ms = 0.0;

    bool ok() const { return status == "verified"; }
};

namespace detail {
inline double ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}
}  // namespace detail

// Checks beta_L = sum_{r<=L} alpha_r / ((q)_{L-r} (aq)_{L+r}) for L <= l_max.
inline VerifyReport verify_bailey_pair(const BaileyPair& pair, int l_max, HalfExp order) {
    const auto t0 = std::chrono::steady_clock::now();
    VerifyReport rep{pair.label, pair.eta, l_max, order, "verified", {}, {}, 0.0};
    for (int L = 0; L <= l_max; ++L) {
        QSeries rhs(order);
        for (int r = 0; r <= L; ++r) {
            QSeries term = pair.alpha(r, order) *
                           inv_pochhammer(SignedPower::q_to(1), L - r, order);
            term = term * inv_pochhammer(SignedPower::q_to(pair.eta + 1), L + r, order);
            rhs = rhs + term;
        }
        const QSeries lhs = pair.beta(L, order);
        const HalfExp limit = std::min({order, lhs.order(), rhs.order()});
        if (auto e = first_mismatch(lhs, rhs, limit)) {
            rep.status = "mismatch";
            rep.mismatch = CoeffMismatch{L, *e, lhs.coeff(*e), rhs.coeff(*e)};
            break;
        }
    }
    rep.runtime_ms = detail::ms_since(t0);
    return rep;
}

// Checks gamma_L = sum_{r>=L} delta_r / ((q)_{r-L} (aq)_{r+L}) for L <= l_max.
inline VerifyReport verify_conjugate_pair(const ConjugatePair& cp, int l_max, HalfExp order) {
    const auto t0 = std::chrono::steady_clock::now();
    VerifyReport rep{cp.label, cp.eta, l_max, order, "verified", {}, {}, 0.0};
    for (int L = 0; L <= l_max; ++L) {
        try {
            const QSeries rhs = certified_tail_sum(order, L, cp.label, [&](int r) {
                QSeries term = cp.delta(r, order) *
                               inv_pochhammer(SignedPower::q_to(1), r - L, order);
                return term * inv_pochhammer(SignedPower::q_to(cp.eta + 1), r + L, order);
            });
            // gamma generators may run certified sums of their own
            const QSeries lhs = cp.gamma(L, order);
            const HalfExp limit = std::min({order, lhs.order(), rhs.order()});
            if (auto e = first_mismatch(lhs, rhs, limit)) {
                rep.status = "mismatch";
                rep.mismatch = CoeffMismatch{L, *e, lhs.coeff(*e), rhs.coeff(*e)};
                break;
            }
        } catch (const tail_error& te) {
            rep.status = "tail-uncertified";
            rep.detail = te.what();
            break;
        }
    }
    rep.runtime_ms = detail::ms_since(t0);
    return rep;
}

// Bailey's lemma instance: sum_L alpha_L gamma_L = sum_L beta_L delta_L.
struct BilinearResult {
    QSeries lhs, rhs;
    bool equal = false;
    std::optional<HalfExp> mismatch_exponent;
};

inline BilinearResult bilinear_identity(const BaileyPair& pair, const ConjugatePair& cp,
                                        HalfExp order) {
    if (pair.eta != cp.eta)
        throw error("bilinear_identity: pair eta " + std::to_string(pair.eta) +
                    " differs from conjugate eta " + std::to_string(cp.eta));
    QSeries lhs = certified_tail_sum(order, 0, pair.label + " x " + cp.label + " (alpha.gamma)",
                                     [&](int L) { return pair.alpha(L, order) * cp.gamma(L, order); });
    QSeries rhs = certified_tail_sum(order, 0, pair.label + " x " + cp.label + " (beta.delta)",
                                     [&](int L) { return pair.beta(L, order) * cp.delta(L, order); });
    const HalfExp limit = std::min({order, lhs.order(), rhs.order()});
    const auto e = first_mismatch(lhs, rhs, limit);
    return {std::move(lhs), std::move(rhs), !e.has_value(), e};
}

// ---------------------------------------------------------------------------
// Constructions
// ---------------------------------------------------------------------------

// The unit Bailey pair (beta_L = delta_{L,0}) relative to a = q^eta:
//   alpha_L = (-1)^L q^binom(L,2) (1 - a q^(2L)) (a)_L / ((1-a)(q)_L),
// with (a)_L/(1-a) evaluated in the cancelled form (q^(eta+1))_{L-1} so that
// eta = 0 is well defined. The division by (q)_L is exact.
inline BaileyPair unit_bailey_pair(int eta) {
    if (eta < 0) throw error("unit_bailey_pair: eta must be nonnegative");
    PolyGen alpha_exact = [eta](int L) -> QPolynomial {
        if (L < 0) return QPolynomial::zero();
        if (L == 0) return QPolynomial::one();
        QPolynomial num = pochhammer(SignedPower::q_to(eta + 1), L - 1);
        QPolynomial front = QPolynomial::one();
        front.add_term(HalfExp::integer(eta + 2 * std::int64_t(L)), -1);
        num = num * front;
        QPolynomial r = exact_divide(num, pochhammer(SignedPower::q_to(1), L));
        r = r.shifted(HalfExp::integer(std::int64_t(L) * (L - 1) / 2));
        return (L % 2 == 1) ? -r : r;
    };
    BaileyPair p;
    p.eta = eta;
    p.label = "initial@" + std::to_string(eta);
    p.alpha = SeriesGen([alpha_exact](int L, HalfExp order) {
        return series_with_leading(alpha_exact(L), order);
    });
    p.beta = SeriesGen([](int L, HalfExp order) {
        return L == 0 ? QSeries::one(order) : QSeries::zero(order);
    });
    p.alpha_exact = alpha_exact;
    return p;
}

// Conjugate Bailey pair from the q-Saalschutz summation (finite M), with the
// standard limits. For M = infinity the common factor 1/(q)_inf of gamma and
// delta is dropped, so that both rho -> infinity reproduces
//   gamma_L = a^L q^(L^2) / (aq)_inf,  delta_L = a^L q^(L^2)
// on the nose. M is nullopt for infinity.
inline ConjugatePair conjugate_saalschutz(int eta, std::optional<int> M, RhoSpec rho1,
                                          RhoSpec rho2) {
    if (eta < 0) throw error("conjugate_saalschutz: eta must be nonnegative");
    if (M && *M < 0) throw error("conjugate_saalschutz: M must be nonnegative or infinite");
    auto F = std::make_shared<detail::RhoFactors>(eta, rho1, rho2);
    ConjugatePair cp;
    cp.eta = eta;
    const bool is_gdinf = !M && !rho1.finite && !rho2.finite;
    cp.label = is_gdinf ? "gdinf@" + std::to_string(eta)
                        : "saalschutz(eta=" + std::to_string(eta) +
                              ",M=" + (M ? std::to_string(*M) : std::string("inf")) + "," +
                              rho1.str() + "," + rho2.str() + ")";
    cp.gamma = SeriesGen([F, eta, M](int L, HalfExp order) {
        if (M && L > *M) return QSeries::zero(order);
        QSeries g = F->inv_den_at(L, order) * F->num(L);
        if (M) {
            g = g * inv_pochhammer(SignedPower::q_to(1), *M - L, order);
            return g * inv_pochhammer(SignedPower::q_to(eta + 1), *M + L, order);
        }
        return g * inv_pochhammer_infinite(SignedPower::q_to(eta + 1), 1, order);
    });
    cp.delta = SeriesGen([F, M](int L, HalfExp order) {
        if (M && L > *M) return QSeries::zero(order);
        if (M) {
            QSeries d = F->inv_den_at(*M, order) * F->num(L);
            d = d * F->c12_poch(*M - L);
            return d * inv_pochhammer(SignedPower::q_to(1), *M - L, order);
        }
        QSeries d = F->inv_den_inf(order) * F->num(L);
        return d * F->c12_poch_inf(order);
    });
    if (is_gdinf) {
        cp.delta_exact = [eta](int L) {
            if (L < 0) return QPolynomial::zero();
            return QPolynomial::monomial(1,
                                         HalfExp::integer(std::int64_t(L) * L + std::int64_t(eta) * L));
        };
    }
    return cp;
}

inline ConjugatePair conjugate_gdinf(int eta) {
    return conjugate_saalschutz(eta, std::nullopt, RhoSpec::infinity(), RhoSpec::infinity());
}

// Inverse Bailey transform:
//   alpha_L = (1-aq^(2L))/(1-a) sum_{r=0}^{L}
//             (-1)^(L-r) q^binom(L-r,2) (a)_{L+r} / (q)_{L-r} beta_r,
// with (a)_{L+r}/(1-a) in the cancelled form (q^(eta+1))_{L+r-1}; direct
// division by (1-a) is never performed, so eta = 0 is safe.
inline QSeries inverse_transform(const std::function<QSeries(int, HalfExp)>& beta, int eta,
                                 int L, HalfExp order) {
    if (L < 0) return QSeries::zero(order);
    if (L == 0) return beta(0, order);
    QSeries acc(order);
    for (int r = 0; r <= L; ++r) {
        QPolynomial k = pochhammer(SignedPower::q_to(eta + 1), L + r - 1);
        QPolynomial front = QPolynomial::one();
        front.add_term(HalfExp::integer(eta + 2 * std::int64_t(L)), -1);
        k = k * front;
        const std::int64_t d = L - r;
        k = k.shifted(HalfExp::integer(d * (d - 1) / 2));
        if (d % 2 == 1) k = -k;
        QSeries term = beta(r, order) * k;
        acc = acc + term * inv_pochhammer(SignedPower::q_to(1), d, order);
    }
    return acc;
}

// Exact-polynomial variant, applicable when the betas are exact: multiplies
// through by (q)_L, so every term is polynomial, then divides back out.
inline QPolynomial inverse_transform_exact(const PolyGen& beta, int eta, int L) {
    if (L < 0) return QPolynomial::zero();
    if (L == 0) return beta(0);
    QPolynomial acc;
    for (int r = 0; r <= L; ++r) {
        const QPolynomial b = beta(r);
        if (b.is_zero()) continue;
        QPolynomial k = pochhammer(SignedPower::q_to(eta + 1), L + r - 1);
        const std::int64_t d = L - r;
        k = k.shifted(HalfExp::integer(d * (d - 1) / 2));
        if (d % 2 == 1) k = -k;
        // (q)_L / (q)_{L-r} = prod_{i=L-r+1}^{L} (1 - q^i)
        for (std::int64_t i = d + 1; i <= L; ++i) {
            QPolynomial f = QPolynomial::one();
            f.add_term(HalfExp::integer(i), -1);
            k = k * f;
        }
        acc += k * b;
    }
    QPolynomial front = QPolynomial::one();
    front.add_term(HalfExp::integer(eta + 2 * std::int64_t(L)), -1);
    return exact_divide(acc * front, pochhammer(SignedPower::q_to(1), L));
}

// One Bailey chain step (Theorem 2): a Bailey pair relative to a maps to a
// new Bailey pair relative to a. With both rho infinite this is the
// important special case alpha' = a^L q^(L^2) alpha,
// beta'_L = sum_r a^r q^(r^2)/(q)_{L-r} beta_r.
inline BaileyPair chain_step(const BaileyPair& pair, RhoSpec rho1, RhoSpec rho2) {
    auto F = std::make_shared<detail::RhoFactors>(pair.eta, rho1, rho2);
    BaileyPair out;
    out.eta = pair.eta;
    out.label = "chain(" + pair.label + ";" + rho1.str() + "," + rho2.str() + ")";
    const BaileyPair in = pair;  // generators share state through shared_ptr
    out.alpha = SeriesGen([F, in](int L, HalfExp order) {
        return in.alpha(L, order) * F->num(L) * F->inv_den_at(L, order);
    });
    out.beta = SeriesGen([F, in](int L, HalfExp order) {
        QSeries acc(order);
        for (int r = 0; r <= L; ++r) {
            QSeries t = in.beta(r, order) * F->num(r);
            t = t * F->c12_poch(L - r);
            acc = acc + t * inv_pochhammer(SignedPower::q_to(1), L - r, order);
        }
        return acc * F->inv_den_at(L, order);
    });
    if (!rho1.finite && !rho2.finite && pair.alpha_exact) {
        const PolyGen base = pair.alpha_exact;
        const int eta = pair.eta;
        out.alpha_exact = [base, eta](int L) {
            return base(L).shifted(HalfExp::integer(std::int64_t(L) * L + std::int64_t(eta) * L));
        };
    }
    return out;
}

namespace detail {

// The cancelled ratio common to both lattice theorems:
//   (1 - a q^(2L)) (aq)_{2L-j-1} / (aq)_{2L-j+N}
//     = 1 / prod_{u in [2L-j, 2L-j+N], u != 2L} (1 - a q^u).
// The prefactor always cancels the u = 2L factor for 0 <= j <= N, which is
// what keeps eta = 0 (a = 1) well defined. Live terms (j <= L) only retain
// factors with eta + u >= 1.
inline QSeries lattice_ratio(int eta, int L, int j, int N, HalfExp order) {
    QSeries r = QSeries::one(order);
    for (std::int64_t u = 2 * std::int64_t(L) - j; u <= 2 * std::int64_t(L) - j + N; ++u) {
        if (u == 2 * std::int64_t(L)) continue;
        if (eta + u <= 0)
            throw error("lattice ratio: retained factor (1 - q^" + std::to_string(eta + u) +
                        ") is not invertible");
        r = r * inv_pochhammer(SignedPower::q_to(eta + u), 1, order);
    }
    return r;
}

inline void check_lattice_args(const BaileyPair& pair_b, int N) {
    if (N < 0) throw error("lattice step: N must be nonnegative");
    if (pair_b.eta < N)
        throw error("lattice step: input pair has eta " + std::to_string(pair_b.eta) +
                    " < N = " + std::to_string(N) + "; a = b q^(-N) would leave the grid");
}

}  // namespace detail

// Bailey lattice, first form (Theorem 3): maps a pair relative to b = a q^N
// to a pair relative to a. N = 0 reduces to the Bailey chain.
inline BaileyPair lattice_step_I(const BaileyPair& pair_b, int N, RhoSpec rho1, RhoSpec rho2) {
    detail::check_lattice_args(pair_b, N);
    const int eta = pair_b.eta - N;
    auto F = std::make_shared<detail::RhoFactors>(eta, rho1, rho2);
    BaileyPair out;
    out.eta = eta;
    out.label = "latticeI(" + pair_b.label + ";N=" + std::to_string(N) + "," + rho1.str() +
                "," + rho2.str() + ")";
    const BaileyPair in = pair_b;
    const QPolynomial aq_n = pochhammer(SignedPower::q_to(eta + 1), N);
    out.alpha = SeriesGen([F, in, eta, N, aq_n](int L, HalfExp order) {
        QSeries acc(order);
        for (int j = 0; j <= std::min(N, L); ++j) {
            const std::int64_t e2 = 2 * std::int64_t(eta) * j + 4 * std::int64_t(L) * j -
                                    std::int64_t(j) * (j + 1);
            QSeries t = in.alpha(L - j, order) * q_binomial(N, j);
            t = t * detail::lattice_ratio(eta, L, j, N, order);
            t = t.shifted(HalfExp::half_steps(e2));
            if (j % 2 == 1) t = -t;
            acc = acc + t;
        }
        acc = acc * aq_n;
        return acc * F->num(L) * F->inv_den_at(L, order);
    });
    out.beta = SeriesGen([F, in](int L, HalfExp order) {
        QSeries acc(order);
        for (int r = 0; r <= L; ++r) {
            QSeries t = in.beta(r, order) * F->num(r);
            t = t * F->c12_poch(L - r);
            acc = acc + t * inv_pochhammer(SignedPower::q_to(1), L - r, order);
        }
        return acc * F->inv_den_at(L, order);
    });
    return out;
}

// Bailey lattice, second form (Theorem 4): as lattice_step_I but with the
// rho factors based at b inside the j-sum and in the beta' kernel.
inline BaileyPair lattice_step_II(const BaileyPair& pair_b, int N, RhoSpec rho1, RhoSpec rho2) {
    detail::check_lattice_args(pair_b, N);
    const int eta = pair_b.eta - N;
    auto Fb = std::make_shared<detail::RhoFactors>(pair_b.eta, rho1, rho2);
    BaileyPair out;
    out.eta = eta;
    out.label = "latticeII(" + pair_b.label + ";N=" + std::to_string(N) + "," + rho1.str() +
                "," + rho2.str() + ")";
    const BaileyPair in = pair_b;
    const QPolynomial aq_n = pochhammer(SignedPower::q_to(eta + 1), N);
    out.alpha = SeriesGen([Fb, in, eta, N, aq_n](int L, HalfExp order) {
        QSeries acc(order);
        for (int j = 0; j <= std::min(N, L); ++j) {
            const std::int64_t e2 = 2 * std::int64_t(eta) * j + 4 * std::int64_t(L) * j -
                                    std::int64_t(j) * (j + 1);
            QSeries t = in.alpha(L - j, order) * Fb->num(L - j);
            t = t * Fb->inv_den_at(L - j, order);
            t = t * q_binomial(N, j);
            t = t * detail::lattice_ratio(eta, L, j, N, order);
            t = t.shifted(HalfExp::half_steps(e2));
            if (j % 2 == 1) t = -t;
            acc = acc + t;
        }
        return acc * aq_n;
    });
    out.beta = SeriesGen([Fb, in](int L, HalfExp order) {
        QSeries acc(order);
        for (int r = 0; r <= L; ++r) {
            QSeries t = in.beta(r, order) * Fb->num(r);
            t = t * Fb->c12_poch(L - r);
            acc = acc + t * inv_pochhammer(SignedPower::q_to(1), L - r, order);
        }
        return acc * Fb->inv_den_at(L, order);
    });
    return out;
}

}  // namespace qseries
