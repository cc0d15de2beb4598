// Built-in database of the named Bailey pairs (unit pairs, Slater's first
// group A(1)-A(8), Rogers' B(1)/B(3)) and the gdinf conjugate pairs,
// addressable by label. Entries verify themselves on first access.
//
// The Slater tables compress alpha into indexed families (columns at 3L and
// 3L +- 1); the builders below expand those into plain L -> alpha_L maps and
// assert that the families cover the nonnegative integers without overlap,
// since the compressed notation is the easiest place to mistranscribe.
#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <variant>
#include <vector>

#include "qseries/bailey.hpp"
#include "qseries/configsum.hpp"

namespace qseries {

struct CatalogEntry {
    std::string label;
    std::string source;  // where the pair comes from, for reports
    std::variant<BaileyPair, ConjugatePair> pair;

    const BaileyPair& bailey() const {
        if (!std::holds_alternative<BaileyPair>(pair))
            throw error("catalog entry " + label + " is not a Bailey pair");
        return std::get<BaileyPair>(pair);
    }
    const ConjugatePair& conjugate() const {
        if (!std::holds_alternative<ConjugatePair>(pair))
            throw error("catalog entry " + label + " is not a conjugate pair");
        return std::get<ConjugatePair>(pair);
    }
    bool is_bailey() const { return std::holds_alternative<BaileyPair>(pair); }
};

namespace detail {

// One compressed table family: alpha at index stride*L + offset, L >= lmin.
struct AlphaFamily {
    int stride, offset, lmin;
    std::function<QPolynomial(std::int64_t)> value;
};

// Expand families into a plain alpha generator with alpha_0 = 1 prepended,
// checking that each index >= 1 is hit by exactly one family.
inline PolyGen expand_alpha_families(std::vector<AlphaFamily> fams, const std::string& label) {
    return [fams = std::move(fams), label](int L) -> QPolynomial {
        if (L < 0) return QPolynomial::zero();
        if (L == 0) return QPolynomial::one();
        QPolynomial result;
        int hits = 0;
        for (const auto& f : fams) {
            if ((L - f.offset) % f.stride != 0) continue;
            const std::int64_t j = (L - f.offset) / f.stride;
            if (j < f.lmin) continue;
            ++hits;
            result = f.value(j);
        }
        if (hits != 1)
            throw error("catalog " + label + ": alpha index families hit L=" +
                        std::to_string(L) + " " + std::to_string(hits) + " times");
        return result;
    };
}

inline QPolynomial mono(std::int64_t e) { return QPolynomial::monomial(1, HalfExp::integer(e)); }
inline QPolynomial neg_mono(std::int64_t e) {
    return QPolynomial::monomial(-1, HalfExp::integer(e));
}

inline BaileyPair table_pair(std::string label, int eta, std::vector<AlphaFamily> fams,
                             std::function<QSeries(int, HalfExp)> beta) {
    BaileyPair p;
    p.eta = eta;
    p.label = std::move(label);
    p.alpha_exact = expand_alpha_families(std::move(fams), p.label);
    const PolyGen ax = p.alpha_exact;
    p.alpha = SeriesGen([ax](int L, HalfExp order) { return series_with_leading(ax(L), order); });
    p.beta = SeriesGen(std::move(beta));
    return p;
}

// beta_L = q^(c2 L^2 + c1 L) / (q^(b0))_{2L}
inline std::function<QSeries(int, HalfExp)> beta_quadratic_over_poch(std::int64_t c2,
                                                                     std::int64_t c1,
                                                                     std::int64_t b0) {
    return [c2, c1, b0](int L, HalfExp order) {
        const HalfExp e = HalfExp::integer(c2 * L * L + c1 * L);
        if (e > order) return QSeries::zero(order);
        return inv_pochhammer(SignedPower::q_to(b0), 2 * std::int64_t(L), order)
            .shifted(e)
            .truncated(order);
    };
}

inline BaileyPair make_slater_a(int index) {
    using F = AlphaFamily;
    switch (index) {
        // a = 1 table: columns alpha_{3L} (L >= 1) and alpha_{3L +- 1}.
        case 1:
            return table_pair(
                "A(1)", 0,
                {F{3, 0, 1, [](std::int64_t L) { return mono(L * (6 * L - 1)) + mono(L * (6 * L + 1)); }},
                 F{3, 1, 0, [](std::int64_t L) { return neg_mono((2 * L + 1) * (3 * L + 1)); }},
                 F{3, -1, 1, [](std::int64_t L) { return neg_mono((2 * L - 1) * (3 * L - 1)); }}},
                beta_quadratic_over_poch(0, 0, 1));
        case 3:
            return table_pair(
                "A(3)", 0,
                {F{3, 0, 1, [](std::int64_t L) { return mono(2 * L * (3 * L - 1)) + mono(2 * L * (3 * L + 1)); }},
                 F{3, 1, 0, [](std::int64_t L) { return neg_mono(2 * L * (3 * L + 1)); }},
                 F{3, -1, 1, [](std::int64_t L) { return neg_mono(2 * L * (3 * L - 1)); }}},
                beta_quadratic_over_poch(0, 1, 1));
        case 5:
            return table_pair(
                "A(5)", 0,
                {F{3, 0, 1, [](std::int64_t L) { return mono(L * (3 * L - 1)) + mono(L * (3 * L + 1)); }},
                 F{3, 1, 0, [](std::int64_t L) { return neg_mono(L * (3 * L + 1)); }},
                 F{3, -1, 1, [](std::int64_t L) { return neg_mono(L * (3 * L - 1)); }}},
                beta_quadratic_over_poch(1, 0, 1));
        case 7:
            return table_pair(
                "A(7)", 0,
                {F{3, 0, 1, [](std::int64_t L) { return mono(L * (3 * L - 2)) + mono(L * (3 * L + 2)); }},
                 F{3, 1, 0, [](std::int64_t L) { return neg_mono((L + 1) * (3 * L + 1)); }},
                 F{3, -1, 1, [](std::int64_t L) { return neg_mono((L - 1) * (3 * L - 1)); }}},
                beta_quadratic_over_poch(1, -1, 1));
        // a = q table: columns alpha_{3L - (1 -+ 1)/2}, i.e. alpha_{3L} with
        // the upper sign and alpha_{3L-1} with the lower, plus alpha_{3L+1}.
        case 2:
            return table_pair(
                "A(2)", 1,
                {F{3, 0, 1, [](std::int64_t L) { return mono(L * (6 * L + 1)); }},
                 F{3, -1, 1, [](std::int64_t L) { return mono(L * (6 * L - 1)); }},
                 F{3, 1, 0, [](std::int64_t L) {
                      return neg_mono((2 * L + 1) * (3 * L + 1)) + neg_mono((2 * L + 1) * (3 * L + 2));
                  }}},
                beta_quadratic_over_poch(0, 0, 2));
        case 4:
            return table_pair(
                "A(4)", 1,
                {F{3, 0, 1, [](std::int64_t L) { return mono(2 * L * (3 * L + 2)); }},
                 F{3, -1, 1, [](std::int64_t L) { return mono(2 * L * (3 * L - 2)); }},
                 F{3, 1, 0, [](std::int64_t L) {
                      return neg_mono(2 * (L + 1) * (3 * L + 1)) + neg_mono(2 * L * (3 * L + 2));
                  }}},
                beta_quadratic_over_poch(0, 1, 2));
        case 6:
            return table_pair(
                "A(6)", 1,
                {F{3, 0, 1, [](std::int64_t L) { return mono(L * (3 * L - 1)); }},
                 F{3, -1, 1, [](std::int64_t L) { return mono(L * (3 * L + 1)); }},
                 F{3, 1, 0, [](std::int64_t L) {
                      return neg_mono(L * (3 * L + 1)) + neg_mono((L + 1) * (3 * L + 2));
                  }}},
                beta_quadratic_over_poch(1, 0, 2));
        case 8:
            return table_pair(
                "A(8)", 1,
                {F{3, 0, 1, [](std::int64_t L) { return mono(L * (3 * L + 2)); }},
                 F{3, -1, 1, [](std::int64_t L) { return mono(L * (3 * L - 2)); }},
                 F{3, 1, 0, [](std::int64_t L) {
                      return neg_mono((L + 1) * (3 * L + 1)) + neg_mono(L * (3 * L + 2));
                  }}},
                beta_quadratic_over_poch(1, 1, 2));
        default:
            throw error("no Slater A-group entry " + std::to_string(index));
    }
}

// Rogers' pairs: alpha_0 = 1 and
//   B(1): alpha_L = (-1)^L q^(L(3L-1)/2) (1 + q^L),        beta_L = 1/(q)_L, a = 1
//   B(3): alpha_L = (-1)^L q^(L(3L+1)/2) (1-q^(2L+1))/(1-q), beta_L = 1/(q)_L, a = q
inline BaileyPair make_rogers_b(int index) {
    BaileyPair p;
    if (index == 1) {
        p.eta = 0;
        p.label = "B(1)";
        p.alpha_exact = [](int L) -> QPolynomial {
            if (L < 0) return QPolynomial::zero();
            if (L == 0) return QPolynomial::one();
            QPolynomial r = QPolynomial::one() + mono(L);
            r = r.shifted(HalfExp::half_steps(std::int64_t(L) * (3 * L - 1)));
            return (L % 2 == 1) ? -r : r;
        };
    } else if (index == 3) {
        p.eta = 1;
        p.label = "B(3)";
        p.alpha_exact = [](int L) -> QPolynomial {
            if (L < 0) return QPolynomial::zero();
            QPolynomial r;  // (1 - q^(2L+1))/(1 - q) = 1 + q + ... + q^(2L)
            for (std::int64_t i = 0; i <= 2 * std::int64_t(L); ++i)
                r.add_term(HalfExp::integer(i), 1);
            r = r.shifted(HalfExp::half_steps(std::int64_t(L) * (3 * L + 1)));
            return (L % 2 == 1) ? -r : r;
        };
    } else {
        throw error("no Rogers B entry " + std::to_string(index));
    }
    const PolyGen ax = p.alpha_exact;
    p.alpha = SeriesGen([ax](int L, HalfExp order) { return series_with_leading(ax(L), order); });
    p.beta = SeriesGen([](int L, HalfExp order) {
        return inv_pochhammer(SignedPower::q_to(1), L, order);
    });
    return p;
}

}  // namespace detail

class Catalog {
public:
    static Catalog& instance() {
        static Catalog c;
        return c;
    }

    std::vector<std::string> list() const {
        return {"initial@0", "initial@1", "initial@2", "A(1)", "A(2)", "A(3)", "A(4)",
                "A(5)", "A(6)", "A(7)", "A(8)", "B(1)", "B(3)",
                "gdinf@0", "gdinf@1", "gdinf@2"};
    }

    // Returns the entry, verifying it (L <= 8, to q^40) on first access; a
    // failing entry throws rather than being served. Besides the built-in
    // names, derivation expressions are addressable:
    //   chain(LABEL), chain(LABEL;rho1,rho2),
    //   latticeI(LABEL;N=n[,rho1,rho2]), latticeII(LABEL;N=n[,rho1,rho2]),
    // nesting freely, with rho written inf, -1, q, -q^(1/2), q^(3/2), ...
    const CatalogEntry& get(const std::string& label) {
        std::lock_guard lk(m_);  // recursive: expressions resolve inner labels
        auto it = cache_.find(label);
        if (it != cache_.end()) return *it->second;
        auto entry = std::make_shared<CatalogEntry>(build(label));
        const HalfExp order = HalfExp::half_steps(80);
        VerifyReport rep = entry->is_bailey()
                               ? verify_bailey_pair(entry->bailey(), 8, order)
                               : verify_conjugate_pair(entry->conjugate(), 8, order);
        if (!rep.ok())
            throw error("catalog entry " + label + " failed verification: " + rep.status);
        return *cache_.emplace(label, std::move(entry)).first->second;
    }

private:
    CatalogEntry build(const std::string& label);

    std::recursive_mutex m_;
    std::map<std::string, std::shared_ptr<CatalogEntry>> cache_;
};

namespace detail {

// Split on sep at parenthesis depth zero.
inline std::vector<std::string> split_top_level(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    int depth = 0;
    for (char ch : s) {
        if (ch == '(') ++depth;
        if (ch == ')') --depth;
        if (ch == sep && depth == 0) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    parts.push_back(cur);
    return parts;
}

// rho in label syntax: inf | [-]1 | [-]q | [-]q^E with E one of n, (n),
// n/2, (n/2); matches what RhoSpec::str() renders.
inline RhoSpec parse_rho_label(std::string s) {
    if (s == "inf") return RhoSpec::infinity();
    int sign = 1;
    if (!s.empty() && s[0] == '-') {
        sign = -1;
        s = s.substr(1);
    }
    if (s == "1") return RhoSpec::finite_power(sign, 0);
    if (s == "q") return RhoSpec::finite_power(sign, 2);
    if (s.rfind("q^", 0) != 0) throw error("catalog: cannot parse rho '" + s + "'");
    std::string e = s.substr(2);
    if (e.size() >= 2 && e.front() == '(' && e.back() == ')') e = e.substr(1, e.size() - 2);
    if (e.size() > 2 && e.substr(e.size() - 2) == "/2")
        return RhoSpec::finite_power(sign, std::stoll(e.substr(0, e.size() - 2)));
    return RhoSpec::finite_power(sign, 2 * std::stoll(e));
}

}  // namespace detail

inline CatalogEntry Catalog::build(const std::string& label) {
    const auto tail_int = [&](const std::string& prefix) -> std::optional<int> {
        if (label.rfind(prefix, 0) != 0) return std::nullopt;
        return std::stoi(label.substr(prefix.size()));
    };
    // derivation expressions: chain(...), latticeI(...), latticeII(...)
    for (const std::string head : {"chain(", "latticeI(", "latticeII("}) {
        if (label.rfind(head, 0) != 0 || label.back() != ')') continue;
        const std::string inner = label.substr(head.size(), label.size() - head.size() - 1);
        const auto parts = detail::split_top_level(inner, ';');
        if (parts.empty() || parts.size() > 2)
            throw error("catalog: malformed derivation expression '" + label + "'");
        const BaileyPair& base = get(parts[0]).bailey();
        RhoSpec rho1 = RhoSpec::infinity(), rho2 = RhoSpec::infinity();
        int n = 1;
        std::vector<std::string> opts;
        if (parts.size() == 2) opts = detail::split_top_level(parts[1], ',');
        if (head == "chain(") {
            if (opts.size() == 2) {
                rho1 = detail::parse_rho_label(opts[0]);
                rho2 = detail::parse_rho_label(opts[1]);
            } else if (!opts.empty()) {
                throw error("catalog: chain takes (label) or (label;rho1,rho2)");
            }
            return {label, "Bailey chain step", chain_step(base, rho1, rho2)};
        }
        if (opts.empty() || opts[0].rfind("N=", 0) != 0)
            throw error("catalog: lattice expressions need ;N=n");
        n = std::stoi(opts[0].substr(2));
        if (opts.size() == 3) {
            rho1 = detail::parse_rho_label(opts[1]);
            rho2 = detail::parse_rho_label(opts[2]);
        } else if (opts.size() != 1) {
            throw error("catalog: lattice takes (label;N=n) or (label;N=n,rho1,rho2)");
        }
        if (head == "latticeI(")
            return {label, "Bailey lattice step (first form)",
                    lattice_step_I(base, n, rho1, rho2)};
        return {label, "Bailey lattice step (second form)",
                lattice_step_II(base, n, rho1, rho2)};
    }
    if (auto eta = tail_int("initial@"))
        return {label, "unit pair, inverse Bailey transform", unit_bailey_pair(*eta)};
    if (auto eta = tail_int("gdinf@"))
        return {label, "q-Saalschutz conjugate pair, M and rho at infinity",
                conjugate_gdinf(*eta)};
    if (label.size() == 4 && label.rfind("A(", 0) == 0 && label.back() == ')')
        return {label, "Slater table, first group", detail::make_slater_a(label[2] - '0')};
    if (label.size() == 4 && label.rfind("B(", 0) == 0 && label.back() == ')')
        return {label, "Rogers' pairs", detail::make_rogers_b(label[2] - '0')};
    if (label.rfind("ABF(", 0) == 0 && label.back() == ')') {
        std::vector<int> nums;
        std::string cur;
        for (char ch : label.substr(4, label.size() - 5)) {
            if (ch == ',') {
                nums.push_back(std::stoi(cur));
                cur.clear();
            } else {
                cur += ch;
            }
        }
        if (!cur.empty()) nums.push_back(std::stoi(cur));
        if (nums.size() != 4) throw error("catalog: ABF label needs (p,p',r,s)");
        return {label, "configuration-sum Bailey pair family",
                abf_bailey_pair(PPPair(nums[0], nums[1]), nums[2], nums[3])};
    }
    throw error("catalog: unknown label '" + label + "'");
}

}  // namespace qseries
