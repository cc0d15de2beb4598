// Acceptance suite: every criterion is exact coefficient reproduction at the
// stated order. Prints one PASS/FAIL line per criterion and exits nonzero if
// any fails.
#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>
#include <vector>

#include "oracles.hpp"
#include "qseries/cli.hpp"

using namespace qseries;
using Clock = std::chrono::steady_clock;

namespace {

struct Criterion {
    int number;
    std::string summary;
    std::function<bool(std::string&)> check;
};

const HalfExp kOrderQ40 = HalfExp::integer(40);

std::vector<std::pair<int, int>> unimodular_rs(PPPair pp) {
    std::vector<std::pair<int, int>> out;
    for (int r = 0; r <= pp.p - 1; ++r)
        for (int s = 1; s <= pp.p_prime - 1; ++s)
            if (std::abs(pp.p_prime * r - pp.p * s) == 1) out.emplace_back(r, s);
    return out;
}

bool criterion_catalog(std::string& detail) {
    const std::vector<std::string> labels = {"initial@0", "initial@1", "initial@2",
                                             "A(1)", "A(2)", "A(3)", "A(4)", "A(5)",
                                             "A(6)", "A(7)", "A(8)", "B(1)", "B(3)"};
    for (const auto& label : labels) {
        const VerifyReport rep =
            verify_bailey_pair(Catalog::instance().get(label).bailey(), 8, kOrderQ40);
        if (!rep.ok()) {
            detail = label + ": " + rep.status;
            return false;
        }
    }
    detail = "13 pairs, L <= 8, exact to q^40";
    return true;
}

bool criterion_chain(std::string& detail) {
    const RhoSpec inf = RhoSpec::infinity();
    const struct {
        const char* from;
        const char* to;
    } cases[] = {{"initial@0", "B(1)"}, {"initial@1", "B(3)"}};
    for (const auto& c : cases) {
        const BaileyPair chained =
            chain_step(Catalog::instance().get(c.from).bailey(), inf, inf);
        const BaileyPair& target = Catalog::instance().get(c.to).bailey();
        for (int L = 0; L <= 8; ++L) {
            if (chained.alpha_exact(L) != target.alpha_exact(L)) {
                detail = std::string(c.from) + " -> " + c.to + ": alpha differs at L=" +
                         std::to_string(L);
                return false;
            }
            if (!agree_to(chained.beta(L, kOrderQ40), target.beta(L, kOrderQ40), kOrderQ40)) {
                detail = std::string(c.from) + " -> " + c.to + ": beta differs at L=" +
                         std::to_string(L);
                return false;
            }
        }
    }
    detail = "alpha exact as polynomials, beta exact to q^40, L <= 8";
    return true;
}

bool criterion_lattice(std::string& detail) {
    const RhoSpec inf = RhoSpec::infinity();
    // N = 0 degeneration on the unit pair and A(1), term by term
    for (const char* label : {"initial@1", "A(1)"}) {
        const BaileyPair& p = Catalog::instance().get(label).bailey();
        const BaileyPair c = chain_step(p, inf, inf);
        const BaileyPair l1 = lattice_step_I(p, 0, inf, inf);
        const BaileyPair l2 = lattice_step_II(p, 0, inf, inf);
        HalfExp big = kOrderQ40;
        for (int L = 0; L <= 6; ++L)
            if (auto d = c.alpha_exact(L).degree()) big = std::max(big, *d + HalfExp::integer(2));
        for (int L = 0; L <= 6; ++L) {
            if (!agree_to(l1.alpha(L, big), c.alpha(L, big), big) ||
                !agree_to(l2.alpha(L, big), c.alpha(L, big), big) ||
                !agree_to(l1.beta(L, kOrderQ40), c.beta(L, kOrderQ40), kOrderQ40) ||
                !agree_to(l2.beta(L, kOrderQ40), c.beta(L, kOrderQ40), kOrderQ40)) {
                detail = std::string(label) + ": N=0 differs from the chain at L=" +
                         std::to_string(L);
                return false;
            }
        }
    }
    // N in {1,2}: outputs are Bailey pairs. The input must live at eta >= N,
    // so the unit pairs at eta = N feed the steps; A(1) (eta = 0) cannot, and
    // the constructor must reject it.
    for (int N : {1, 2}) {
        for (const bool variant_two : {false, true}) {
            const BaileyPair in = unit_bailey_pair(N);
            const BaileyPair out = variant_two ? lattice_step_II(in, N, inf, inf)
                                               : lattice_step_I(in, N, inf, inf);
            const VerifyReport rep = verify_bailey_pair(out, 6, kOrderQ40);
            if (!rep.ok()) {
                detail = out.label + ": " + rep.status;
                return false;
            }
        }
        try {
            lattice_step_I(Catalog::instance().get("A(1)").bailey(), N, inf, inf);
            detail = "A(1) accepted at N=" + std::to_string(N) + " despite eta < N";
            return false;
        } catch (const error&) {
        }
    }
    detail = "N=0 equals chain (L <= 6); N in {1,2} verified to q^40; eta < N rejected";
    return true;
}

bool criterion_thmF(std::string& detail) {
    int checked = 0;
    for (const PPPair& pp :
         {PPPair(3, 4), PPPair(3, 5), PPPair(4, 5), PPPair(4, 7), PPPair(5, 7), PPPair(5, 8)}) {
        for (const auto& [r, s] : unimodular_rs(pp)) {
            for (std::int64_t L = 0; L <= 10; ++L) {
                if (x_bosonic(ConfigSumQuery(pp, r, s, 2 * L, s)) != x_fermionic(pp, r, s, L)) {
                    detail = "mismatch at (p,p')=" + pp.str() + " r=" + std::to_string(r) +
                             " s=" + std::to_string(s) + " L=" + std::to_string(L);
                    return false;
                }
                ++checked;
            }
        }
    }
    detail = std::to_string(checked) + " exact polynomial identities";
    return true;
}

bool criterion_thmF2(std::string& detail) {
    int checked = 0;
    for (const PPPair& pp :
         {PPPair(3, 4), PPPair(3, 5), PPPair(4, 5), PPPair(4, 7), PPPair(5, 7), PPPair(5, 8)}) {
        for (std::int64_t L = 0; L <= 10; ++L) {
            if (x_bosonic(ConfigSumQuery(pp, 0, 1, 2 * L, 1)) != x_fermionic_01(pp, L)) {
                detail = "mismatch at (p,p')=" + pp.str() + " L=" + std::to_string(L);
                return false;
            }
            ++checked;
        }
    }
    detail = std::to_string(checked) + " exact polynomial identities";
    return true;
}

bool criterion_rr(std::string& detail) {
    const HalfExp order = HalfExp::integer(50);
    for (int i : {1, 2}) {
        const IdentityReport rep = rogers_ramanujan(i, order);
        if (!rep.ok()) {
            detail = "RR" + std::to_string(i) + ": " + rep.status;
            return false;
        }
        const auto counts = oracles::partition_counts(50, [i](int part) {
            const int m = part % 5;
            return i == 1 ? (m == 1 || m == 4) : (m == 2 || m == 3);
        });
        for (int n = 0; n <= 50; ++n) {
            if (rep.lhs.coeff(HalfExp::integer(n)) != counts[static_cast<std::size_t>(n)]) {
                detail = "RR" + std::to_string(i) + ": oracle mismatch at q^" + std::to_string(n);
                return false;
            }
        }
    }
    detail = "both identities to q^50, sum side matches the partition oracle";
    return true;
}

bool criterion_ag(std::string& detail) {
    for (int k = 2; k <= 4; ++k) {
        for (int i = 1; i <= k; ++i) {
            const IdentityReport direct = andrews_gordon(k, i, kOrderQ40, AgRoute::direct);
            const IdentityReport derived = andrews_gordon(k, i, kOrderQ40, AgRoute::derived);
            const std::string at = " at k=" + std::to_string(k) + ", i=" + std::to_string(i);
            if (!direct.ok()) {
                detail = "direct route " + direct.status + at;
                return false;
            }
            if (!derived.ok()) {
                detail = "derived route " + derived.status + at;
                return false;
            }
            if (!agree_to(direct.lhs, derived.lhs,
                          std::min({kOrderQ40, direct.lhs.order(), derived.lhs.order()}))) {
                detail = "routes disagree" + at;
                return false;
            }
        }
    }
    detail = "k in {2,3,4}, all i, both routes to q^40, derived alpha matches the closed form";
    return true;
}

bool criterion_cbp2(std::string& detail) {
    int checked = 0;
    for (const PPPair& pp :
         {PPPair(1, 3), PPPair(2, 3), PPPair(3, 4), PPPair(2, 5), PPPair(3, 5)}) {
        for (int eta = 0; eta <= 2; ++eta) {
            for (int ell = 0; ell <= std::min(2, pp.p_prime - 2); ++ell) {
                if ((ell + eta) % 2 != 0) continue;
                const VerifyReport rep =
                    verify_conjugate_pair(conj_pair_cbp2(pp, eta, ell), 6, kOrderQ40);
                if (!rep.ok()) {
                    detail = rep.label + ": " + rep.status;
                    return false;
                }
                ++checked;
            }
        }
    }
    detail = std::to_string(checked) + " conjugate pairs, L <= 6, to q^40";
    return true;
}

bool criterion_k_pairs(std::string& detail) {
    for (int eta = 0; eta <= 2; ++eta) {
        for (int j = 0; j <= 2; ++j) {
            const VerifyReport rep =
                verify_conjugate_pair(conj_pair_binomial(eta, j), 6, kOrderQ40);
            if (!rep.ok()) {
                detail = rep.label + ": " + rep.status;
                return false;
            }
        }
    }
    for (auto [x, y] : std::vector<std::pair<int, int>>{{0, 1}, {1, 1}, {1, 2}, {2, 3}}) {
        if (!summation_formula_check(x, y, kOrderQ40).equal) {
            detail = "summation formula fails at x=" + std::to_string(x) +
                     ", y=" + std::to_string(y);
            return false;
        }
    }
    detail = "9 binomial conjugate pairs and 4 summation instances to q^40";
    return true;
}

bool criterion_coset(std::string& detail) {
    const HalfExp order = HalfExp::integer(30);
    const struct {
        int p1, q1, r, s;
    } firsts[] = {{2, 3, 1, 1}, {1, 3, 0, 1}, {3, 4, 1, 1}};
    for (const auto& f : firsts) {
        for (const PPPair& pp2 : {PPPair(1, 3), PPPair(2, 3)}) {
            const IdentityReport rep =
                coset_identity(PPPair(f.p1, f.q1), f.r, f.s, pp2, order);
            if (!rep.ok()) {
                detail = rep.params + ": " + rep.status;
                return false;
            }
        }
    }
    detail = "6 coset identities to q^30";
    return true;
}

bool criterion_dualities(std::string& detail) {
    int checked = 0, low = 0, high = 0;
    const std::vector<PPPair> pps = {{1, 3}, {1, 4}, {2, 5}, {2, 7}, {3, 7},
                                     {3, 4}, {3, 5}, {4, 5}, {4, 7}, {5, 8}};
    for (const PPPair& pp : pps) {
        for (int r = 0; r <= pp.p - 1; ++r) {
            for (int s = 1; s <= pp.p_prime - 1; ++s) {
                for (int b = 1; b <= pp.p_prime - 1; ++b) {
                    for (std::int64_t L : {3, 4}) {
                        if ((L + s + b) % 2 != 0) continue;
                        if (b - r < 0 || b - r > pp.p_prime - pp.p - 1) continue;
                        const ConfigSumQuery qy(pp, r, s, L, b);
                        if (x_dual(qy) != x_bosonic(qy)) {
                            detail = "first symmetry fails at (p,p')=" + pp.str();
                            return false;
                        }
                        ++checked;
                        (2 * pp.p > pp.p_prime ? low : high) += 1;
                    }
                }
            }
        }
    }
    int checked01 = 0;
    for (const PPPair& pp : {PPPair(2, 3), PPPair(3, 4), PPPair(3, 5), PPPair(4, 5)}) {
        for (std::int64_t L : {1, 2, 3}) {
            const QPolynomial lhs = x_bosonic(
                ConfigSumQuery(PPPair(pp.p_prime - pp.p, pp.p_prime), 0, 1, 2 * L, 1));
            if (lhs != x_dual_01(pp, 0, 1, L)) {
                detail = "second symmetry fails at (p,p')=" + pp.str();
                return false;
            }
            ++checked01;
        }
    }
    if (checked + checked01 < 20 || low == 0 || high == 0) {
        detail = "instance sweep too small";
        return false;
    }
    detail = std::to_string(checked) + " + " + std::to_string(checked01) +
             " exact instances across p' < 2p and p' > 2p";
    return true;
}

bool criterion_determinism(std::string& detail) {
    const auto strip_runtimes = [](const std::string& text) {
        std::string filtered;
        std::istringstream in(text);
        std::string line;
        while (std::getline(in, line)) {
            const auto pos = line.find(" ms)");
            if (pos != std::string::npos) {
                const auto comma = line.rfind(',', pos);
                if (comma != std::string::npos) line = line.substr(0, comma) + ")";
            }
            filtered += line + "\n";
        }
        return filtered;
    };
    const std::vector<std::vector<std::string>> invocations = {
        {"verify-pair", "all", "--lmax", "6", "--order", "60"},
        {"identity", "ag", "--k", "3", "--route", "both", "--order", "40"},
        {"identity", "rr", "--order", "60"},
    };
    for (const auto& base : invocations) {
        std::string outputs[2];
        int codes[2];
        for (int variant = 0; variant < 2; ++variant) {
            auto args = base;
            args.push_back("--jobs");
            args.push_back(variant == 0 ? "1" : "4");
            std::ostringstream out, err;
            codes[variant] = cli::run(args, out, err);
            outputs[variant] = strip_runtimes(out.str());
        }
        if (codes[0] != 0 || codes[1] != 0) {
            detail = "invocation failed: " + base[0];
            return false;
        }
        if (outputs[0] != outputs[1]) {
            detail = "--jobs changed the output of " + base[0];
            return false;
        }
    }
    detail = "three multi-report invocations byte-identical under --jobs 1 vs 4";
    return true;
}

}  // namespace

int main() {
    const auto t0 = Clock::now();
    std::vector<Criterion> criteria = {
        {1, "catalog soundness", criterion_catalog},
        {2, "chain reproduces Rogers' pairs", criterion_chain},
        {3, "lattice degeneration and closure", criterion_lattice},
        {4, "fermionic = bosonic (thmF set)", criterion_thmF},
        {5, "fermionic (0,1) forms (thmF2 set)", criterion_thmF2},
        {6, "Rogers-Ramanujan to q^50 with oracle", criterion_rr},
        {7, "Andrews-Gordon k <= 4, both routes", criterion_ag},
        {8, "string-function conjugate pairs", criterion_cbp2},
        {9, "binomial conjugate pairs + summation formula", criterion_k_pairs},
        {10, "coset identities", criterion_coset},
        {11, "q -> 1/q dualities", criterion_dualities},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        const auto tc = Clock::now();
        std::string detail;
        bool ok = false;
        try {
            ok = c.check(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(Clock::now() - tc).count();
        std::cout << (ok ? "PASS" : "FAIL") << " criterion " << c.number << " (" << c.summary
                  << "): " << detail << " [" << secs << " s]" << std::endl;
        if (!ok) ++failures;
    }
    // criterion 12: determinism under --jobs, and the whole suite in budget
    {
        const auto tc = Clock::now();
        std::string detail;
        bool ok = false;
        try {
            ok = criterion_determinism(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        const double total = std::chrono::duration<double>(Clock::now() - t0).count();
        if (ok && total > 300.0) {
            ok = false;
            detail = "suite exceeded 300 s single-threaded";
        }
        const double secs = std::chrono::duration<double>(Clock::now() - tc).count();
        std::cout << (ok ? "PASS" : "FAIL") << " criterion 12 (deterministic, in budget): "
                  << detail << "; total " << total << " s [" << secs << " s]" << std::endl;
        if (!ok) ++failures;
    }
    if (failures == 0) {
        std::cout << "acceptance: all 12 criteria passed" << std::endl;
        return 0;
    }
    std::cout << "acceptance: " << failures << " criteria FAILED" << std::endl;
    return 1;
}
