#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "qseries/catalog.hpp"
#include "qseries/configsum.hpp"
#include "qseries/format.hpp"

using namespace qseries;

namespace {

// All (r, s) with 0 <= r <= p-1, 1 <= s <= p'-1, |p'r - ps| = 1.
std::vector<std::pair<int, int>> unimodular_rs(PPPair pp) {
    std::vector<std::pair<int, int>> out;
    for (int r = 0; r <= pp.p - 1; ++r)
        for (int s = 1; s <= pp.p_prime - 1; ++s)
            if (std::abs(pp.p_prime * r - pp.p * s) == 1) out.emplace_back(r, s);
    return out;
}

bool nonnegative_coeffs(const QPolynomial& x) {
    for (const auto& [e, c] : x.terms())
        if (c < 0) return false;
    return true;
}

const std::vector<PPPair> kThmFSet = {{3, 4}, {3, 5}, {4, 5}, {4, 7}, {5, 7}, {5, 8}};

}  // namespace

TEST_CASE("continued fractions and dimensions") {
    CHECK(continued_fraction(PPPair(2, 3)) == std::vector<int>{2});
    CHECK(continued_fraction(PPPair(3, 4)) == std::vector<int>{3});
    CHECK(continued_fraction(PPPair(3, 5)) == std::vector<int>{1, 2});
    CHECK(continued_fraction(PPPair(5, 7)) == std::vector<int>{2, 2});
    CHECK(continued_fraction(PPPair(4, 7)) == std::vector<int>{1, 3});
    CHECK(continued_fraction(PPPair(5, 8)) == std::vector<int>{1, 1, 2});
    CHECK(fractional_structure(PPPair(2, 3)).d == 0);
    CHECK(fractional_structure(PPPair(3, 4)).d == 1);
    CHECK(fractional_structure(PPPair(3, 5)).d == 1);
    CHECK(fractional_structure(PPPair(3, 5)).t == std::vector<int>{1});
    CHECK_THROWS_AS(continued_fraction(PPPair(2, 5)), error);   // p' > 2p: dualize first
    CHECK_THROWS_AS(continued_fraction(PPPair(1, 3)), error);
}

TEST_CASE("fractional incidence and Cartan-type matrices") {
    using M = std::vector<std::vector<int>>;
    SUBCASE("p' = p + 1 gives the A_{p-2} Cartan matrix") {
        const FractionalStructure fs = fractional_structure(PPPair(4, 5));
        CHECK(fs.inc == M{{0, 1}, {1, 0}});
        CHECK(fs.cartan == M{{2, -1}, {-1, 2}});
        const FractionalStructure a3 = fractional_structure(PPPair(5, 6));
        CHECK(a3.cartan == M{{2, -1, 0}, {-1, 2, -1}, {0, -1, 2}});
    }
    SUBCASE("(2k-1, 2k+1) gives the tadpole matrix") {
        CHECK(fractional_structure(PPPair(3, 5)).inc == M{{1}});
        CHECK(fractional_structure(PPPair(3, 5)).cartan == M{{1}});
        CHECK(fractional_structure(PPPair(5, 7)).inc == M{{0, 1}, {1, 1}});
        CHECK(fractional_structure(PPPair(5, 7)).cartan == M{{2, -1}, {-1, 1}});
    }
    SUBCASE("remaining acceptance-set matrices, pinned by hand") {
        CHECK(fractional_structure(PPPair(3, 4)).inc == M{{0}});
        CHECK(fractional_structure(PPPair(3, 4)).cartan == M{{2}});
        CHECK(fractional_structure(PPPair(4, 7)).inc == M{{1, -1}, {1, 0}});
        CHECK(fractional_structure(PPPair(5, 8)).inc == M{{1, -1}, {1, 1}});
    }
}

TEST_CASE("bosonic configuration sums") {
    SUBCASE("X^{(2,3)}_{1,1}(2L,1) = 1") {
        for (std::int64_t L : {0, 1, 2, 3})
            CHECK(x_bosonic(ConfigSumQuery(PPPair(2, 3), 1, 1, 2 * L, 1)) == QPolynomial::one());
    }
    SUBCASE("X^{(3,4)}_{1,1}(4,1) = 1 + q^2") {
        CHECK(to_string(x_bosonic(ConfigSumQuery(PPPair(3, 4), 1, 1, 4, 1))) == "1 + q^2");
    }
    SUBCASE("X^{(1,3)}_{0,1}(2L,1) = q^(L^2)") {
        for (std::int64_t L : {0, 1, 2, 3, 4, 5})
            CHECK(x_bosonic(ConfigSumQuery(PPPair(1, 3), 0, 1, 2 * L, 1)) ==
                  QPolynomial::monomial(1, HalfExp::integer(L * L)));
    }
    SUBCASE("X^{(1,3)}_{0,2}(2L+1,1) = q^(((2L+1)^2-1)/4)") {
        for (std::int64_t L : {0, 1, 2, 3})
            CHECK(x_bosonic(ConfigSumQuery(PPPair(1, 3), 0, 2, 2 * L + 1, 1)) ==
                  QPolynomial::monomial(1, HalfExp::integer(L * L + L)));
    }
    SUBCASE("query invariants enforced") {
        CHECK_THROWS_AS(ConfigSumQuery(PPPair(2, 3), 1, 1, 3, 1), error);  // parity
        CHECK_THROWS_AS(ConfigSumQuery(PPPair(2, 3), 2, 1, 2, 1), error);  // r > p-1
        CHECK_THROWS_AS(ConfigSumQuery(PPPair(2, 3), 1, 3, 2, 1), error);  // s > p'-1
        CHECK_THROWS_AS(ConfigSumQuery(PPPair(2, 3), 1, 1, -2, 1), error);
    }
}

TEST_CASE("fermionic form: spec instances") {
    CHECK(to_string(x_fermionic(PPPair(3, 5), 1, 2, 1)) == "1 + q");
    CHECK(to_string(x_fermionic(PPPair(3, 4), 1, 1, 2)) == "1 + q^2");
    SUBCASE("d = 0 collapses to the empty term") {
        CHECK(x_fermionic(PPPair(2, 3), 1, 1, 0) == QPolynomial::one());
        CHECK(x_fermionic(PPPair(2, 3), 1, 1, 4) == QPolynomial::one());
    }
    SUBCASE("preconditions") {
        CHECK_THROWS_AS(x_fermionic(PPPair(1, 3), 0, 1, 2), error);   // p = 1
        CHECK_THROWS_AS(x_fermionic(PPPair(2, 5), 1, 2, 2), error);   // p' > 2p
        CHECK_THROWS_AS(x_fermionic(PPPair(3, 4), 1, 2, 2), error);   // |p'r-ps| != 1
    }
}

TEST_CASE("theorem thmF: fermionic equals bosonic") {
    for (const PPPair& pp : kThmFSet) {
        const auto rs = unimodular_rs(pp);
        CHECK(!rs.empty());
        for (const auto& [r, s] : rs) {
            for (std::int64_t L = 0; L <= 6; ++L) {
                const QPolynomial bos = x_bosonic(ConfigSumQuery(pp, r, s, 2 * L, s));
                const QPolynomial fer = x_fermionic(pp, r, s, L);
                INFO("(p,p')=(", pp.p, ",", pp.p_prime, ") r=", r, " s=", s, " L=", L);
                CHECK(bos == fer);
                CHECK(nonnegative_coeffs(bos));
            }
        }
    }
}

TEST_CASE("fermionic forms beyond the standard set: higher-dimensional lattices") {
    // (5,9) has d = 3; (8,13) has continued fraction [1,1,1,2] with three
    // t-rows; (7,8) is the A_5 case
    for (const PPPair& pp : {PPPair(5, 9), PPPair(8, 13), PPPair(7, 8)}) {
        for (const auto& [r, s] : unimodular_rs(pp)) {
            for (std::int64_t L = 0; L <= 4; ++L) {
                INFO("(p,p')=(", pp.p, ",", pp.p_prime, ") r=", r, " s=", s, " L=", L);
                CHECK(x_bosonic(ConfigSumQuery(pp, r, s, 2 * L, s)) == x_fermionic(pp, r, s, L));
            }
        }
        for (std::int64_t L = 0; L <= 4; ++L)
            CHECK(x_bosonic(ConfigSumQuery(pp, 0, 1, 2 * L, 1)) == x_fermionic_01(pp, L));
    }
}

TEST_CASE("theorem thmF2: (0,1) fermionic form") {
    CHECK(x_fermionic_01(PPPair(3, 4), 0) == QPolynomial::one());
    for (const PPPair& pp : kThmFSet) {
        for (std::int64_t L = 0; L <= 6; ++L) {
            const QPolynomial bos = x_bosonic(ConfigSumQuery(pp, 0, 1, 2 * L, 1));
            const QPolynomial fer = x_fermionic_01(pp, L);
            INFO("(p,p')=(", pp.p, ",", pp.p_prime, ") L=", L);
            CHECK(bos == fer);
            CHECK(nonnegative_coeffs(bos));
        }
    }
}

TEST_CASE("q -> 1/q dualities") {
    SUBCASE("(1,3) from (2,3) at L = 2, b = s = 1") {
        const ConfigSumQuery qy(PPPair(1, 3), 0, 1, 2, 1);
        CHECK(x_dual(qy) == x_bosonic(qy));
    }
    SUBCASE("sweep across both regimes") {
        int checked = 0;
        const std::vector<PPPair> pps = {{1, 3}, {1, 4}, {2, 5}, {2, 7}, {3, 7},
                                         {3, 4}, {3, 5}, {4, 5}, {4, 7}, {5, 8}};
        for (const PPPair& pp : pps) {
            for (int r = 0; r <= pp.p - 1 && checked < 60; ++r) {
                for (int s = 1; s <= pp.p_prime - 1; ++s) {
                    for (int b = 1; b <= pp.p_prime - 1; ++b) {
                        for (std::int64_t L : {2, 4, 5}) {
                            if ((L + s + b) % 2 != 0) continue;
                            if (b - r < 0 || b - r > pp.p_prime - pp.p - 1) continue;
                            const ConfigSumQuery qy(pp, r, s, L, b);
                            CHECK(x_dual(qy) == x_bosonic(qy));
                            ++checked;
                        }
                    }
                }
            }
        }
        CHECK(checked >= 20);
    }
    SUBCASE("second symmetry, (0,1)-type") {
        for (const PPPair& pp : {PPPair(2, 3), PPPair(3, 4), PPPair(3, 5)}) {
            for (std::int64_t L : {0, 1, 2, 3}) {
                const QPolynomial lhs = x_bosonic(
                    ConfigSumQuery(PPPair(pp.p_prime - pp.p, pp.p_prime), 0, 1, 2 * L, 1));
                CHECK(lhs == x_dual_01(pp, 0, 1, L));
            }
        }
    }
    SUBCASE("involution") {
        const ConfigSumQuery qy(PPPair(3, 5), 1, 2, 4, 2);
        const QPolynomial once = x_dual(qy);
        // applying the symmetry twice returns the original evaluation
        CHECK(once == x_bosonic(qy));
        const ConfigSumQuery dual_qy(PPPair(2, 5), qy.b - qy.r, qy.s, qy.L, qy.b);
        const QPolynomial twice = x_dual(dual_qy);
        CHECK(twice == x_bosonic(dual_qy));
    }
    SUBCASE("non-integral shift is impossible under the parity invariant") {
        CHECK_THROWS_AS(ConfigSumQuery(PPPair(3, 5), 1, 2, 3, 2), error);
    }
}

TEST_CASE("configuration-sum Bailey pairs") {
    const HalfExp order = HalfExp::integer(40);
    SUBCASE("ABF(2,3,1,1) is A(1)") {
        const BaileyPair abf = abf_bailey_pair(PPPair(2, 3), 1, 1);
        const BaileyPair& a1 = Catalog::instance().get("A(1)").bailey();
        for (int L = 0; L <= 8; ++L) {
            CHECK(abf.alpha_exact(L) == a1.alpha_exact(L));
            CHECK(agree_to(abf.beta(L, order), a1.beta(L, order), order));
        }
    }
    SUBCASE("ABF(1,3,0,1) is A(5)") {
        const BaileyPair abf = abf_bailey_pair(PPPair(1, 3), 0, 1);
        const BaileyPair& a5 = Catalog::instance().get("A(5)").bailey();
        for (int L = 0; L <= 8; ++L) {
            CHECK(abf.alpha_exact(L) == a5.alpha_exact(L));
            CHECK(agree_to(abf.beta(L, order), a5.beta(L, order), order));
        }
    }
    SUBCASE("ABF(2,5,1,2): Andrews' pair verifies") {
        const BaileyPair abf = abf_bailey_pair(PPPair(2, 5), 1, 2);
        CHECK(verify_bailey_pair(abf, 8, order).ok());
    }
    SUBCASE("catalog serves ABF labels") {
        const CatalogEntry& e = Catalog::instance().get("ABF(3,4,1,1)");
        CHECK(e.bailey().eta == 0);
    }
    SUBCASE("preconditions") {
        CHECK_THROWS_AS(abf_bailey_pair(PPPair(3, 4), 1, 2), error);
    }
}
