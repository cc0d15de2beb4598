#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qseries/catalog.hpp"
#include "qseries/format.hpp"

using namespace qseries;

namespace {
const HalfExp kOrder = HalfExp::integer(30);
}

TEST_CASE("every built-in entry loads verified") {
    Catalog& cat = Catalog::instance();
    for (const auto& label : cat.list()) {
        INFO(label);
        CHECK_NOTHROW(cat.get(label));
    }
    CHECK(cat.list().size() == 16);
}

TEST_CASE("unknown labels are rejected") {
    CHECK_THROWS_AS(Catalog::instance().get("C(9)"), error);
    CHECK_THROWS_AS(Catalog::instance().get("ABF(2,4,1,1)"), error);  // not coprime
}

TEST_CASE("spot values against the printed closed forms") {
    Catalog& cat = Catalog::instance();
    SUBCASE("B(1): alpha_L = (-1)^L q^(L(3L-1)/2)(1+q^L), beta_L = 1/(q)_L") {
        const BaileyPair& p = cat.get("B(1)").bailey();
        CHECK(p.eta == 0);
        for (int L = 0; L <= 6; ++L) {
            QPolynomial expect;
            if (L == 0) {
                expect = QPolynomial::one();
            } else {
                expect = QPolynomial::one() + QPolynomial::monomial(1, HalfExp::integer(L));
                expect = expect.shifted(HalfExp::half_steps(std::int64_t(L) * (3 * L - 1)));
                if (L % 2 == 1) expect = -expect;
            }
            CHECK(p.alpha_exact(L) == expect);
            CHECK(agree_to(p.beta(L, kOrder),
                           inv_pochhammer(SignedPower::q_to(1), L, kOrder), kOrder));
        }
    }
    SUBCASE("A(5): beta_L = q^(L^2)/(q)_{2L}, alpha on the 3L, 3L+-1 grid") {
        const BaileyPair& p = cat.get("A(5)").bailey();
        CHECK(p.eta == 0);
        CHECK(to_string(p.alpha_exact(3)) == "q^2 + q^4");  // grid point 3L at L=1
        CHECK(to_string(p.alpha_exact(2)) == "-q^2");       // 3L - 1 at L=1
        CHECK(to_string(p.alpha_exact(4)) == "-q^4");       // 3L + 1 at L=1
        const QSeries beta2 = p.beta(2, kOrder);
        const QSeries expect =
            inv_pochhammer(SignedPower::q_to(1), 4, kOrder).shifted(HalfExp::integer(4));
        CHECK(agree_to(beta2, expect.truncated(kOrder), kOrder));
    }
    SUBCASE("A(8): eta = 1, beta_L = q^(L^2+L)/(q^2)_{2L}") {
        const BaileyPair& p = cat.get("A(8)").bailey();
        CHECK(p.eta == 1);
        const QSeries beta1 = p.beta(1, kOrder);
        const QSeries expect =
            inv_pochhammer(SignedPower::q_to(2), 2, kOrder).shifted(HalfExp::integer(2));
        CHECK(agree_to(beta1, expect.truncated(kOrder), kOrder));
    }
    SUBCASE("gdinf entries are conjugate pairs") {
        const CatalogEntry& e = cat.get("gdinf@1");
        CHECK_FALSE(e.is_bailey());
        CHECK(e.conjugate().eta == 1);
        CHECK_THROWS_AS(e.bailey(), error);
    }
}

TEST_CASE("alpha index families cover the support exactly once") {
    // decoding guard: every L is produced by exactly one table family
    for (const char* label : {"A(1)", "A(2)", "A(4)", "A(7)"}) {
        const BaileyPair& p = Catalog::instance().get(label).bailey();
        for (int L = 0; L <= 24; ++L) CHECK_NOTHROW(p.alpha_exact(L));
    }
}

TEST_CASE("derivation expressions are addressable labels") {
    Catalog& cat = Catalog::instance();
    SUBCASE("chain expressions") {
        const BaileyPair& c = cat.get("chain(initial@0)").bailey();
        const BaileyPair& b1 = cat.get("B(1)").bailey();
        for (int L = 0; L <= 6; ++L) CHECK(c.alpha_exact(L) == b1.alpha_exact(L));
        CHECK_NOTHROW(cat.get("chain(A(5);inf,-q^(1/2))"));
        CHECK_NOTHROW(cat.get("chain(chain(initial@1))"));
    }
    SUBCASE("lattice expressions") {
        const BaileyPair& l = cat.get("latticeI(initial@1;N=1)").bailey();
        CHECK(l.eta == 0);
        CHECK_NOTHROW(cat.get("latticeII(initial@2;N=2,inf,inf)"));
    }
    SUBCASE("round-trip of generated labels") {
        const BaileyPair made =
            chain_step(cat.get("A(5)").bailey(), RhoSpec::infinity(),
                       RhoSpec::finite_power(-1, 1));
        const BaileyPair& looked_up = cat.get(made.label).bailey();
        for (int L = 0; L <= 4; ++L)
            CHECK(agree_to(looked_up.beta(L, kOrder), made.beta(L, kOrder), kOrder));
    }
    SUBCASE("malformed expressions are rejected") {
        CHECK_THROWS_AS(cat.get("chain()"), error);
        CHECK_THROWS_AS(cat.get("latticeI(initial@1)"), error);
        CHECK_THROWS_AS(cat.get("chain(initial@0;inf)"), error);
    }
}

TEST_CASE("Rogers' pairs arise from the chain on the unit pairs") {
    const RhoSpec inf = RhoSpec::infinity();
    const BaileyPair c0 = chain_step(Catalog::instance().get("initial@0").bailey(), inf, inf);
    const BaileyPair c1 = chain_step(Catalog::instance().get("initial@1").bailey(), inf, inf);
    for (int L = 0; L <= 8; ++L) {
        CHECK(c0.alpha_exact(L) == Catalog::instance().get("B(1)").bailey().alpha_exact(L));
        CHECK(c1.alpha_exact(L) == Catalog::instance().get("B(3)").bailey().alpha_exact(L));
    }
}
