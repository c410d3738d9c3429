#include <doctest.h>

#include "support/test_util.hpp"
#include "ynet/polynomial.hpp"

using namespace ynet;
using test::root_multiset_distance;

TEST_CASE("polynomial basics") {
    Polynomial p{cdouble(1.0), cdouble(2.0), cdouble(3.0)};  // 1 + 2s + 3s^2
    CHECK(p.degree() == 2);
    CHECK(p.eval(cdouble(2.0)) == cdouble(17.0));
    CHECK(p.derivative().coeffs() == std::vector<cdouble>{cdouble(2.0), cdouble(6.0)});

    const Polynomial q = p * p;
    CHECK(q.degree() == 4);
    CHECK(std::abs(q.eval(cdouble(0.5, 0.5)) - p.eval(cdouble(0.5, 0.5)) * p.eval(cdouble(0.5, 0.5))) < 1e-12);

    // Trailing (leading-degree) zeros trim away.
    Polynomial r({cdouble(1.0), cdouble(0.0), cdouble(0.0)});
    CHECK(r.degree() == 0);

    // Cancellation in addition renormalizes the degree.
    Polynomial a({cdouble(1.0), cdouble(1.0)});
    Polynomial b({cdouble(0.0), cdouble(-1.0)});
    CHECK((a + b).degree() == 0);
}

TEST_CASE("polynomial shift and scale composition") {
    const Polynomial p{cdouble(1.0), cdouble(-3.0), cdouble(2.0)};
    const cdouble c(0.7, -0.3);
    const Polynomial sh = p.shifted(c);
    for (int k = 0; k < 5; ++k) {
        const cdouble s(test::uniform(-2, 2), test::uniform(-2, 2));
        CHECK(std::abs(sh.eval(s) - p.eval(s + c)) < 1e-12);
        CHECK(std::abs(p.scaled_arg(cdouble(3.0)).eval(s) - p.eval(3.0 * s)) < 1e-12);
    }
}

TEST_CASE("roots of simple polynomials") {
    // s^2 + 1 -> +-j
    {
        auto r = Polynomial{cdouble(1.0), cdouble(0.0), cdouble(1.0)}.roots();
        CHECK(root_multiset_distance(r, {cdouble(0, 1), cdouble(0, -1)}) < 1e-12);
    }
    // s + 2 -> -2
    {
        auto r = Polynomial{cdouble(2.0), cdouble(1.0)}.roots();
        CHECK(root_multiset_distance(r, {cdouble(-2.0)}) < 1e-14);
    }
    // (s+1)(s^2+2s+5) -> {-1, -1+-2j}
    {
        const Polynomial p = Polynomial{cdouble(1), cdouble(1)} *
                             Polynomial{cdouble(5), cdouble(2), cdouble(1)};
        auto r = p.roots();
        CHECK(root_multiset_distance(r, {cdouble(-1), cdouble(-1, 2), cdouble(-1, -2)}) < 1e-10);
    }
    CHECK_THROWS_AS(Polynomial(cdouble(3.0)).roots(), InvalidArgument);
}

TEST_CASE("root residual bound") {
    for (int trial = 0; trial < 20; ++trial) {
        const Polynomial p = test::random_polynomial(6, trial % 2 == 1);
        const double scale = p.max_abs_coeff();
        for (const cdouble& r : p.roots()) {
            // |p(r)| small relative to the coefficient scale at |r|
            const double mag = std::max(1.0, std::abs(r));
            double bound = scale;
            for (int k = 0; k < p.degree(); ++k) bound *= mag;
            CHECK(std::abs(p.eval(r)) <= 1e-9 * bound);
        }
    }
}

TEST_CASE("product rule for root multisets") {
    // roots(p*q) == roots(p) U roots(q), random degrees <= 8
    for (int trial = 0; trial < 100; ++trial) {
        const int dp = 1 + trial % 5;
        const int dq = 1 + (trial / 3) % 4;
        const Polynomial p = test::random_polynomial(dp, trial % 3 == 0);
        const Polynomial q = test::random_polynomial(dq, trial % 4 == 0);
        auto expect = p.roots();
        for (const cdouble& r : q.roots()) expect.push_back(r);
        CHECK(root_multiset_distance((p * q).roots(), expect) < 1e-6);
    }
}

TEST_CASE("from_roots round trip") {
    std::vector<cdouble> roots{cdouble(-1, 2), cdouble(-1, -2), cdouble(-3), cdouble(0.5)};
    const Polynomial p = Polynomial::from_roots(roots, cdouble(2.0));
    CHECK(p.degree() == 4);
    for (const cdouble& r : roots) CHECK(std::abs(p.eval(r)) < 1e-12);
    CHECK(std::abs(p.leading() - cdouble(2.0)) < 1e-14);
}

TEST_CASE("degree cap fails loud") {
    std::vector<cdouble> big(120, cdouble(1.0));
    const Polynomial p(big);
    CHECK_THROWS_AS(p * p, NumericError);
}

TEST_CASE("roots at origin are stripped exactly") {
    // s^3 + s^2 = s^2 (s + 1)
    const Polynomial p{cdouble(0), cdouble(0), cdouble(1), cdouble(1)};
    auto r = p.roots();
    CHECK(root_multiset_distance(r, {cdouble(0), cdouble(0), cdouble(-1)}) < 1e-12);
}
