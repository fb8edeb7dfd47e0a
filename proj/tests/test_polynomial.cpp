#include <catch2/catch_amalgamated.hpp>

#include "trec/polynomial.hpp"
#include "trec/ratfunc.hpp"

#include <random>

using namespace trec;

namespace {
Rational Q(long n, long d = 1) { return Rational(n, d); }
} // namespace

TEST_CASE("polynomial basics") {
    Polynomial p{Q(1), Q(0), Q(-1)}; // 1 - z^2
    CHECK(p.degree() == 2);
    CHECK(p.eval(Q(2)) == Q(-3));
    CHECK((p * p).degree() == 4);
    CHECK(p.derivative() == Polynomial{Q(0), Q(-2)});
    CHECK(Polynomial{}.is_zero());

    auto [q, r] = Polynomial::divmod(Polynomial{Q(-1), Q(0), Q(0), Q(1)}, Polynomial{Q(-1), Q(1)});
    CHECK(q == Polynomial{Q(1), Q(1), Q(1)});
    CHECK(r.is_zero());
}

TEST_CASE("taylor shift") {
    Polynomial p{Q(0), Q(0), Q(1)}; // z^2
    CHECK(p.shifted(Q(1)) == Polynomial{Q(1), Q(2), Q(1)});
    Polynomial c{Q(3), Q(-1), Q(5)};
    // p(x+a) evaluated at x equals p evaluated at x+a
    CHECK(c.shifted(Q(7, 2)).eval(Q(1, 3)) == c.eval(Q(1, 3) + Q(7, 2)));
}

TEST_CASE("rational_roots on the named cases") {
    // z^2 - 1 -> {(-1,1),(1,1)}, trivial cofactor
    RootList r1 = rational_roots(Polynomial{Q(-1), Q(0), Q(1)});
    REQUIRE(r1.roots.size() == 2);
    CHECK(r1.roots[0] == std::pair{Q(-1), 1});
    CHECK(r1.roots[1] == std::pair{Q(1), 1});
    CHECK(r1.cofactor.degree() == 0);

    // z^2 -> {(0,2)}
    RootList r2 = rational_roots(Polynomial{Q(0), Q(0), Q(1)});
    REQUIRE(r2.roots.size() == 1);
    CHECK(r2.roots[0] == std::pair{Q(0), 2});

    // z^3 - 2z -> {(0,1)}, cofactor z^2 - 2
    RootList r3 = rational_roots(Polynomial{Q(0), Q(-2), Q(0), Q(1)});
    REQUIRE(r3.roots.size() == 1);
    CHECK(r3.roots[0] == std::pair{Q(0), 1});
    CHECK(r3.cofactor == Polynomial{Q(-2), Q(0), Q(1)});
}

TEST_CASE("rational_roots with fractional roots and content") {
    // (2z-1)(3z+2)^2 = 18z^3 + 15z^2 - 4z - 4 ... compute directly instead
    Polynomial p = Polynomial{Q(-1), Q(2)} * Polynomial{Q(2), Q(3)} * Polynomial{Q(2), Q(3)};
    RootList r = rational_roots(p);
    REQUIRE(r.roots.size() == 2);
    CHECK(r.roots[0] == std::pair{Q(-2, 3), 2});
    CHECK(r.roots[1] == std::pair{Q(1, 2), 1});
    CHECK(r.cofactor.degree() == 0);
}

TEST_CASE("rational function normalization") {
    RationalFunction f(Polynomial{Q(0), Q(2)}, Polynomial{Q(0), Q(0), Q(4)}); // 2z / 4z^2
    CHECK(f.num() == Polynomial{Q(1, 2)});
    CHECK(f.den() == Polynomial{Q(0), Q(1)});
    CHECK(f.den().leading().is_one());

    RationalFunction g(Polynomial{Q(1)}, Polynomial{Q(1), Q(1)});
    CHECK((f + g - g) == f);
    CHECK((f * g / g) == f);
}

TEST_CASE("local and infinity series expansions") {
    RationalFunction f(Polynomial{Q(1)}, Polynomial{Q(-1), Q(1)}); // 1/(z-1)
    QSeries at0 = local_series(f, Q(0), 5);
    // 1/(z-1) = -(1 + z + z^2 + ...)
    for (long e = 0; e < 5; ++e) CHECK(at0.coeff(e) == Q(-1));

    QSeries at1 = local_series(f, Q(1), 3);
    CHECK(at1.valuation() == -1);
    CHECK(at1.coeff(-1) == Q(1));
    CHECK(at1.coeff(0) == Q(0));

    // x = z + 1/z at infinity: x(1/w) = 1/w + w
    RationalFunction x(Polynomial{Q(1), Q(0), Q(1)}, Polynomial{Q(0), Q(1)});
    QSeries xi = infinity_series(x, 4);
    CHECK(xi.coeff(-1) == Q(1));
    CHECK(xi.coeff(0) == Q(0));
    CHECK(xi.coeff(1) == Q(1));
    CHECK(xi.coeff(2) == Q(0));
}

TEST_CASE("partial fractions on the named cases") {
    // 1/(z^2-1) = (1/2)/(z-1) - (1/2)/(z+1)
    RationalFunction f1(Polynomial{Q(1)}, Polynomial{Q(-1), Q(0), Q(1)});
    PartialFractions p1 = partial_fractions(f1);
    CHECK(p1.polynomial_part.is_zero());
    CHECK(p1.terms.at({Q(1), 1}) == Q(1, 2));
    CHECK(p1.terms.at({Q(-1), 1}) == Q(-1, 2));
    CHECK(p1.terms.size() == 2);

    // 1/z^2 -> single term
    RationalFunction f2(Polynomial{Q(1)}, Polynomial{Q(0), Q(0), Q(1)});
    PartialFractions p2 = partial_fractions(f2);
    CHECK(p2.terms.size() == 1);
    CHECK(p2.terms.at({Q(0), 2}) == Q(1));

    // (z+1)/z^3 = 1/z^2 + 1/z^3
    RationalFunction f3(Polynomial{Q(1), Q(1)}, Polynomial{Q(0), Q(0), Q(0), Q(1)});
    PartialFractions p3 = partial_fractions(f3);
    CHECK(p3.terms.size() == 2);
    CHECK(p3.terms.at({Q(0), 2}) == Q(1));
    CHECK(p3.terms.at({Q(0), 3}) == Q(1));

    // irrational denominator reports the offending factor
    RationalFunction bad(Polynomial{Q(1)}, Polynomial{Q(-2), Q(0), Q(1)});
    CHECK_THROWS_AS(partial_fractions(bad), IrrationalDenominator);
}

TEST_CASE("partial fractions reassembly is the identity (randomized)") {
    std::mt19937 rng(20260810);
    std::uniform_int_distribution<int> small(-4, 4);
    for (int trial = 0; trial < 30; ++trial) {
        // Build a denominator from random linear factors, a random numerator.
        Polynomial den = Polynomial::one();
        int nf = 1 + trial % 3;
        for (int i = 0; i < nf; ++i) {
            int a = small(rng);
            den = den * Polynomial{Q(-a), Q(1)};
            if (trial % 2 == 0) den = den * Polynomial{Q(-a), Q(1)};
        }
        std::vector<Rational> nc;
        for (int i = 0; i <= (trial % 4) + nf; ++i) nc.push_back(Q(small(rng)));
        Polynomial num(nc);
        if (num.is_zero()) num = Polynomial::one();
        RationalFunction f(num, den);
        CHECK(reassemble(partial_fractions(f)) == f);
    }
}
