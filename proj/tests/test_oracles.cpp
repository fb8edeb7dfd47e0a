#include <catch2/catch_amalgamated.hpp>

#include "trec/curvedoc.hpp"
#include "trec/oracles.hpp"
#include "trec/transforms.hpp"

using namespace trec;
using namespace trec::oracles;

namespace {
Rational Q(long n, long d = 1) { return Rational(n, d); }
SpectralCurve shipped(const char* name) {
    return load_curve_file(std::string(TREC_CURVES_DIR) + "/" + name).curve;
}
} // namespace

TEST_CASE("tutte disc recursion: gaussian times give Catalans at even index") {
    auto A = tutte_disc({{2, Q(-1)}}, Q(1), 12);
    long catalan[] = {1, 1, 2, 5, 14, 42, 132};
    for (int k = 0; k <= 12; ++k) {
        if (k % 2) {
            CHECK(A[static_cast<std::size_t>(k)] == Q(0)); // parity of the recursion
        } else {
            CHECK(A[static_cast<std::size_t>(k)] == Q(catalan[k / 2]));
        }
    }
    CHECK_THROWS(tutte_disc({{2, Q(0)}}, Q(1), 4));
    CHECK_THROWS(tutte_disc({{2, Q(-1)}, {4, Q(1)}}, Q(1), 4));
}

TEST_CASE("tutte quartic perturbation agrees with the one-cut disc amplitude") {
    // Recursion side: differentiate the displayed recursion in t_4 at the
    // gaussian background.
    auto D = tutte_disc_first_order(Q(-1), Q(1), 4, 8);

    // Loop-equation side: y^2 + y V' = P with V' = -x + eps x^3 gives, to
    // first order, y1 = (x^2 + 1 - y0 x^3)/(-sqrt(x^2-4)) with
    // y0 = (x - sqrt(x^2-4))/2. Expand at infinity in w = 1/x.
    long long W = 16;
    QSeries w = QSeries::monomial(Q(1), 1);
    QSeries root =
        (QSeries::monomial(Q(1), 0) - QSeries::monomial(Q(4), 2)).truncated(W).sqrt(); // sqrt(1-4w^2)
    QSeries sqrt_x2m4 = root.times_power(-1);              // sqrt(x^2-4) = (1/w) sqrt(1-4w^2)
    QSeries x1 = QSeries::monomial(Q(1), -1);              // x
    QSeries y0 = (x1 - sqrt_x2m4).div_long(2);
    QSeries x2 = QSeries::monomial(Q(1), -2), x3 = QSeries::monomial(Q(1), -3);
    QSeries one = QSeries::monomial(Q(1), 0);
    QSeries y1 = (x2 + one - y0 * x3) / (-sqrt_x2m4);
    // y1 = sum dA_k x^{-k-1}: coefficient of w^{k+1}
    for (long long k = 0; k <= 8; ++k) CHECK(D[static_cast<std::size_t>(k)] == y1.coeff(k + 1));
    CHECK(D[2] == Q(2));
    (void)w;
}

TEST_CASE("one-face maps by exhaustive gluing") {
    auto k1 = one_face_maps(1);
    CHECK(k1 == std::map<int, long long>{{0, 1}});
    auto k2 = one_face_maps(2);
    CHECK(k2 == std::map<int, long long>{{0, 2}, {1, 1}});
    auto k3 = one_face_maps(3);
    CHECK(k3 == std::map<int, long long>{{0, 5}, {1, 10}});

    // totals are (2k-1)!! and the planar counts are Catalan
    long long dfact = 1;
    long catalan[] = {1, 1, 2, 5, 14, 42, 132};
    for (int k = 1; k <= 6; ++k) {
        dfact *= 2 * k - 1;
        auto counts = one_face_maps(k);
        long long total = 0;
        for (auto& [g, c] : counts) total += c;
        CHECK(total == dfact);
        CHECK(counts.at(0) == catalan[k]);
    }
    CHECK_THROWS(one_face_maps(7));
    CHECK_THROWS(one_face_maps(0));
}

TEST_CASE("hurwitz cut-and-join oracle") {
    HurwitzOracle H;

    SECTION("base case: the degree-1 identity cover") {
        CHECK(H.simple_hurwitz(0, make_partition({1})) == Q(1));
        CHECK(H.normalized(0, make_partition({1})) == Q(1));
    }

    SECTION("one simple branch point besides infinity: H_{0,(2)} = 1") {
        CHECK(H.normalized(0, make_partition({2})) == Q(1));
        CHECK(H.simple_hurwitz(0, make_partition({2})) == Q(1, 2));
    }

    SECTION("one-part genus-0 closed forms, n <= 8") {
        for (long n = 1; n <= 8; ++n) {
            // normalized: n^{n-1}/n!; monodromy-weighted connected: n^{n-3}
            CHECK(H.normalized(0, make_partition({n})) == Q(n).pow(n - 1) / factorial(n));
            if (n >= 1) CHECK(H.simple_hurwitz(0, make_partition({n})) == Q(n).pow(n - 3));
        }
    }

    SECTION("displayed genus-0 recursion reproduces the same numbers") {
        auto T = hurwitz_tree_recursion(8);
        for (long n = 1; n <= 8; ++n)
            CHECK(T[static_cast<std::size_t>(n)] == H.normalized(0, make_partition({n})));
    }

    SECTION("higher genus and several parts") {
        // classical values of the monodromy-weighted connected counts
        CHECK(H.simple_hurwitz(1, make_partition({1})) == Q(0));
        CHECK(H.simple_hurwitz(1, make_partition({2})) == Q(1, 2));
        CHECK(H.simple_hurwitz(0, make_partition({1, 1})) == Q(1, 2));
        CHECK(H.simple_hurwitz(0, make_partition({2, 1})) == Q(4));
        CHECK(H.simple_hurwitz(1, make_partition({3})) == Q(9));
        CHECK(H.simple_hurwitz(1, make_partition({1, 1})) == Q(1, 2));
    }

    SECTION("disconnected counts decompose over connected pieces") {
        // two exchanged sheets with two simple branch points: the
        // disconnected count includes the pair of identity covers
        CHECK(H.disconnected(2, make_partition({1, 1})) == Q(1, 2));
        CHECK(H.connected(2, make_partition({1, 1})) == Q(1, 2));
        CHECK(H.disconnected(0, make_partition({1, 1})) == Q(1, 2));
        CHECK(H.connected(0, make_partition({1, 1})) == Q(0));
    }

    SECTION("invalid partitions are rejected") {
        CHECK_THROWS(make_partition({0}));
        CHECK_THROWS(make_partition({3, -1}));
        CHECK_THROWS(H.simple_hurwitz(0, Partition{}));
    }
}

TEST_CASE("tau table string and dilaton closure") {
    Engine eng(shipped("airy.json"));
    ExpansionReport i03 = intersection_numbers(eng, 0, 3);
    ExpansionReport i11 = intersection_numbers(eng, 1, 1);
    TauTable tau(i03.at({0, 0, 0}), i11.at({1}));

    CHECK(tau.value(0, {0, 0, 0, 1}) == Q(1));
    CHECK(tau.value(1, {1, 1}) == Q(1, 24));
    CHECK(tau.value(1, {0, 2}) == Q(1, 24));
    CHECK(tau.value(0, {0, 0, 0, 0, 2}) == Q(1));
    CHECK(tau.value(1, {0, 1, 2}) == Q(1, 12));

    // off the dimension shell everything vanishes
    CHECK(tau.value(1, {5, 5}) == Q(0));
    // outside the closure: report, do not guess
    CHECK_THROWS_AS(tau.value(2, {4}), TauUnreachable);

    // the full stored window satisfies both equations identically
    for (auto [g, d] : std::vector<std::pair<long, std::vector<long>>>{
             {0, {0, 0, 1, 1}}, {0, {0, 0, 0, 2}}, {1, {0, 0, 3}}, {1, {1, 1, 1}}}) {
        // string
        std::vector<long> with0 = d;
        with0.insert(with0.begin(), 0);
        Rational lhs = tau.value(g, with0);
        Rational rhs(0);
        for (std::size_t j = 0; j < d.size(); ++j) {
            if (d[j] == 0) continue;
            std::vector<long> dec = d;
            dec[j] -= 1;
            rhs += tau.value(g, dec);
        }
        CHECK(lhs == rhs);
        // dilaton
        std::vector<long> with1 = d;
        with1.insert(with1.begin(), 1);
        CHECK(tau.value(g, with1) ==
              Q(2 * g - 2 + static_cast<long>(d.size())) * tau.value(g, d));
    }
}

TEST_CASE("omega_2^(1) direct double residue equals the recursion") {
    for (const char* name : {"airy.json", "gaussian.json", "lambert.json"}) {
        Engine eng(shipped(name));
        CorrelatorTensor direct = omega21_direct(eng);
        CHECK(direct == eng.omega(1, 2));
        // z1 <-> z2 symmetry is also asserted inside omega21_direct; spot
        // check one coefficient pair here
        if (std::string(name) == "airy.json") {
            CHECK(direct.coeff({{0, 2}, {0, 6}}) == direct.coeff({{0, 6}, {0, 2}}));
        }
    }
}
