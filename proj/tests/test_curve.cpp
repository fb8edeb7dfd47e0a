#include <catch2/catch_amalgamated.hpp>

#include "trec/curve.hpp"
#include "trec/curvedoc.hpp"

using namespace trec;

namespace {
Rational Q(long n, long d = 1) { return Rational(n, d); }
std::string curve_path(const char* name) {
    return std::string(TREC_CURVES_DIR) + "/" + name;
}
} // namespace

TEST_CASE("loading the shipped curves") {
    CurveDocument airy = load_curve_file(curve_path("airy.json"));
    CHECK(airy.curve.label() == "airy");
    REQUIRE(airy.curve.x());
    CHECK(*airy.curve.x() == RationalFunction(Polynomial{Q(0), Q(0), Q(1)}));
    CHECK(airy.curve.branch_points() == std::vector<Rational>{Q(0)});

    CurveDocument gauss = load_curve_file(curve_path("gaussian.json"));
    REQUIRE(gauss.curve.x());
    CHECK(*gauss.curve.x() ==
          RationalFunction(Polynomial{Q(1), Q(0), Q(1)}, Polynomial{Q(0), Q(1)}));
    CHECK(gauss.curve.branch_points() == std::vector<Rational>{Q(-1), Q(1)});

    CurveDocument lambert = load_curve_file(curve_path("lambert.json"));
    CHECK_FALSE(lambert.curve.x());
    CHECK(lambert.curve.branch_points() == std::vector<Rational>{Q(0)});
    REQUIRE(lambert.weights.size() == 1);
    CHECK(lambert.weights[0].location == Q(1));
}

TEST_CASE("document validation failures") {
    // derivative mismatch between x and dx
    nlohmann::json bad = {
        {"label", "bad"},
        {"y", {{"num", {0, 1}}}},
        {"dx", {{"num", {0, 2}}}},
        {"x", {{"num", {0, 1}}}},
    };
    CHECK_THROWS_AS(parse_curve_document(bad), CurveError);

    // zero dx
    nlohmann::json zero = {{"label", "z"},
                           {"y", {{"num", {0, 1}}}},
                           {"dx", {{"num", nlohmann::json::array()}}}};
    CHECK_THROWS_AS(parse_curve_document(zero), CurveError);

    // malformed coefficients
    nlohmann::json mal = {{"label", "m"}, {"y", {{"num", {0.5}}}}, {"dx", {{"num", {0, 2}}}}};
    CHECK_THROWS_AS(parse_curve_document(mal), CurveError);
}

TEST_CASE("branch point validation errors") {
    // dx = (z^2 - 2) dz: irrational zeros
    CHECK_THROWS_WITH(SpectralCurve("bad", RationalFunction(Polynomial{Q(0), Q(1)}),
                                    RationalFunction(Polynomial{Q(-2), Q(0), Q(1)})),
                      Catch::Matchers::ContainsSubstring("nonrational"));
    // dx = z^2 dz: double zero
    CHECK_THROWS_WITH(SpectralCurve("bad", RationalFunction(Polynomial{Q(0), Q(1)}),
                                    RationalFunction(Polynomial{Q(0), Q(0), Q(1)})),
                      Catch::Matchers::ContainsSubstring("not simple"));
    // y with a pole at the branch point
    CHECK_THROWS_WITH(SpectralCurve("bad",
                                    RationalFunction(Polynomial{Q(1)}, Polynomial{Q(0), Q(1)}),
                                    RationalFunction(Polynomial{Q(0), Q(2)})),
                      Catch::Matchers::ContainsSubstring("pole"));
    // dy vanishing at the branch point (y = z^2)
    CHECK_THROWS_WITH(SpectralCurve("bad", RationalFunction(Polynomial{Q(0), Q(0), Q(1)}),
                                    RationalFunction(Polynomial{Q(0), Q(2)})),
                      Catch::Matchers::ContainsSubstring("dy vanishes"));
}

TEST_CASE("local involutions of the shipped curves") {
    SpectralCurve airy = load_curve_file(curve_path("airy.json")).curve;
    QSeries s_airy = local_involution(airy, Q(0), 12);
    CHECK(agree(s_airy, QSeries::monomial(Q(-1), 1)));

    // Gaussian at a=1: the global involution z -> 1/z gives sigma = 1/(1+s) - 1.
    SpectralCurve gauss = load_curve_file(curve_path("gaussian.json")).curve;
    QSeries s_gauss = local_involution(gauss, Q(1), 10);
    for (long e = 1; e < 10; ++e) CHECK(s_gauss.coeff(e) == (e % 2 ? Q(-1) : Q(1)));

    // Lambert at a=0: sigma = -s - (2/3)s^2 - (4/9)s^3 - ...
    SpectralCurve lambert = load_curve_file(curve_path("lambert.json")).curve;
    QSeries s_lam = local_involution(lambert, Q(0), 8);
    CHECK(s_lam.coeff(1) == Q(-1));
    CHECK(s_lam.coeff(2) == Q(-2, 3));
    CHECK(s_lam.coeff(3) == Q(-4, 9));
}

TEST_CASE("airy frame in closed form") {
    SpectralCurve airy = load_curve_file(curve_path("airy.json")).curve;
    BranchFrame f = build_frame(airy, Q(0), 10);
    CHECK(agree(f.X, QSeries::monomial(Q(1), 2)));
    CHECK(agree(f.dY, QSeries::monomial(Q(2), 1)));
    // Phi = int y rho = int 2 s^2 ds = (2/3) s^3
    CHECK(agree(f.Phi, QSeries::monomial(Q(2, 3), 3)));
}

TEST_CASE("gaussian frame at a=1") {
    SpectralCurve gauss = load_curve_file(curve_path("gaussian.json")).curve;
    BranchFrame f = build_frame(gauss, Q(1), 10);
    // X = x(1+s) - 2 = s^2/(1+s)
    CHECK(f.X.valuation() == 2);
    CHECK(f.X.coeff(2) == Q(1));
    CHECK(f.X.coeff(3) == Q(-1));
    CHECK(f.X.coeff(4) == Q(1));
    // sigma = 1/(1+s) - 1, so y(1+sigma) = 1+s exactly and
    // dY = 1/(1+s) - (1+s) = -2s + s^2 - s^3 + ...
    CHECK(f.dY.coeff(1) == Q(-2));
    CHECK(f.dY.coeff(2) == Q(1));
    CHECK(f.dY.coeff(3) == Q(-1));
}

TEST_CASE("frame invariants hold on every shipped curve") {
    for (const char* name : {"airy.json", "gaussian.json", "lambert.json"}) {
        SpectralCurve c = load_curve_file(curve_path(name)).curve;
        for (const auto& a : c.branch_points()) {
            BranchFrame f = build_frame(c, a, 14);
            QSeries id = QSeries::monomial(Q(1), 1);
            CHECK(agree(QSeries::compose(f.sigma, f.sigma), id));
            CHECK(agree(QSeries::compose(f.X, f.sigma), f.X));
            CHECK(agree(QSeries::compose(f.dY, f.sigma), -f.dY));
            CHECK(f.X.valuation() == 2);
            CHECK(f.dY.valuation() == 1);
            CHECK(f.Phi.valuation() >= 2);
            CHECK(f.sigma.coeff(1) == Q(-1));

            // rebuilding at order+10 agrees on the overlap
            BranchFrame g = build_frame(c, a, 24);
            CHECK(agree(f.sigma, g.sigma));
            CHECK(agree(f.dY, g.dY));
            CHECK(agree(f.Phi, g.Phi));
        }
    }
}
