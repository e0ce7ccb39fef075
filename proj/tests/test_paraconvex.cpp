#include <catch2/catch_amalgamated.hpp>

#include "support/oracles.hpp"

using namespace qconv;

namespace {

GridFunction sample1(const std::string& text, double lo, double hi, double h) {
    return sample(parse_expression(text, 1), Grid::make1(lo, hi, h));
}

}  // namespace

TEST_CASE("paraconvexity constants") {
    GridFunction neg = sample1("-x*x", -1.0, 1.0, 1.0 / 64);
    ParaconvexityReport r = paraconvexity_constant(neg, 1e-6);
    REQUIRE(r.finite);
    CHECK(std::abs(r.constant - 1.0) <= 1e-3);

    GridFunction ex = sample1("exp(x)", -1.0, 1.0, 1.0 / 64);
    ParaconvexityReport re = paraconvexity_constant(ex, 1e-6);
    REQUIRE(re.finite);
    CHECK(re.constant == 0.0);

    GridFunction p32 = sample1("-pow(abs(x),3/2)", -1.0, 1.0, 1.0 / 1024);
    ParaconvexityReport rp = paraconvexity_constant(p32, 1e-6);
    CHECK_FALSE(rp.finite);
    REQUIRE(rp.required_c_by_resolution.size() == 3);
    // required c scales like 1/sqrt(h): ratio sqrt(2) per halving
    double c4 = rp.required_c_by_resolution[0];
    double c2 = rp.required_c_by_resolution[1];
    double c1 = rp.required_c_by_resolution[2];
    CHECK(c2 / c4 >= 1.3);
    CHECK(c1 / c2 >= 1.3);
    CHECK(c1 == Catch::Approx(std::sqrt(1024.0)).epsilon(1e-3));

    CHECK_THROWS_AS(paraconvexity_constant(neg, SubBox{{0, 0}, {1, 0}}, 1e-6),
                    std::invalid_argument);
}

TEST_CASE("paraconvexity constant on random paraconvex instances") {
    oracle::Rng rng(6001);
    for (int rep = 0; rep < 20; ++rep) {
        oracle::ParaconvexInstance inst = oracle::random_paraconvex(rng, rep % 2 ? 2 : 1);
        ParaconvexityReport r = paraconvexity_constant(inst.f, 1e-6);
        REQUIRE(r.finite);
        CHECK(r.constant <= inst.a + 1e-3);
    }
}

TEST_CASE("shrinking the region never increases the constant") {
    oracle::Rng rng(6002);
    for (int rep = 0; rep < 10; ++rep) {
        oracle::ParaconvexInstance inst = oracle::random_paraconvex(rng, 1);
        const Grid& g = inst.f.grid();
        SubBox whole = SubBox::whole(g);
        int m = g.axis(0).count;
        SubBox inner{{m / 4, 0}, {m - 1 - m / 4, 0}};
        double cw = paraconvexity_constant(inst.f, whole, 1e-8).constant;
        double ci = paraconvexity_constant(inst.f, inner, 1e-8).constant;
        CHECK(ci <= cw + 1e-6);
    }
}

TEST_CASE("gamma-paraconvexity checks") {
    GridFunction conv = sample1("x*x", -2.0, 2.0, 1.0 / 32);
    CHECK(check_gamma_paraconvex(conv, 2.0, 0.5).holds);
    CHECK(check_gamma_paraconvex(conv, 1.5, 0.25).holds);
    CHECK(check_strong_gamma_paraconvex(conv, 2.0, 0.5).holds);

    GridFunction neg = sample1("-x*x", -2.0, 2.0, 1.0 / 32);
    // gap is t(1-t)(x-y)^2, so C = 1 suffices
    CHECK(check_gamma_paraconvex(neg, 2.0, 1.0).holds);
    CHECK(check_strong_gamma_paraconvex(neg, 2.0, 1.0).holds);

    GammaCheckResult bad = check_strong_gamma_paraconvex(neg, 2.0, 0.4);
    CHECK_FALSE(bad.holds);
    CHECK(std::abs(bad.x[0] - bad.y[0]) == 4.0);  // widest pair
    // the midpoint triple violates by (1/4 - 0.4/2) d^2 ...
    CHECK(0.25 * 16.0 - 0.4 * 0.5 * 16.0 > 0.0);
    // ... and the worst t on the k/8 grid is the argmax of t(1-t) - 0.4 min(t,1-t)
    double worst = 0.0, worst_t = 0.0;
    for (int k = 0; k <= 8; ++k) {
        double t = k / 8.0;
        double viol = (t * (1.0 - t) - 0.4 * std::min(t, 1.0 - t)) * 16.0;
        if (viol > worst) {
            worst = viol;
            worst_t = t;
        }
    }
    CHECK(bad.worst_violation == Catch::Approx(worst).margin(1e-9));
    CHECK(std::min(bad.t, 1.0 - bad.t) == worst_t);

    GridFunction p32 = sample1("-pow(abs(x),3/2)", -2.0, 2.0, 1.0 / 128);
    GammaCheckResult cusp = check_gamma_paraconvex(p32, 2.0, 1.0);
    CHECK_FALSE(cusp.holds);
    CHECK(std::abs(cusp.x[0]) <= 0.1);  // violations live near the cusp
    CHECK(std::abs(cusp.y[0]) <= 0.1);

    CHECK_THROWS_AS(check_gamma_paraconvex(conv, 0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(check_gamma_paraconvex(conv, 2.0, 0.0), std::invalid_argument);
}

TEST_CASE("gamma monotonicity in C and strong implies plain") {
    oracle::Rng rng(6003);
    for (int rep = 0; rep < 12; ++rep) {
        Grid g = Grid::make1(-2.0, 2.0, 0.125);
        std::vector<double> vals(g.size());
        for (auto& v : vals) v = rng.uniform(-2.0, 2.0);
        GridFunction f(g, vals);
        double C = rng.uniform(0.1, 2.0);
        double gamma = rng.uniform(1.0, 2.5);
        GammaCheckResult plain = check_gamma_paraconvex(f, gamma, C);
        if (plain.holds)
            CHECK(check_gamma_paraconvex(f, gamma, C + rng.uniform(0.0, 3.0)).holds);
        GammaCheckResult strong = check_strong_gamma_paraconvex(f, gamma, C);
        if (strong.holds) CHECK(plain.holds);
    }
}

TEST_CASE("paraconvex_subgradient") {
    GridFunction neg = sample1("-x*x", -2.0, 2.0, 1.0 / 32);
    size_t half = neg.grid().nearest_node(vec1(0.5));
    SubgradientWitness w = paraconvex_subgradient(neg, 1.0, half);
    CHECK(w.verified());
    CHECK(w.a == 1.0);
    CHECK(std::abs(w.v[0]) <= 1e-9);  // f + |x|^2 is flat

    GridFunction absf = sample1("abs(x)", -2.0, 2.0, 1.0 / 32);
    size_t zero = absf.grid().nearest_node(vec1(0.0));
    SubgradientWitness w2 = paraconvex_subgradient(absf, 0.0, zero);
    CHECK(w2.verified());
    CHECK(w2.v[0] == 0.0);  // min-norm pick inside [-1,1]

    GridFunction mix = sample1("-x*x + abs(x)", -1.0, 1.0, 1.0 / 32);
    SubgradientWitness w3 = paraconvex_subgradient(mix, 1.0, mix.grid().nearest_node(vec1(0.0)));
    CHECK(w3.verified());
    CHECK(w3.a == 1.0);
    CHECK(w3.v[0] == 0.0);

    // c too small: the convexified function is still concave, no contact inside
    CHECK_THROWS_AS(paraconvex_subgradient(neg, 0.5, half), VerificationError);
}

TEST_CASE("equivalence loop between the constant and subgradients") {
    oracle::Rng rng(6004);
    for (int rep = 0; rep < 10; ++rep) {
        oracle::ParaconvexInstance inst = oracle::random_paraconvex(rng, 1);
        ParaconvexityReport r = paraconvexity_constant(inst.f, 1e-8);
        REQUIRE(r.finite);
        double c = r.constant + 1e-6;
        const Grid& g = inst.f.grid();
        for (int i = 1; i + 1 < g.axis(0).count; i += 7) {
            SubgradientWitness w = paraconvex_subgradient(inst.f, c, static_cast<size_t>(i));
            CHECK(w.verified());
        }
        // converse: a uniform witness curvature at every node of a sub-box
        // bounds the constant there
        int m = g.axis(0).count;
        SubBox inner{{m / 4, 0}, {m - 1 - m / 4, 0}};
        GridFunction fr = restrict_to(inst.f, inner);
        bool all_found = true;
        for (size_t i = 0; i < fr.size() && all_found; ++i)
            if (!find_eps_subgradient(fr, i, 0.0, CurvatureSchedule({0.0, inst.a + 1e-9}))
                     .has_value())
                all_found = false;
        if (all_found) {
            ParaconvexityReport rr = paraconvexity_constant(fr, 1e-8);
            REQUIRE(rr.finite);
            CHECK(rr.constant <= inst.a + 1e-3);
        }
    }
}
