#include <catch2/catch_amalgamated.hpp>

#include "support/oracles.hpp"

using namespace qconv;

TEST_CASE("eval_minorant") {
    CHECK(eval_minorant(QuadraticMinorant(0.0, vec1(0.0), 5.0), vec1(17.3)) == 5.0);
    CHECK(eval_minorant(QuadraticMinorant(1.0, vec1(0.0), 0.0), vec1(2.0)) == -4.0);
    CHECK(eval_minorant(QuadraticMinorant(1.0, vec1(2.0), 3.0), vec1(1.0)) == 4.0);
    CHECK(eval_minorant(QuadraticMinorant(1.0, vec2(1.0, -1.0), 0.0), vec2(1.0, 2.0)) ==
          -5.0 + (1.0 - 2.0));

    CHECK_THROWS_AS(eval_minorant(QuadraticMinorant(0.0, vec1(1.0), 0.0), vec2(1.0, 2.0)),
                    std::invalid_argument);
    CHECK_THROWS_AS(QuadraticMinorant(-0.5, vec1(0.0), 0.0), std::invalid_argument);
}

TEST_CASE("grid construction") {
    Grid g = Grid::make1(0.0, 1.0, 0.5);
    REQUIRE(g.axis(0).count == 3);
    CHECK(g.node(0)[0] == 0.0);
    CHECK(g.node(1)[0] == 0.5);
    CHECK(g.node(2)[0] == 1.0);

    Grid g5 = Grid::make1(-2.0, 2.0, 1.0);
    CHECK(g5.axis(0).count == 5);

    CHECK_THROWS_AS(Grid::make1(0.0, 1.0, 0.6), std::invalid_argument);  // 2 nodes only
    CHECK_THROWS_AS(Grid::make1(1.0, 0.0, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(Grid::make1(0.0, 1.0, -0.1), std::invalid_argument);

    Grid g2 = Grid::make2(-1.0, 1.0, 0.5, 0.0, 2.0, 1.0);
    CHECK(g2.size() == 5u * 3u);
    Vec p = g2.node(g2.flat(1, 2));
    CHECK(p[0] == -0.5);
    CHECK(p[1] == 2.0);
}

TEST_CASE("grid function invariants") {
    Grid g = Grid::make1(-1.0, 1.0, 0.5);
    CHECK_THROWS_AS(GridFunction(g, {0.0, 0.0, -kInf, 0.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(GridFunction(g, {kInf, kInf, kInf, kInf, kInf}), std::invalid_argument);
    CHECK_THROWS_AS(GridFunction(g, {0.0, 0.0, std::nan(""), 0.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(GridFunction(g, {0.0, 0.0}), std::invalid_argument);

    GridFunction spike(g, {kInf, kInf, 1.0, kInf, kInf});
    CHECK(spike.finite_min() == 1.0);
}

TEST_CASE("interpolation") {
    Grid g = Grid::make1(0.0, 2.0, 0.5);
    GridFunction f = GridFunction::sample(g, [](const Vec& p) { return p[0] * p[0]; });
    CHECK(*f.try_interp(vec1(0.5)) == 0.25);
    CHECK(*f.try_interp(vec1(0.75)) == Catch::Approx(0.5 * (0.25 + 1.0)));
    CHECK(!f.try_interp(vec1(2.5)).has_value());

    GridFunction s(g, {0.0, kInf, 0.0, 0.0, 0.0});
    CHECK(*s.try_interp(vec1(0.25)) == kInf);
    CHECK(*s.try_interp(vec1(0.0)) == 0.0);  // zero weight on the infinite corner
}

TEST_CASE("is_support on the worked pair") {
    Grid g = Grid::make1(-3.0, 3.0, 0.125);
    GridFunction f = GridFunction::sample(g, [](const Vec& p) { return std::exp(p[0]); });
    CHECK(is_support(QuadraticMinorant(0.0, vec1(0.0), 0.0), f));
    CHECK_FALSE(is_support(QuadraticMinorant(0.0, vec1(0.0), 1.0), f));  // fails at x=-3

    GridFunction q = GridFunction::sample(g, [](const Vec& p) { return -p[0] * p[0] + 4.0; });
    CHECK(is_support(QuadraticMinorant(1.0, vec1(0.0), 0.0), q));
    CHECK(is_support(QuadraticMinorant(1.0, vec1(0.0), 4.0), q));   // attains q everywhere
    CHECK_FALSE(is_support(QuadraticMinorant(1.0, vec1(0.0), 4.1), q));
}

TEST_CASE("is_support monotonicity and convex combinations") {
    oracle::Rng rng(20260809);
    Grid g = Grid::make1(-2.0, 2.0, 0.25);
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<double> fv(g.size()), lift(g.size());
        for (size_t i = 0; i < g.size(); ++i) {
            fv[i] = rng.uniform(-3.0, 3.0);
            lift[i] = fv[i] + rng.uniform(0.0, 2.0);
        }
        GridFunction f(g, fv), fl(g, lift);
        QuadraticMinorant phi = oracle::random_minorant(rng, 1);
        // drop the offset until phi supports f
        double shift = 0.0;
        for (size_t i = 0; i < g.size(); ++i)
            shift = std::max(shift, phi.eval(g.node(i)) - f.value(i));
        QuadraticMinorant phi_ok(phi.a, phi.v, phi.c - shift);
        REQUIRE(is_support(phi_ok, f, 1e-12));
        CHECK(is_support(phi_ok, fl, 1e-12));

        QuadraticMinorant psi = oracle::random_minorant(rng, 1);
        double shift2 = 0.0;
        for (size_t i = 0; i < g.size(); ++i)
            shift2 = std::max(shift2, psi.eval(g.node(i)) - f.value(i));
        QuadraticMinorant psi_ok(psi.a, psi.v, psi.c - shift2);
        double lam = rng.uniform(0.0, 1.0);
        QuadraticMinorant combo(lam * phi_ok.a + (1 - lam) * psi_ok.a,
                                lam * phi_ok.v + (1 - lam) * psi_ok.v,
                                lam * phi_ok.c + (1 - lam) * psi_ok.c);
        CHECK(is_support(combo, f, 1e-9));
    }
}

TEST_CASE("witness construction guards") {
    CHECK_THROWS_AS(SubgradientWitness(-1.0, vec1(0.0)), std::invalid_argument);
    CHECK_THROWS_AS(SubgradientWitness(0.0, vec1(0.0), -0.1), std::invalid_argument);
    CHECK_THROWS_AS(SubgradientWitness(0.0, vec1(0.0), 0.0, WitnessScope::Local, 0.0),
                    std::invalid_argument);
}
