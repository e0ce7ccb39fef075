// Randomized cross-module property suites with fixed seeds.

#include <catch2/catch_amalgamated.hpp>

#include "support/oracles.hpp"

using namespace qconv;

namespace {

// random convex grid function (hull of noise), 1-d
GridFunction random_convex(oracle::Rng& rng, const Grid& g) {
    std::vector<double> vals(g.size());
    for (auto& v : vals) v = rng.uniform(-4.0, 4.0);
    return convex_hull_grid(GridFunction(g, vals));
}

}  // namespace

TEST_CASE("ZS holds implies an intersection-property pair (randomized)") {
    oracle::Rng rng(505);
    Grid g = Grid::make1(-2.0, 2.0, 0.0625);
    int exercised_mixed = 0, exercised_zero = 0;
    for (int rep = 0; rep < 120; ++rep) {
        GridFunction f = random_convex(rng, g);
        GridFunction gg = random_convex(rng, g);
        size_t xbar = static_cast<size_t>(rng.uniform_int(1, static_cast<int>(g.size()) - 2));
        double eps = rng.uniform(0.0, 0.2);
        if (rep % 2 == 1) {
            // tilt so the slope slices at xbar sit on opposite sides of zero,
            // exercising the interior-lambda branch
            auto sf = support_slope_at(f, xbar, 0.0, 1e-12);
            auto sg = support_slope_at(gg, xbar, 0.0, 1e-12);
            REQUIRE((sf && sg));
            double tf = -(sf->lo) + rng.uniform(0.2, 1.0);
            double tg = -(sg->hi) - rng.uniform(0.2, 1.0);
            std::vector<double> fv(g.size()), gv(g.size());
            for (size_t i = 0; i < g.size(); ++i) {
                fv[i] = f.value(i) + tf * g.node(i)[0];
                gv[i] = gg.value(i) + tg * g.node(i)[0];
            }
            f = GridFunction(g, fv);
            gg = GridFunction(g, gv);
            eps = rng.uniform(0.0, 0.05);
        }
        ZsInstance inst = make_zs_instance(f, gg, xbar, xbar, eps, 1e-12);
        ZsResult zs = zs_check(inst);
        if (!zs.holds) continue;
        double alpha = std::min(f.value(xbar), gg.value(xbar));
        // zs_to_ip verifies support and emptiness internally and throws on
        // any inconsistency
        ZsToIpResult r = zs_to_ip(f, gg, xbar, eps, alpha, 1e-12);
        CHECK(intersection_property(r.phi1, r.phi2, alpha - eps).empty);
        if (zs.lambda == 0.0 || zs.lambda == 1.0)
            ++exercised_zero;
        else
            ++exercised_mixed;
    }
    CHECK(exercised_zero > 10);
    CHECK(exercised_mixed > 10);
}

TEST_CASE("intersection-property pairs convert to ZS (randomized)") {
    oracle::Rng rng(606);
    Grid g = Grid::make1(-2.0, 2.0, 0.0625);
    int constant_branch = 0, mixed_branch = 0;
    for (int rep = 0; rep < 120; ++rep) {
        QuadraticMinorant phi1(0.0, vec1(0.0), 0.0), phi2(0.0, vec1(0.0), 0.0);
        double alpha;
        if (rep % 2 == 0) {
            // anti-parallel halfspace pair, empty by construction
            double v = rng.uniform(0.2, 3.0) * (rng.uniform_int(0, 1) ? 1.0 : -1.0);
            double mu = rng.uniform(0.2, 3.0);
            phi1 = QuadraticMinorant(0.0, vec1(v), rng.uniform(-2.0, 2.0));
            phi2 = QuadraticMinorant(0.0, vec1(-mu * v), rng.uniform(-2.0, 2.0));
            double lambda = mu / (1.0 + mu);
            alpha = lambda * phi1.c + (1.0 - lambda) * phi2.c - rng.uniform(0.01, 1.0);
            ++mixed_branch;
        } else {
            // [phi1 < alpha] empty outright
            phi1 = QuadraticMinorant(0.0, vec1(0.0), rng.uniform(-1.0, 1.0));
            phi2 = QuadraticMinorant(rng.uniform(0.0, 2.0), vec1(rng.uniform(-1.0, 1.0)),
                                     rng.uniform(-1.0, 1.0));
            alpha = phi1.c - rng.uniform(0.01, 1.0);
            ++constant_branch;
        }
        REQUIRE(intersection_property(phi1, phi2, alpha).empty);
        // f, g: the minorants plus nonnegative bumps
        std::vector<double> fv(g.size()), gv(g.size());
        for (size_t i = 0; i < g.size(); ++i) {
            fv[i] = phi1.eval(g.node(i)) + rng.uniform(0.0, 2.0);
            gv[i] = phi2.eval(g.node(i)) + rng.uniform(0.0, 2.0);
        }
        GridFunction f(g, fv), gg(g, gv);
        double eps = rng.uniform(1e-3, 0.5);
        IpToZsResult r = ip_to_zs(f, gg, phi1, phi2, eps, alpha, 1e-12);
        CHECK(r.zs.holds);
    }
    CHECK(constant_branch > 0);
    CHECK(mixed_branch > 0);
}

TEST_CASE("certificates never cross a real duality gap (randomized)") {
    oracle::Rng rng(707);
    int certified = 0;
    for (int rep = 0; rep < 150; ++rep) {
        Grid g = Grid::make1(-2.0, 2.0, 0.125);
        // A(x) convex + y * b * x - kappa y^2: convex in x, concave in y
        GridFunction A = random_convex(rng, g);
        double b = rng.uniform(-2.0, 2.0);
        double kappa = rng.uniform(0.0, 2.0);
        SaddleGrid s = SaddleGrid::sample(g, -2.0, 2.0, 0.125, [&](const Vec& x, double y) {
            return A.value(g.nearest_node(x)) + y * b * x[0] - kappa * y * y;
        });
        SaddleValues sv = saddle_values(s);
        MinimaxCertificate cert = minimax_certificate(s);
        if (cert.verdict == MinimaxCertificate::Verdict::Certified) {
            ++certified;
            CHECK(cert.gap <= grid_tolerance(s.slice(0)) + 1e-9);
            CHECK(cert.gap == sv.gap);
        }
    }
    CHECK(certified > 30);

    // adversarial family with genuine gaps: phi-convex in x, concave in y
    int spurious = 0;
    for (int rep = 0; rep < 40; ++rep) {
        Grid g = Grid::make1(-2.0, 2.0, 0.125);
        double shift = rng.uniform(-1.0, 1.0);
        SaddleGrid s = SaddleGrid::sample(g, -2.0, 2.0, 0.125, [&](const Vec& x, double y) {
            double d = x[0] - y - shift;
            return -d * d;
        });
        SaddleValues sv = saddle_values(s);
        MinimaxCertificate cert = minimax_certificate(s);
        if (cert.verdict == MinimaxCertificate::Verdict::Certified && cert.gap > 0.1)
            ++spurious;
        CHECK(sv.gap >= 0.0);
    }
    CHECK(spurious == 0);
}

TEST_CASE("zs instances reject unverified witnesses") {
    Grid g = Grid::make1(-1.0, 1.0, 0.125);
    GridFunction f = GridFunction::sample(g, [](const Vec& p) { return p[0] * p[0]; });
    ZsInstance inst = make_zs_instance(f, f, 0, 0, 0.0, 1e-12);
    SubgradientWitness fake(0.0, vec1(100.0));
    fake.status = VerifyStatus::Refuted;
    inst.s1.push_back(fake);
    CHECK_THROWS_AS(zs_check(inst), std::invalid_argument);
}

TEST_CASE("globalization soundness on randomized instances (spot check)") {
    oracle::Rng rng(808);
    for (int rep = 0; rep < 40; ++rep) {
        int dim = rep % 2 ? 2 : 1;
        oracle::ParaconvexInstance inst = oracle::random_paraconvex(rng, dim);
        const Grid& g = inst.f.grid();
        size_t xb = static_cast<size_t>(rng.uniform_int(0, static_cast<int>(g.size()) - 1));
        auto slope = inst.hull.support_slope(xb);
        REQUIRE(slope.has_value());
        double delta = rng.uniform(3.0 * g.max_step(), 2.0);
        GlobalMinorantBound bound{inst.a, inst.min_convex};
        double tol = 1e-9 * (1.0 + inst.f.max_abs_finite());
        SubgradientWitness w = globalize(inst.f, xb, inst.a, *slope, delta, bound, tol);
        CHECK(w.verified());
        // conversion round trip preserves verification
        ProximalWitness pw = phi_to_proximal(w, g.node(xb));
        CHECK(proximal_margin(inst.f, xb, pw) >= -tol);
        SubgradientWitness back = proximal_to_phi(inst.f, xb, pw, bound, tol);
        CHECK(back.verified());
    }
}
