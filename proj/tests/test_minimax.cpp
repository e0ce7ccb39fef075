#include <catch2/catch_amalgamated.hpp>

#include "support/oracles.hpp"

using namespace qconv;

namespace {

GridFunction sample1(const std::string& text, double lo, double hi, double h) {
    return sample(parse_expression(text, 1), Grid::make1(lo, hi, h));
}

SaddleGrid saddle_expr(const std::string& text, double lo, double hi, double h) {
    ExprPtr e = parse_expression(text, {"x", "y"});
    return SaddleGrid::sample(Grid::make1(lo, hi, h), lo, hi, h,
                              [&](const Vec& x, double y) { return e->eval(vec2(x[0], y)); });
}

}  // namespace

TEST_CASE("sublevel regions") {
    Region r1 = sublevel_region(QuadraticMinorant(1.0, vec1(0.0), 0.0), -1.0);
    REQUIRE(r1.kind == Region::Kind::BallExterior);
    CHECK(r1.center[0] == 0.0);
    CHECK(r1.radius2 == 1.0);
    CHECK(r1.contains(vec1(1.5)));
    CHECK_FALSE(r1.contains(vec1(0.5)));

    CHECK(sublevel_region(QuadraticMinorant(1.0, vec1(0.0), 0.0), 1.0).kind ==
          Region::Kind::WholeSpace);
    CHECK(sublevel_region(QuadraticMinorant(0.0, vec1(0.0), 0.0), 0.0).kind ==
          Region::Kind::Empty);
    Region h = sublevel_region(QuadraticMinorant(0.0, vec1(2.0), 1.0), 3.0);
    REQUIRE(h.kind == Region::Kind::OpenHalfspace);
    CHECK(h.bound == 2.0);
}

TEST_CASE("region membership equals direct evaluation") {
    oracle::Rng rng(42);
    long checked = 0;
    for (int rep = 0; rep < 10000; ++rep) {
        int dim = rep % 2 ? 2 : 1;
        QuadraticMinorant phi = oracle::random_minorant(rng, dim);
        double alpha = rng.uniform(-10.0, 10.0);
        Region r = sublevel_region(phi, alpha);
        for (int p = 0; p < 1000; ++p) {
            double radius = p % 5 == 4 ? rng.uniform(1e3, 1e6) : rng.uniform(0.0, 20.0);
            Vec x;
            x.dim = dim;
            for (int i = 0; i < dim; ++i) x[i] = rng.uniform(-1.0, 1.0) * radius;
            bool direct = phi.eval(x) < alpha;
            if (r.contains(x) != direct) {
                CHECK(r.contains(x) == direct);  // report only failures
            }
            ++checked;
        }
    }
    CHECK(checked == 10000L * 1000L);
}

TEST_CASE("intersection property worked examples") {
    QuadraticMinorant zero_fn(0.0, vec1(0.0), 0.0);
    QuadraticMinorant negsq(1.0, vec1(0.0), 0.0);
    CHECK(intersection_property(zero_fn, negsq, 0.0).empty);

    QuadraticMinorant right(0.0, vec1(1.0), 0.0), left(0.0, vec1(-1.0), 0.0);
    CHECK(intersection_property(right, left, 0.0).empty);
    CHECK_FALSE(intersection_property(right, left, 0.5).empty);

    IntersectionResult both = intersection_property(negsq, negsq, -1.0);
    REQUIRE_FALSE(both.empty);
    REQUIRE(both.witness.has_value());
    CHECK(std::abs((*both.witness)[0]) > 1.0);
    CHECK(negsq.eval(*both.witness) < -1.0);
}

TEST_CASE("intersection decision agrees with the brute-force oracle") {
    oracle::Rng rng(314159);
    for (int rep = 0; rep < 600; ++rep) {
        int dim = rep % 2 ? 2 : 1;
        QuadraticMinorant p1 = oracle::random_minorant(rng, dim);
        QuadraticMinorant p2 = oracle::random_minorant(rng, dim);
        double alpha = rng.uniform(-8.0, 8.0);
        IntersectionResult dec = intersection_property(p1, p2, alpha);
        if (dec.empty) {
            auto counter = oracle::intersection_counterexample(p1, p2, alpha);
            CHECK_FALSE(counter.has_value());
        } else {
            REQUIRE(dec.witness.has_value());
            CHECK(p1.eval(*dec.witness) < alpha);
            CHECK(p2.eval(*dec.witness) < alpha);
        }
        // symmetry
        CHECK(intersection_property(p2, p1, alpha).empty == dec.empty);
    }
}

TEST_CASE("constructed anti-parallel halfspaces stay exact in 2-d") {
    oracle::Rng rng(2718);
    for (int rep = 0; rep < 200; ++rep) {
        Vec v = vec2(rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0));
        if (norm(v) < 1e-3) continue;
        double mu = rng.uniform(0.1, 4.0);
        QuadraticMinorant p1(0.0, v, rng.uniform(-2.0, 2.0));
        QuadraticMinorant p2(0.0, -mu * v, rng.uniform(-2.0, 2.0));
        double lambda = mu / (1.0 + mu);
        // emptiness iff lambda b1 + (1-lambda) b2 <= 0 with b_i = alpha - c_i
        for (double alpha : {-1.0, 0.0, 1.0}) {
            double combo = lambda * (alpha - p1.c) + (1.0 - lambda) * (alpha - p2.c);
            IntersectionResult dec = intersection_property(p1, p2, alpha);
            if (std::abs(combo) > 1e-6) CHECK(dec.empty == (combo < 0.0));
        }
    }
}

TEST_CASE("zs_check basics") {
    GridFunction sq = sample1("x*x", -2.0, 2.0, 1.0 / 32);
    size_t zero = sq.grid().nearest_node(vec1(0.0));
    ZsResult r = zs_check(make_zs_instance(sq, sq, zero, zero, 0.0, 1e-12));
    CHECK(r.holds);
    CHECK(r.lambda == 1.0);

    // slices {+1} and {-1}: the symmetric mixed case
    GridFunction fx = sample1("x", -1.0, 1.0, 0.125);
    GridFunction fnx = sample1("-x", -1.0, 1.0, 0.125);
    size_t mid = fx.grid().nearest_node(vec1(0.0));
    ZsResult m = zs_check(make_zs_instance(fx, fnx, mid, mid, 0.0, 1e-12));
    CHECK(m.holds);
    CHECK(m.lambda == Catch::Approx(0.5));
    REQUIRE(m.w1.has_value());
    REQUIRE(m.w2.has_value());
    CHECK(m.w1->v[0] == 1.0);
    CHECK(m.w2->v[0] == -1.0);

    // the worked counterexample: e^x against -x^2+4 at eps = 0
    GridFunction f = sample1("exp(x)", -6.0, 2.0, 0.03125);
    GridFunction g = sample1("-x*x+4", -6.0, 2.0, 0.03125);
    int fails = 0;
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) {
            size_t x1 = f.grid().nearest_node(vec1(-6.0 + (i + 0.5)));
            size_t x2 = g.grid().nearest_node(vec1(-6.0 + (j + 0.5)));
            ZsResult rr = zs_check(make_zs_instance(f, g, x1, x2, 0.0, 1e-12));
            if (!rr.holds) ++fails;
        }
    CHECK(fails == 64);
}

TEST_CASE("zs_to_ip") {
    GridFunction sq = sample1("x*x", -2.0, 2.0, 1.0 / 32);
    size_t zero = sq.grid().nearest_node(vec1(0.0));
    ZsToIpResult r = zs_to_ip(sq, sq, zero, 0.0, 0.0, 1e-12);
    CHECK(r.phi1.a == 0.0);
    CHECK(r.phi1.v[0] == 0.0);
    CHECK(r.phi1.c == 0.0);  // alpha - eps

    GridFunction fx = sample1("x", -1.0, 1.0, 0.125);
    GridFunction fnx = sample1("-x", -1.0, 1.0, 0.125);
    size_t mid = fx.grid().nearest_node(vec1(0.0));
    ZsToIpResult m = zs_to_ip(fx, fnx, mid, 0.0, 0.0, 1e-12);
    CHECK(m.phi1.v[0] == 1.0);
    CHECK(m.phi2.v[0] == -1.0);
    CHECK(m.phi1.c == 0.0);

    GridFunction fp = sample1("x*x+x", -1.0, 1.0, 1.0 / 64);
    GridFunction fm = sample1("x*x-x", -1.0, 1.0, 1.0 / 64);
    size_t mid2 = fp.grid().nearest_node(vec1(0.0));
    ZsToIpResult q = zs_to_ip(fp, fm, mid2, 0.0, 0.0, 1e-12);
    CHECK(std::abs(q.phi1.v[0] - 1.0) <= 2.0 / 64);
    CHECK(std::abs(q.phi2.v[0] + 1.0) <= 2.0 / 64);

    // precondition: xbar must sit in both upper level sets
    CHECK_THROWS_AS(zs_to_ip(sq, sq, zero, 0.0, 1.0, 1e-12), std::invalid_argument);
}

TEST_CASE("ip_to_zs") {
    GridFunction f = sample1("exp(x)", -6.0, 2.0, 0.03125);
    GridFunction g = sample1("-x*x+4", -6.0, 2.0, 0.03125);
    QuadraticMinorant phi1(0.0, vec1(0.0), 0.0);
    QuadraticMinorant phi2(1.0, vec1(0.0), 0.0);
    for (double eps : {1e-1, 1e-2}) {
        IpToZsResult r = ip_to_zs(f, g, phi1, phi2, eps, 0.0, 1e-12);
        CHECK(r.zs.holds);
        CHECK(f.grid().node(r.instance.x1)[0] == -6.0);  // e^x - 0 smallest at the left edge
    }
    CHECK_THROWS_AS(ip_to_zs(f, g, phi1, phi2, 0.0, 0.0, 1e-12), std::invalid_argument);

    GridFunction sq = sample1("x*x", -2.0, 2.0, 1.0 / 32);
    QuadraticMinorant tangent(0.0, vec1(0.0), 0.0);
    IpToZsResult t = ip_to_zs(sq, sq, tangent, tangent, 0.01, 0.0, 1e-12);
    CHECK(t.zs.holds);
    CHECK(sq.grid().node(t.instance.x1)[0] == 0.0);

    GridFunction absf = sample1("abs(x)", -2.0, 2.0, 1.0 / 32);
    QuadraticMinorant pr(0.0, vec1(1.0), 0.0), pl(0.0, vec1(-1.0), 0.0);
    IpToZsResult m = ip_to_zs(absf, absf, pr, pl, 0.01, 0.0, 1e-12);
    CHECK(m.zs.holds);
    // x1/x2 minimize f - phi (the tie on |x| + x is a whole ray)
    Vec x1 = absf.grid().node(m.instance.x1);
    Vec x2 = absf.grid().node(m.instance.x2);
    CHECK(std::abs(x1[0]) - x1[0] <= 1e-12);
    CHECK(std::abs(x2[0]) + x2[0] <= 1e-12);
}

TEST_CASE("saddle values") {
    SaddleGrid xy = saddle_expr("x*y", -1.0, 1.0, 0.0625);
    SaddleValues sv = saddle_values(xy);
    CHECK(sv.supinf == 0.0);
    CHECK(sv.infsup == 0.0);
    CHECK(sv.gap == 0.0);
    CHECK(sv.concave_in_y);

    SaddleGrid xsq = saddle_expr("x*x", -1.0, 1.0, 0.0625);
    SaddleValues s2 = saddle_values(xsq);
    CHECK(s2.supinf == 0.0);
    CHECK(s2.infsup == 0.0);

    SaddleGrid mixed = saddle_expr("x*x + x*y - y*y", -2.0, 2.0, 0.0625);
    SaddleValues s3 = saddle_values(mixed);
    // closed-form inner optimizations: inf_x = -(5/4) y^2 (+ vertex snap),
    // sup_y = (5/4) x^2, so both outer values sit at 0
    CHECK(std::abs(s3.supinf) <= 1e-12);
    CHECK(std::abs(s3.infsup) <= 1e-12);
    CHECK(s3.gap <= 1e-12);
    CHECK(s3.concave_in_y);

    SaddleGrid notconc = saddle_expr("x*x + y*y", -1.0, 1.0, 0.25);
    CHECK_FALSE(saddle_values(notconc).concave_in_y);
}

TEST_CASE("weak duality on random saddles") {
    oracle::Rng rng(11);
    for (int rep = 0; rep < 200; ++rep) {
        Grid g = Grid::make1(-1.0, 1.0, 0.25);
        SaddleGrid s = SaddleGrid::sample(g, -1.0, 1.0, 0.25, [&](const Vec&, double) {
            return rng.uniform(-5.0, 5.0);
        });
        CHECK(saddle_values(s).gap >= 0.0);
    }
}

TEST_CASE("minimax certificates") {
    SaddleGrid xy = saddle_expr("x*y", -1.0, 1.0, 0.03125);
    MinimaxCertificate c1 = minimax_certificate(xy);
    REQUIRE(c1.verdict == MinimaxCertificate::Verdict::Certified);
    CHECK(c1.gap == 0.0);
    CHECK((c1.lambda == 1.0 || c1.lambda == 0.0 || c1.y1 * c1.y2 <= 0.0));

    SaddleGrid mixed = saddle_expr("x*x + x*y - y*y", -2.0, 2.0, 0.0625);
    MinimaxCertificate c2 = minimax_certificate(mixed);
    REQUIRE(c2.verdict == MinimaxCertificate::Verdict::Certified);
    CHECK(c2.gap <= 2.0 * 0.0625);

    SaddleGrid flat = saddle_expr("x*x", -1.0, 1.0, 0.0625);
    MinimaxCertificate c3 = minimax_certificate(flat);
    REQUIRE(c3.verdict == MinimaxCertificate::Verdict::Certified);
    CHECK(c3.lambda == 1.0);  // zero-subgradient branch at the minimum
    CHECK(c3.gap == 0.0);

    // phi-convex in x, concave in y, but a positive duality gap: the
    // level-set condition at beta = infsup must block certification
    SaddleGrid gapped = saddle_expr("-(x-y)*(x-y)", -2.0, 2.0, 0.125);
    SaddleValues gv = saddle_values(gapped);
    CHECK(gv.gap >= 4.0 - 1e-9);
    MinimaxCertificate c4 = minimax_certificate(gapped);
    CHECK(c4.verdict == MinimaxCertificate::Verdict::NotFound);

    // hypothesis rejections
    SaddleGrid notconc = saddle_expr("x*x + y*y", -1.0, 1.0, 0.25);
    CHECK_THROWS_AS(minimax_certificate(notconc), HypothesisError);
    Grid g = Grid::make1(-1.0, 1.0, 0.125);
    SaddleGrid spike = SaddleGrid::sample(g, -1.0, 1.0, 0.5, [](const Vec& x, double) {
        return x[0] == 0.0 ? 100.0 : 0.0;
    });
    CHECK_THROWS_AS(minimax_certificate(spike), HypothesisError);

    // EpsSweep mode on the clean instance
    CertificateSearchSpec sweep;
    sweep.mode = CertificateMode::EpsSweep;
    MinimaxCertificate c5 = minimax_certificate(xy, sweep);
    CHECK(c5.verdict == MinimaxCertificate::Verdict::Certified);
}

TEST_CASE("a saddle mixing the worked pair attains its values on the box") {
    // a(x,y) = (1-y) e^x + y (-x^2+4) on [-6,2] x [0,1]: on a compact box
    // both outer optima sit at the left edge (value e^-6), the equality
    // holds, and the boundary minimizer carries a zero subgradient
    ExprPtr e = parse_expression("(1-y)*exp(x) + y*(-x*x+4)", {"x", "y"});
    SaddleGrid a = SaddleGrid::sample(Grid::make1(-6.0, 2.0, 0.03125), 0.0, 1.0, 0.0625,
                                      [&](const Vec& x, double y) { return e->eval(vec2(x[0], y)); });
    SaddleValues sv = saddle_values(a);
    CHECK(sv.supinf == std::exp(-6.0));
    CHECK(sv.gap == 0.0);
    MinimaxCertificate exact = minimax_certificate(a);
    REQUIRE(exact.verdict == MinimaxCertificate::Verdict::Certified);
    CHECK(a.xgrid.node(exact.xbar)[0] == -6.0);
    CHECK(exact.lambda == 1.0);
    CHECK(exact.gap == 0.0);
}

TEST_CASE("sweep failure reports the relaxed necessity diagnostic") {
    SaddleGrid gapped = saddle_expr("-(x-y)*(x-y)", -2.0, 2.0, 0.125);
    CertificateSearchSpec sweep;
    sweep.mode = CertificateMode::EpsSweep;
    MinimaxCertificate c = minimax_certificate(gapped, sweep);
    CHECK(c.verdict == MinimaxCertificate::Verdict::NotFound);
    // on a grid the slice infima are attained, so the level-free ZS holds
    CHECK(c.relaxed_zs == MinimaxCertificate::RelaxedZs::Holds);
}

TEST_CASE("paraconvex-hypothesis certificates") {
    // concave-in-x slices are paraconvex; zero-subgradient branch certifies
    SaddleGrid conc = saddle_expr("-x*x", -1.0, 1.0, 0.0625);
    CertificateSearchSpec spec;
    spec.hypothesis = HypothesisKind::Paraconvex;
    MinimaxCertificate c = minimax_certificate(conc, spec);
    REQUIRE(c.verdict == MinimaxCertificate::Verdict::Certified);
    CHECK(c.lambda == 1.0);
    CHECK(c.gap <= 1e-12);
}

TEST_CASE("ip_search") {
    // y grid {-1, 1} keeps the constant branch out of reach
    Grid gx = Grid::make1(-1.0, 1.0, 0.0625);
    ExprPtr e = parse_expression("x*y", {"x", "y"});
    SaddleGrid xy = SaddleGrid::sample(gx, -1.0, 1.0, 2.0, [&](const Vec& x, double y) {
        return e->eval(vec2(x[0], y));
    });
    auto r = ip_search(xy, -0.1);
    REQUIRE(r.has_value());
    CHECK(r->y1 * r->y2 < 0.0);
    CHECK(r->phi1.a == 0.0);
    CHECK(std::abs(std::abs(r->phi1.v[0]) - 1.0) <= 1e-9);

    SaddleGrid xsq = saddle_expr("x*x", -1.0, 1.0, 0.0625);
    auto r2 = ip_search(xsq, -0.1);
    REQUIRE(r2.has_value());
    CHECK(r2->phi1.a == 0.0);
    CHECK(r2->phi1.c == -0.1);  // constant support element at the level

    CHECK_THROWS_AS(ip_search(xsq, 1.0), std::invalid_argument);

    // harness: certified instances admit support pairs at every swept level
    SaddleGrid mixed = saddle_expr("x*x + x*y - y*y", -2.0, 2.0, 0.125);
    MinimaxCertificate cert = minimax_certificate(mixed);
    REQUIRE(cert.verdict == MinimaxCertificate::Verdict::Certified);
    for (int k = 1; k <= 5; ++k)
        CHECK(ip_search(mixed, cert.infsup - 0.2 * k).has_value());
}
