#include <catch2/catch_amalgamated.hpp>

#include "support/oracles.hpp"

using namespace qconv;

TEST_CASE("sampling the catalog shapes") {
    Grid g = Grid::make1(0.0, 1.0, 0.5);
    GridFunction f = sample(parse_expression("exp(x)", 1), g);
    CHECK(f.value(0) == 1.0);
    CHECK(f.value(1) == std::exp(0.5));
    CHECK(f.value(2) == std::exp(1.0));

    Grid g2 = Grid::make1(-2.0, 2.0, 1.0);
    GridFunction k = sample(parse_expression("abs(abs(x)-1)", 1), g2);
    CHECK(k.values() == std::vector<double>{1.0, 0.0, 1.0, 0.0, 1.0});

    Grid g3 = Grid::make1(-1.0, 1.0, 1.0);
    GridFunction p = sample(parse_expression("-pow(abs(x),3/2)", 1), g3);
    CHECK(p.values() == std::vector<double>{-1.0, 0.0, -1.0});
}

TEST_CASE("grammar coverage") {
    ExprPtr e = parse_expression("min(x*x,(x-2)*(x-2)-1)", 1);
    CHECK(e->eval(vec1(0.0)) == 0.0);
    CHECK(e->eval(vec1(2.0)) == -1.0);

    ExprPtr m = parse_expression("max(1, -x) + 2*x - 1e1", 1);
    CHECK(m->eval(vec1(3.0)) == 1.0 + 6.0 - 10.0);

    ExprPtr ws = parse_expression("  - pow( abs( x ) , 3 / 2 )\t", 1);
    CHECK(ws->eval(vec1(4.0)) == -8.0);

    ExprPtr two = parse_expression("x1*x1 + x2", 2);
    CHECK(two->eval(vec2(3.0, -1.0)) == 8.0);

    ExprPtr saddle = parse_expression("x*y", {"x", "y"});
    CHECK(saddle->eval(vec2(3.0, -2.0)) == -6.0);

    // pow applies the exponent to |base|
    CHECK(parse_expression("pow(x,3)", 1)->eval(vec1(-2.0)) == 8.0);
}

TEST_CASE("parse errors carry 1-based columns") {
    try {
        parse_expression("exp(", 1);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.column == 4);
    }
    try {
        parse_expression("foo(x)", 1);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.column == 1);
    }
    try {
        parse_expression("x + sin(x)", 1);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.column == 5);
    }
    CHECK_THROWS_AS(parse_expression("x1", 1), ParseError);
    CHECK_THROWS_AS(parse_expression("x/2", 1), ParseError);       // non-constant division
    CHECK_THROWS_AS(parse_expression("1/0", 1), ParseError);
    CHECK_THROWS_AS(parse_expression("pow(x, x)", 1), ParseError);
    CHECK_THROWS_AS(parse_expression("x + ", 1), ParseError);
    CHECK_THROWS_AS(parse_expression("(x", 1), ParseError);
    CHECK_THROWS_AS(parse_expression("x 2", 1), ParseError);
    CHECK_NOTHROW(parse_expression("3/2 * x", 1));
}

TEST_CASE("evaluation is deterministic") {
    Grid g = Grid::make1(-3.0, 3.0, 0.0625);
    ExprPtr e = parse_expression("min(exp(x), max(x*x, abs(x)-1)) - pow(abs(x), 3/2)", 1);
    GridFunction a = sample(e, g);
    GridFunction b = sample(parse_expression("min(exp(x), max(x*x, abs(x)-1)) - pow(abs(x), 3/2)", 1), g);
    CHECK(a.values() == b.values());
}

TEST_CASE("catalog names") {
    const auto& cat = expression_catalog();
    REQUIRE(cat.count("paper.example1.f") == 1);
    REQUIRE(cat.count("paper.example1.g") == 1);
    REQUIRE(cat.count("paper.kink") == 1);
    REQUIRE(cat.count("paper.pow32") == 1);
    CHECK(parse_expression(cat.at("paper.example1.g"), 1)->eval(vec1(0.0)) == 4.0);
}
