#include <catch_amalgamated.hpp>

#include "mixotype/model_file.hpp"

#include <cstdio>
#include <fstream>

using namespace mixotype;
using Catch::Approx;

TEST_CASE("model file with a named model and settings", "[model_file]") {
    const ModelFile mf = parse_model_file(
        "# circle experiment\n"
        "model = boussinesq:c=3\n"
        "bounds = -1, 4, -2, 2   # u then v\n"
        "tol = 1e-8\n"
        "grid = 256\n"
        "step = 0.01\n"
        "probe = 1/100\n");
    CHECK(mf.system.tag() == "boussinesq:c=3");
    REQUIRE(mf.bounds.has_value());
    CHECK(mf.bounds->u_min == -1.0);
    CHECK(mf.bounds->v_max == 2.0);
    CHECK(*mf.tol == 1e-8);
    CHECK(*mf.grid == 256);
    CHECK(*mf.step == 0.01);
    CHECK(*mf.probe == Approx(0.01));
}

TEST_CASE("model file with a density or a matrix", "[model_file]") {
    const ModelFile h = parse_model_file("h = v^2/2 + u^3/6\n");
    CHECK(h.system.provenance() == Provenance::hamiltonian);
    CHECK(h.system.entries({0.5, 0.0}).c == Approx(0.5));
    CHECK_FALSE(h.bounds.has_value());

    const ModelFile m = parse_model_file("A = u\nB = 1\nC = v\nD = u\n");
    CHECK(m.system.provenance() == Provenance::raw_matrix);
    CHECK(discriminant(m.system, {0.0, 2.0}) == Approx(8.0));
}

TEST_CASE("model file errors", "[model_file]") {
    CHECK_THROWS_AS(parse_model_file(""), ParseError);
    CHECK_THROWS_AS(parse_model_file("A = u\nB = 1\n"), ParseError);
    CHECK_THROWS_AS(parse_model_file("model = dnls\nh = v^2\n"), ParseError);
    CHECK_THROWS_AS(parse_model_file("model = dnls\nmodel = boussinesq\n"), ParseError);
    CHECK_THROWS_AS(parse_model_file("model = dnls\ncolour = red\n"), ParseError);
    CHECK_THROWS_AS(parse_model_file("model = dnls\njust text\n"), ParseError);
    CHECK_THROWS_AS(parse_model_file("model = dnls\nbounds = 1, 0, 0, 1\n"), ParseError);
    CHECK_THROWS_AS(parse_model_file("model = dnls\nbounds = 0, 1, 0\n"), ParseError);
    CHECK_THROWS_AS(parse_model_file("model = dnls\ngrid = 32\n"), ParseError);
    CHECK_THROWS_AS(parse_model_file("model = dnls\ngrid = 100.5\n"), ParseError);
    CHECK_THROWS_AS(parse_model_file("model = dnls\ntol = u\n"), ParseError);
    CHECK_THROWS_AS(parse_model_file("h = v^\n"), ParseError);
    CHECK_THROWS_AS(load_model_file("/nonexistent/model.txt"), ParseError);
    // The offset points at the offending line.
    try {
        parse_model_file("model = dnls\nfoo = 1\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.offset() == 13);
    }
}

TEST_CASE("points and bounds", "[model_file]") {
    const Point p = parse_point("0.5, -1/4");
    CHECK(p.u == 0.5);
    CHECK(p.v == -0.25);
    CHECK_THROWS_AS(parse_point("1"), ParseError);
    CHECK_THROWS_AS(parse_point("1,2,3"), ParseError);
    CHECK(parse_bounds("-1,1,-2,2").v_min == -2.0);
}

TEST_CASE("model file round trip through disk", "[model_file]") {
    const std::string path = "mixotype_test_model.txt";
    std::ofstream(path) << "model = dnls\nbounds = -2,2,-1,3\n";
    const ModelFile mf = load_model_file(path);
    std::remove(path.c_str());
    CHECK(mf.system.tag() == "dnls");
    CHECK(mf.bounds->v_max == 3.0);
}
