#include "gpftk/poly_parse.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace gpftk;
using poly::IntPoly;
using poly::parse_poly;

TEST_CASE("expression parsing") {
    CHECK(parse_poly("x^2+1") == IntPoly{1, 0, 1});
    CHECK(parse_poly("t^2 + 1") == IntPoly{1, 0, 1});
    CHECK(parse_poly("5") == IntPoly{5});
    CHECK(parse_poly("-5") == IntPoly{-5});
    CHECK(parse_poly("x") == IntPoly{0, 1});
    CHECK(parse_poly("2*x") == IntPoly{0, 2});
    CHECK(parse_poly("2+3*x^2") == IntPoly{2, 0, 3});
    CHECK(parse_poly("(x+1)^2") == IntPoly{1, 2, 1});
    CHECK(parse_poly("-x^2") == IntPoly{0, 0, -1});
    CHECK(parse_poly("x^2*x") == IntPoly{0, 0, 0, 1});
    CHECK(parse_poly("-16*(4*t^3+27)") == IntPoly{-432, 0, 0, -64});
    CHECK(parse_poly("x - x") == IntPoly{});
    CHECK(parse_poly("(x-1)*(x+1)") == IntPoly{-1, 0, 1});
    CHECK(parse_poly("x^0") == IntPoly{1});
    CHECK(parse_poly("123456789012345678901234567890") ==
          IntPoly{Int("123456789012345678901234567890")});
}

TEST_CASE("coefficient list parsing") {
    CHECK(parse_poly("1,0,1") == IntPoly{1, 0, 1});
    CHECK(parse_poly("16, 0, 12") == IntPoly{16, 0, 12});
    CHECK(parse_poly("-4,0,1") == IntPoly{-4, 0, 1});
    CHECK(parse_poly("0,0") == IntPoly{});
    CHECK_THROWS_AS(parse_poly("5,"), usage_error);
}

TEST_CASE("parse errors") {
    CHECK_THROWS_AS(parse_poly(""), usage_error);
    CHECK_THROWS_AS(parse_poly("x+y"), usage_error);
    CHECK_THROWS_AS(parse_poly("x^"), usage_error);
    CHECK_THROWS_AS(parse_poly("x^x"), usage_error);
    CHECK_THROWS_AS(parse_poly("x^9999"), usage_error);
    CHECK_THROWS_AS(parse_poly("(x+1"), usage_error);
    CHECK_THROWS_AS(parse_poly("x++"), usage_error);
    CHECK_THROWS_AS(parse_poly("1,,2"), usage_error);
    CHECK_THROWS_AS(parse_poly("?"), usage_error);
    CHECK_THROWS_AS(parse_poly("2x"), usage_error);  // no implicit multiplication
}
