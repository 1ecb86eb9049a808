#include <doctest.h>

#include <cstdint>
#include <limits>

#include "capdim/rational.hpp"

using capdim::Rational;
using capdim::RationalOverflow;

TEST_SUITE("rational") {
TEST_CASE("normalization keeps den positive and reduced") {
    const Rational r(6, -8);
    CHECK(r.num() == -3);
    CHECK(r.den() == 4);
    CHECK(Rational(0, -5) == Rational(0));
    CHECK(Rational(0, -5).den() == 1);
}

TEST_CASE("arithmetic is exact") {
    CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
    CHECK(Rational(1, 3) - Rational(1, 2) == Rational(-1, 6));
    CHECK(Rational(2, 3) * Rational(9, 4) == Rational(3, 2));
    CHECK(Rational(2, 3) / Rational(-4, 9) == Rational(-3, 2));
    CHECK(-Rational(1, 2) == Rational(-1, 2));
}

TEST_CASE("ordering") {
    CHECK(Rational(1, 3) < Rational(1, 2));
    CHECK(Rational(-1, 2) < Rational(-1, 3));
    CHECK(Rational(2, 4) == Rational(1, 2));
    CHECK(capdim::max(Rational(1, 3), Rational(1, 4)) == Rational(1, 3));
    CHECK(capdim::abs(Rational(-7, 3)) == Rational(7, 3));
}

TEST_CASE("floor and ceil round toward the correct side") {
    CHECK(Rational(7, 2).floor() == 3);
    CHECK(Rational(-7, 2).floor() == -4);
    CHECK(Rational(7, 2).ceil() == 4);
    CHECK(Rational(-7, 2).ceil() == -3);
    CHECK(Rational(4).floor() == 4);
}

TEST_CASE("parse accepts fractions, integers and terminating decimals") {
    CHECK(Rational::parse("3/4") == Rational(3, 4));
    CHECK(Rational::parse("-6/8") == Rational(-3, 4));
    CHECK(Rational::parse("12") == Rational(12));
    CHECK(Rational::parse("0.125") == Rational(1, 8));
    CHECK(Rational::parse("-1.5e-2") == Rational(-3, 200));
    CHECK(Rational::parse("2.5E1") == Rational(25));
    CHECK_THROWS(Rational::parse("1/0"));
    CHECK_THROWS(Rational::parse("abc"));
    CHECK_THROWS(Rational::parse("1.5.2"));
    CHECK_THROWS(Rational::parse("1e999"));
}

TEST_CASE("str round-trips through parse") {
    for (const Rational r : {Rational(0), Rational(5), Rational(-3, 7), Rational(1, 16)}) {
        CHECK(Rational::parse(r.str()) == r);
    }
}

TEST_CASE("overflow throws instead of wrapping") {
    const Rational big(std::numeric_limits<std::int64_t>::max());
    CHECK_THROWS_AS(big + Rational(1), RationalOverflow);
    CHECK_THROWS_AS(big * Rational(2), RationalOverflow);
    CHECK_NOTHROW(big * Rational(1, 2));
}

TEST_CASE("Eigen matrices of rationals") {
    capdim::RationalMatrix m(2, 2);
    m << Rational(1, 2), Rational(1, 3), Rational(1, 4), Rational(1, 5);
    CHECK(m.sum() == Rational(77, 60));
    const capdim::RationalMatrix sq = m * m;
    CHECK(sq(0, 0) == Rational(1, 4) + Rational(1, 12));
}
}
