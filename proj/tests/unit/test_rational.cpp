#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "segcoal/rational.hpp"

using segcoal::checked_pow;
using segcoal::Rational;

TEST_CASE("rationals are kept in lowest terms with a positive denominator") {
    Rational r(6, -4);
    CHECK(r.num() == -3);
    CHECK(r.den() == 2);
    CHECK(r.to_string() == "-3/2");
    CHECK(Rational(4, 2).to_string() == "2");
    CHECK(Rational(0, 7) == Rational(0));
    CHECK_THROWS_AS(Rational(1, 0), std::domain_error);
}

TEST_CASE("field operations") {
    const Rational a(1, 3), b(1, 6);
    CHECK(a + b == Rational(1, 2));
    CHECK(a - b == Rational(1, 6));
    CHECK(a * b == Rational(1, 18));
    CHECK(a / b == Rational(2));
    CHECK(a > b);
    CHECK(Rational(-1, 2) < Rational(1, 3));
    CHECK_THROWS_AS(a / Rational(0), std::domain_error);
    Rational sum;
    for (int i = 0; i < 8; ++i) sum += Rational(1, 8);
    CHECK(sum == Rational(1));
}

TEST_CASE("dyadic masses add up exactly at depth 100") {
    Rational total;
    Rational piece(1);
    for (int n = 1; n <= 100; ++n) {
        piece = piece * Rational(1, 2);
        total += piece;
    }
    CHECK(total + piece == Rational(1));
}

TEST_CASE("overflow is reported, not wrapped") {
    CHECK(checked_pow(2, 100) == (Rational::Int{1} << 100));
    CHECK(checked_pow(3, 0) == 1);
    CHECK_THROWS_AS(checked_pow(2, 127), std::overflow_error);
    const Rational huge(checked_pow(2, 120));
    CHECK_THROWS_AS(huge * huge, std::overflow_error);
}

TEST_CASE("conversion to double") {
    CHECK(Rational(1, 3).to_double() == doctest::Approx(1.0 / 3.0).epsilon(1e-16));
    CHECK(Rational(1, checked_pow(2, 110)).to_double() == std::ldexp(1.0, -110));
    CHECK(segcoal::int128_to_string(-checked_pow(10, 30)) == "-1000000000000000000000000000000");
}
