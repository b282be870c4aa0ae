#include <doctest.h>

#include <cmath>

#include "oracles.hpp"

// The reference implementations are checked against hand-computable cases
// before anything is checked against them.

TEST_CASE("binomial pmf") {
    const auto pmf = oracle::binomial_pmf(3, 0.5);
    REQUIRE(pmf.size() == 4);
    CHECK(pmf[0] == 0.125);
    CHECK(pmf[1] == 0.375);
    CHECK(pmf[3] == 0.125);
}

TEST_CASE("branching law of one generation") {
    // Root survives w.p. 1/2; two children each w.p. 1/4.
    const auto law = oracle::branching_law(2, {0.5, 0.25}, 1);
    REQUIRE(law.size() == 3);
    CHECK(law[0] == doctest::Approx(0.5 + 0.5 * 0.5625));
    CHECK(law[1] == doctest::Approx(0.5 * 0.375));
    CHECK(law[2] == doctest::Approx(0.5 * 0.0625));
}

TEST_CASE("brute force on a two-level binary tree") {
    // P[no level-1 survivor] = 1 - p0 + p0 (1 - p1)^2.
    const double p0 = 0.7, p1 = 0.4;
    CHECK(oracle::extinction_brute_force(2, {p0, p1}, 1) == doctest::Approx(1 - p0 + p0 * 0.36));
    CHECK(oracle::extinction_brute_force(2, {p0}, 0) == doctest::Approx(1 - p0));
}

TEST_CASE("fixed points") {
    CHECK(oracle::constant_rate_fixed_point(2, 0.4) == 1.0);
    const double p = std::pow(2.0, -0.5);
    CHECK(oracle::constant_rate_fixed_point(2, p) == doctest::Approx(oracle::binary_fixed_point(p)).epsilon(1e-12));
    // q = (1 - p + p q)^2 at p = 3/4: q = 1/9.
    CHECK(oracle::binary_fixed_point(0.75) == doctest::Approx(1.0 / 9.0));
}

TEST_CASE("forward replay") {
    using segcoal::Event;
    using segcoal::Word;
    const std::vector<Event> events{{0.5, Word{1}, Word{1, 2}}, {0.2, Word{}, Word{1, 1}}, {0.7, Word{2}, Word{2, 2}}};
    CHECK(oracle::forward_flow(events, Word{2, 1}, 0.0, 1.0) == Word{1, 2});
    CHECK(oracle::forward_flow(events, Word{2, 1}, 0.2, 1.0) == Word{2, 2});
    CHECK(oracle::forward_flow(events, Word{2, 1}, 0.0, 0.4) == Word{1, 1});
    CHECK(oracle::all_points(3, 2).size() == 9);
}
