#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "oracles.hpp"
#include "segcoal/gwve.hpp"

using namespace segcoal;

namespace {

std::vector<double> survival(const GwveSpec& spec, int n) {
    std::vector<double> p;
    for (int k = 0; k <= n; ++k) p.push_back(std::exp(-spec.t * spec.rates.rate(k)));
    return p;
}

std::vector<RateFamily> small_families() {
    return {RateFamily::constant(1),      RateFamily::constant(0.3), RateFamily::geometric(2, 0.5),
            RateFamily::harmonic(1.5),    RateFamily::linear(0.4),   RateFamily::table({0.1, 2.0, 0.05, 0.7}),
            RateFamily::zero()};
}

}  // namespace

TEST_CASE("pgf extinction matches the exhaustive dynamic program") {
    for (int s : {2, 3}) {
        for (const auto& rates : small_families()) {
            for (double t : {0.05, 0.4, 1.0, 2.5}) {
                const GwveSpec spec{Alphabet(s), rates, t};
                for (int n = 0; n <= 4; ++n) {
                    CAPTURE(s);
                    CAPTURE(rates.describe());
                    CAPTURE(t);
                    CAPTURE(n);
                    const auto law = oracle::branching_law(s, survival(spec, n), n);
                    CHECK(std::abs(extinct_prob_by(spec, n) - law[0]) <= 1e-12);
                    double mean = 0.0;
                    for (std::size_t b = 0; b < law.size(); ++b) mean += static_cast<double>(b) * law[b];
                    CHECK(mean == doctest::Approx(mean_b(spec, n)).epsilon(1e-12));
                }
            }
        }
    }
}

TEST_CASE("the dynamic program agrees with brute-force enumeration") {
    const GwveSpec a{Alphabet(2), RateFamily::geometric(1, 0.5), 0.7};
    for (int n = 0; n <= 3; ++n) {
        const auto p = survival(a, n);
        CHECK(oracle::extinction_brute_force(2, p, n) == doctest::Approx(oracle::branching_law(2, p, n)[0]).epsilon(1e-13));
    }
    const GwveSpec b{Alphabet(3), RateFamily::constant(0.5), 0.9};
    for (int n = 0; n <= 2; ++n) {
        const auto p = survival(b, n);
        CHECK(oracle::extinction_brute_force(3, p, n) == doctest::Approx(oracle::branching_law(3, p, n)[0]).epsilon(1e-13));
    }
}

TEST_CASE("limit extinction matches the fixed point for constant rates") {
    for (int s : {2, 3, 4}) {
        const double c = 1.0;
        const double t0 = std::log(static_cast<double>(s)) / c;
        for (double frac : {0.3, 0.5, 0.8}) {
            const GwveSpec spec{Alphabet(s), RateFamily::constant(c), frac * t0};
            const double p = std::exp(-spec.t * c);
            const double q = oracle::constant_rate_fixed_point(s, p);
            const double expected = 1.0 - p + p * q;
            const auto lim = extinct_prob_limit(spec, 1e-12);
            CAPTURE(s);
            CAPTURE(frac);
            CHECK(lim.converged);
            CHECK(std::abs(lim.value - expected) < 1e-6);
        }
    }
    const GwveSpec half{Alphabet(2), RateFamily::constant(1), 0.5 * std::log(2.0)};
    const double p = std::exp(-half.t);
    const double closed = 1.0 - p + p * oracle::binary_fixed_point(p);
    CHECK(closed == doctest::Approx(std::sqrt(2.0) - 1.0).epsilon(1e-14));
    CHECK(std::abs(extinct_prob_limit(half, 1e-9).value - closed) < 1e-6);
}

TEST_CASE("above the critical time extinction is certain") {
    const GwveSpec spec{Alphabet(2), RateFamily::constant(1), 1.1 * std::log(2.0)};
    CHECK(extinct_prob_by(spec, 1000) > 1.0 - 1e-3);
    const auto lim = extinct_prob_limit(spec, 1e-9);
    CHECK(lim.value > 1.0 - 1e-6);
}

TEST_CASE("direct simulation reproduces the means and extinction probabilities") {
    const GwveSpec spec{Alphabet(3), RateFamily::harmonic(1), 0.6};
    const int reps = 10000, n_max = 10;
    std::vector<std::vector<double>> b(n_max + 1);
    std::vector<std::vector<double>> dead(n_max + 1);
    for (int i = 0; i < reps; ++i) {
        SplitMix64 rng(derive_key(17, static_cast<std::uint64_t>(i)));
        const auto traj = simulate(spec, n_max, rng);
        for (int n = 0; n <= n_max; ++n) {
            b[static_cast<std::size_t>(n)].push_back(static_cast<double>(traj[static_cast<std::size_t>(n)]));
            dead[static_cast<std::size_t>(n)].push_back(traj[static_cast<std::size_t>(n)] == 0 ? 1.0 : 0.0);
        }
    }
    for (int n = 1; n <= n_max; ++n) {
        CAPTURE(n);
        const auto mb = oracle::mean_se(b[static_cast<std::size_t>(n)]);
        CHECK(std::abs(mb.mean - mean_b(spec, n)) < 3 * mb.se);
        const auto md = oracle::mean_se(dead[static_cast<std::size_t>(n)]);
        CHECK(std::abs(md.mean - extinct_prob_by(spec, n)) < 3 * md.se);
    }
}

TEST_CASE("simulation guards against runaway populations") {
    const GwveSpec spec{Alphabet(2), RateFamily::zero(), 1.0};
    SplitMix64 rng(1);
    CHECK(simulate(spec, 40, rng).back() == (std::uint64_t{1} << 40));
    CHECK_THROWS_AS(simulate(spec, 70, rng), std::overflow_error);
}

TEST_CASE("the g numerator is accurate across scales") {
    for (double rt : {1e-6, 1e-3, 0.1, 0.5, 1.0, 3.0, 10.0, 40.0, 700.0}) {
        CAPTURE(rt);
        const double x = std::exp(-rt);
        // f(x) = x^2 for |S| = 2 and 3x^2 - x^3 for |S| = 3.
        CHECK(g_numerator_ratio(2, rt) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(g_numerator_ratio(3, rt) == doctest::Approx(3.0 - x).epsilon(1e-12));
        // |S| = 4: f(x)/x^2 = 6 - 4x + x^2.
        CHECK(g_numerator_ratio(4, rt) == doctest::Approx(6.0 - 4.0 * x + x * x).epsilon(1e-12));
        for (int s : {2, 5, 17}) {
            const double h = g_numerator_ratio(s, rt);
            CHECK(h >= (s - 1) * (1 - 1e-12));
            CHECK(h <= 0.5 * s * (s - 1) * (1 + 1e-12));
        }
    }
}

TEST_CASE("g terms at the critical time are constant for constant rates") {
    const GwveSpec spec{Alphabet(2), RateFamily::constant(1), std::log(2.0)};
    for (int n = 1; n <= 50; ++n) CHECK(g_term(spec, n) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(g_partial(spec, 40) == doctest::Approx(10.0).epsilon(1e-12));
    // |S| = 3, c = 2: x = 1/3, m_n = 1, term = (3 - x) x^2 / (3 x) = 8/27.
    const GwveSpec three{Alphabet(3), RateFamily::constant(2), std::log(3.0) / 2};
    CHECK(g_term(three, 7) == doctest::Approx(8.0 / 27.0).epsilon(1e-12));
}

TEST_CASE("degeneracy flips at the critical time for constant rates") {
    struct Case {
        int s;
        double c;
    };
    for (const auto& [s, c] : {Case{2, 1.0}, Case{3, 2.0}, Case{5, 0.5}}) {
        const double t0 = std::log(static_cast<double>(s)) / c;
        CAPTURE(s);
        const auto below = degeneracy_test(GwveSpec{Alphabet(s), RateFamily::constant(c), 0.9 * t0});
        CHECK(below.decided);
        CHECK_FALSE(below.degenerate);
        CHECK(below.inf_m == InfM::Positive);
        CHECK(below.g.kind == GVerdict::Kind::Finite);
        const auto above = degeneracy_test(GwveSpec{Alphabet(s), RateFamily::constant(c), 1.1 * t0});
        CHECK(above.degenerate);
        CHECK(above.inf_m == InfM::Zero);
        const auto at = degeneracy_test(GwveSpec{Alphabet(s), RateFamily::constant(c), t0});
        CHECK(at.degenerate);
        CHECK(at.method == "criterion");
        CHECK(at.inf_m == InfM::Positive);
        CHECK(at.g.kind == GVerdict::Kind::Diverges);
    }
}

TEST_CASE("finite g values bracket the true sum") {
    const GwveSpec spec{Alphabet(2), RateFamily::geometric(1, 0.5), 1.0};
    const auto r = degeneracy_test(spec, 200);
    REQUIRE(r.g.kind == GVerdict::Kind::Finite);
    const double longer = g_partial(spec, 400);
    CHECK(r.g.value <= longer);
    CHECK(longer <= r.g.value + r.g.error_bound);
    CHECK_FALSE(r.degenerate);
    CHECK(extinct_prob_limit(spec, 1e-10).value < 1.0 - 1e-3);

    const GwveSpec c{Alphabet(2), RateFamily::constant(1), 0.5};
    const auto rc = degeneracy_test(c);
    REQUIRE(rc.g.kind == GVerdict::Kind::Finite);
    CHECK(rc.g.value == doctest::Approx(g_partial(c, 2000)).epsilon(1e-10));
}

TEST_CASE("semicritical and supercritical families") {
    const auto harmonic = degeneracy_test(GwveSpec{Alphabet(2), RateFamily::harmonic(1), 3.0});
    CHECK(harmonic.inf_m == InfM::Positive);
    CHECK_FALSE(harmonic.degenerate);
    const auto linear = degeneracy_test(GwveSpec{Alphabet(2), RateFamily::linear(1), 0.01});
    CHECK(linear.degenerate);
    CHECK(linear.inf_m == InfM::Zero);
    CHECK(extinct_prob_by(GwveSpec{Alphabet(2), RateFamily::linear(1), 0.01}, 200) > 1.0 - 1e-9);
}

TEST_CASE("undecidable cases fall back to the extinction limit") {
    // Declared limsup 1 but the held table value is 2: at t = ln 2 the
    // criterion cannot decide inf m_n.
    const auto rates = RateFamily::parse("table:1,1,2;weighted=inf;sum=inf;limsup=1");
    const auto r = degeneracy_test(GwveSpec{Alphabet(2), rates, std::log(2.0)});
    CHECK(r.inf_m == InfM::Undecided);
    CHECK(r.method == "extinction-fallback");
    REQUIRE(r.fallback.has_value());
    CHECK(r.degenerate);
}

TEST_CASE("means") {
    const GwveSpec spec{Alphabet(2), RateFamily::constant(1), std::log(2.0)};
    CHECK(mean_b(spec, 0) == doctest::Approx(0.5));
    CHECK(mean_b(spec, 1) == doctest::Approx(0.5));
    CHECK(m(spec, 30) == doctest::Approx(1.0));
    const GwveSpec harm{Alphabet(3), RateFamily::harmonic(1), 2.0};
    double expected = 1.0;
    for (int j = 1; j <= 5; ++j) expected *= 3.0 * std::exp(-2.0 / j);
    CHECK(m(harm, 5) == doctest::Approx(expected).epsilon(1e-13));
    CHECK_THROWS_AS(log_m(spec, -1), std::out_of_range);
    CHECK_THROWS_AS(extinct_prob_by(GwveSpec{Alphabet(2), RateFamily::constant(1), 0.0}, 3), std::invalid_argument);
}
