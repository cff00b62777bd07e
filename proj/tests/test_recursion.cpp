// The ratio map F, its restriction f to {v = 1}, orbit iteration, and the
// reduction to the classical SOS system at theta1 = 1.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include <sostree/lattice.hpp>
#include <sostree/recursion.hpp>

using namespace sostree;

namespace {

double log_uniform(std::mt19937_64& rng, double lo, double hi) {
    std::uniform_real_distribution<double> d(std::log(lo), std::log(hi));
    return std::exp(d(rng));
}

} // namespace

TEST_CASE("at unit weights the map is constant (1,1)") {
    const ThetaParams p(1, 1);
    for (double u : {0.01, 0.5, 1.0, 7.0, 300.0})
        for (double v : {0.2, 1.0, 42.0}) {
            const RootRatios y = step_F(RootRatios(u, v), p);
            CHECK(std::abs(y.u - 1.0) <= 1e-15);
            CHECK(std::abs(y.v - 1.0) <= 1e-15);
        }
}

TEST_CASE("the slice v = 1 is invariant") {
    // identical six positive terms appear in numerator and denominator, so the
    // two sums may differ only by summation order
    for (int i = 0; i < 20; ++i)
        for (int j = 0; j < 20; ++j)
            for (int k = 0; k < 10; ++k) {
                const double t = std::pow(10.0, -2.0 + 4.0 * i / 19);
                const double t1 = std::pow(10.0, -2.0 + 4.0 * j / 19);
                const double u = std::pow(10.0, -3.0 + 6.0 * k / 9);
                const RootRatios y = step_F(RootRatios(u, 1.0), ThetaParams(t, t1));
                CHECK(std::abs(y.v - 1.0) <= 1e-14);
            }
}

TEST_CASE("f matches the u-component of F on the slice") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 2000; ++trial) {
        const ThetaParams p(log_uniform(rng, 1e-2, 1e2), log_uniform(rng, 1e-2, 1e2));
        const double u = log_uniform(rng, 1e-3, 1e3);
        const double via_f = f_on_I(u, p);
        const double via_F = step_F(RootRatios(u, 1.0), p).u;
        CHECK(std::abs(via_f - via_F) <= 1e-14 * via_f);
    }
}

TEST_CASE("f at unit weights is identically one") {
    for (double u : {1e-6, 0.3, 1.0, 5.0, 1e6}) CHECK(f_on_I(u, ThetaParams(1, 1)) == 1.0);
}

TEST_CASE("f at the worked example") {
    // (1 + 0.4 + 0.1) / (0.04 + 0.208 + 1.0216)
    const double f = f_on_I(1.0, ThetaParams(0.2, 0.5));
    CHECK(f == Catch::Approx(1.5 / 1.2696).epsilon(1e-13));
}

TEST_CASE("f is bounded: limits at 0 and infinity") {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 200; ++trial) {
        const double t = log_uniform(rng, 0.05, 20), t1 = log_uniform(rng, 0.05, 20);
        const ThetaParams p(t, t1);
        const double f0 = 2 * t * t * (t1 * t1 + 1) / (t * t * t * t + 2 * t * t * t1 * t1 + 1);
        CHECK(f_on_I(1e-14, p) == Catch::Approx(f0).epsilon(1e-8));
        CHECK(f_on_I(1e14, p) == Catch::Approx(1.0 / (t * t)).epsilon(1e-8));
        // crude global bound
        for (double u : {1e-3, 0.1, 1.0, 10.0, 1e3}) {
            const double f = f_on_I(u, p);
            CHECK(f > 0.0);
            CHECK(f < f0 + 1.0 / (t * t) + 4 * t * t1);
        }
    }
}

TEST_CASE("reduction to the classical system at theta1 = 1") {
    SECTION("worked examples") {
        const auto r1 = classical_reduction_residual(1.0, 1.0, 2.0); // both sides 25/49
        CHECK(r1[0] <= 1e-15);
        CHECK(r1[1] <= 1e-15);
        const auto r2 = classical_reduction_residual(3.0, 0.5, 0.7);
        CHECK(r2[0] <= 1e-12);
        CHECK(r2[1] <= 1e-12);
        const auto r3 = classical_reduction_residual(0.4, 2.0, 1.0); // constant map
        CHECK(r3[0] <= 1e-15);
        CHECK(r3[1] <= 1e-15);
    }
    SECTION("random positive triples") {
        std::mt19937_64 rng(13);
        for (int trial = 0; trial < 10000; ++trial) {
            const double u = log_uniform(rng, 1e-3, 1e3);
            const double v = log_uniform(rng, 1e-3, 1e3);
            const double t = log_uniform(rng, 1e-3, 1e3);
            const auto r = classical_reduction_residual(u, v, t);
            REQUIRE(r[0] <= 1e-12);
            REQUIRE(r[1] <= 1e-12);
        }
    }
}

TEST_CASE("orbit from (5,3) at unit weights converges in one step") {
    const Orbit o = iterate_orbit(RootRatios(5, 3), ThetaParams(1, 1));
    REQUIRE(o.status == OrbitStatus::converged);
    CHECK(o.iterations == 1);
    REQUIRE(o.states.size() == 2);
    CHECK(o.states[0].second.u == 5.0);
    CHECK(std::abs(o.limit.u - 1.0) <= 1e-15);
    CHECK(std::abs(o.limit.v - 1.0) <= 1e-15);
}

TEST_CASE("orbit from inside the slice stays and converges to the large root") {
    const Orbit o = iterate_orbit(RootRatios(1, 1), ThetaParams(0.2, 0.5));
    REQUIRE(o.status == OrbitStatus::converged);
    CHECK(std::abs(o.limit.v - 1.0) <= 1e-10);
    CHECK(o.limit.u == Catch::Approx(18.98854544580087).epsilon(1e-10));
}

TEST_CASE("orbit states remain positive off the slice") {
    const Orbit o = iterate_orbit(RootRatios(4.0, 0.01), ThetaParams(0.3, 1.7), 1000);
    for (const auto& [step, s] : o.states) {
        CHECK(s.u > 0.0);
        CHECK(s.v > 0.0);
    }
}

TEST_CASE("orbit reports max_iterations when the cap is too small") {
    const Orbit o = iterate_orbit(RootRatios(5, 3), ThetaParams(0.2, 0.5), 3);
    CHECK(o.status == OrbitStatus::max_iterations);
    CHECK(o.iterations == 3);
    CHECK(o.states.size() == 4);
}

TEST_CASE("orbit history is decimated with a trailing window") {
    // force a long run: tolerance far below reachable precision
    const Orbit o = iterate_orbit(RootRatios(5, 3), ThetaParams(0.2, 0.5), 300, 1e-300);
    REQUIRE(o.status == OrbitStatus::max_iterations);
    REQUIRE(o.states.size() == 67); // steps 0,100,200 plus the last 64
    CHECK(o.states.front().first == 0);
    CHECK(o.states.back().first == 300);
    for (std::size_t i = 0; i + 1 < o.states.size(); ++i)
        CHECK(o.states[i].first < o.states[i + 1].first);
}

TEST_CASE("cycle detector recognizes a period-2 return") {
    std::deque<RootRatios> recent{RootRatios(2, 1), RootRatios(5, 1), RootRatios(2, 1),
                                  RootRatios(5, 1)};
    CHECK(detail::detect_cycle_period(recent, RootRatios(2, 1), 1e-9) == 2);
    CHECK(detail::detect_cycle_period(recent, RootRatios(2.5, 1), 1e-9) == 0);
    std::deque<RootRatios> r3{RootRatios(1, 1), RootRatios(2, 1), RootRatios(3, 1)};
    CHECK(detail::detect_cycle_period(r3, RootRatios(1, 1), 1e-9) == 3);
}

TEST_CASE("extreme weights overflow loudly") {
    CHECK_THROWS_AS(step_F(RootRatios(1, 1), ThetaParams(1e200, 1.0)), std::overflow_error);
}

TEST_CASE("orbit propagates invalid arguments") {
    CHECK_THROWS_AS(iterate_orbit(RootRatios(1, 1), ThetaParams(1, 1), 0), std::invalid_argument);
    CHECK_THROWS_AS(iterate_orbit(RootRatios(1, 1), ThetaParams(1, 1), 10, 0.0),
                    std::invalid_argument);
}
