// Fixed points on the invariant slice: cubic coefficients, root isolation,
// stability, the transition diagnosis, and the 2-D fixed-point search.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include <sostree/phase.hpp>
#include <sostree/recursion.hpp>

using namespace sostree;

namespace {

// references computed once by 40-digit bisection on the fixed-point cubic
constexpr double kRootLow = 0.2241885677428300;
constexpr double kRootMid = 0.5872659864563009;
constexpr double kRootHigh = 18.98854544580087;
constexpr double kFprimeMid = 1.2308706766483521;

double log_uniform(std::mt19937_64& rng, double lo, double hi) {
    std::uniform_real_distribution<double> d(std::log(lo), std::log(hi));
    return std::exp(d(rng));
}

} // namespace

TEST_CASE("cubic coefficients from the fixed-point equation") {
    SECTION("unit weights") {
        const CubicCoefficients c = cubic_coefficients(ThetaParams(1, 1));
        CHECK(c.c3 == 1.0);
        CHECK(c.c2 == 3.0);
        CHECK(c.c1 == 0.0);
        CHECK(c.c0 == -4.0);
        // u = 1 is the unique fixed point there, so it must be a root
        CHECK(c.evaluate(1.0) == 0.0);
    }
    SECTION("worked example") {
        const CubicCoefficients c = cubic_coefficients(ThetaParams(0.2, 0.5));
        CHECK(c.c3 == Catch::Approx(0.04).epsilon(1e-14));
        CHECK(c.c2 == Catch::Approx(-0.792).epsilon(1e-14));
        CHECK(c.c1 == Catch::Approx(0.6216).epsilon(1e-14));
        CHECK(c.c0 == Catch::Approx(-0.1).epsilon(1e-14));
    }
    SECTION("sign structure holds everywhere") {
        std::mt19937_64 rng(21);
        for (int trial = 0; trial < 1000; ++trial) {
            const CubicCoefficients c = cubic_coefficients(
                ThetaParams(log_uniform(rng, 1e-3, 1e3), log_uniform(rng, 1e-3, 1e3)));
            CHECK(c.c3 > 0.0);
            CHECK(c.c0 < 0.0);
        }
    }
    SECTION("cubic equals (f(u) - u) times the denominator of f") {
        std::mt19937_64 rng(22);
        for (int trial = 0; trial < 500; ++trial) {
            const ThetaParams p(log_uniform(rng, 0.1, 10), log_uniform(rng, 0.1, 10));
            const CubicCoefficients c = cubic_coefficients(p);
            const double u = log_uniform(rng, 1e-2, 1e2);
            const double t2 = p.theta * p.theta;
            const double den = t2 * u * u + 2 * p.theta * p.theta1 * (t2 + 1) * u +
                               (t2 * t2 + 2 * t2 * p.theta1 * p.theta1 + 1);
            const double lhs = c.evaluate(u);
            const double rhs = (u - f_on_I(u, p)) * den;
            CHECK(std::abs(lhs - rhs) <= 1e-12 * (std::abs(lhs) + std::abs(rhs) + 1.0));
        }
    }
}

TEST_CASE("positive roots of the fixed-point cubic") {
    SECTION("unit weights give the single root 1") {
        const auto roots = positive_real_roots(cubic_coefficients(ThetaParams(1, 1)));
        REQUIRE(roots.size() == 1);
        CHECK(roots[0] == Catch::Approx(1.0).epsilon(1e-13));
    }
    SECTION("the worked example gives three roots with the right product") {
        const auto roots = positive_real_roots(cubic_coefficients(ThetaParams(0.2, 0.5)));
        REQUIRE(roots.size() == 3);
        CHECK(roots[0] == Catch::Approx(kRootLow).epsilon(1e-10));
        CHECK(roots[1] == Catch::Approx(kRootMid).epsilon(1e-10));
        CHECK(roots[2] == Catch::Approx(kRootHigh).epsilon(1e-10));
        CHECK(roots[0] * roots[1] * roots[2] == Catch::Approx(2.5).epsilon(1e-9));
    }
    SECTION("root sets are invariant under coefficient scaling") {
        const CubicCoefficients c = cubic_coefficients(ThetaParams(0.2, 0.5));
        const CubicCoefficients scaled{7 * c.c3, 7 * c.c2, 7 * c.c1, 7 * c.c0};
        const auto r1 = positive_real_roots(c);
        const auto r2 = positive_real_roots(scaled);
        REQUIRE(r1.size() == r2.size());
        for (std::size_t i = 0; i < r1.size(); ++i)
            CHECK(r1[i] == Catch::Approx(r2[i]).epsilon(1e-12));
    }
    SECTION("count trichotomy and residuals over random parameters") {
        std::mt19937_64 rng(23);
        for (int trial = 0; trial < 2000; ++trial) {
            const CubicCoefficients c = cubic_coefficients(
                ThetaParams(log_uniform(rng, 1e-2, 1e2), log_uniform(rng, 1e-2, 1e2)));
            const auto roots = positive_real_roots(c);
            REQUIRE(roots.size() >= 1);
            REQUIRE(roots.size() <= 3);
            for (double r : roots) {
                CHECK(r > 0.0);
                CHECK(std::abs(c.evaluate(r)) <= 1e-12 * c.scale());
            }
        }
    }
    SECTION("vieta identities whenever three roots appear") {
        int three_count = 0;
        for (int i = 0; i < 25; ++i)
            for (int j = 0; j < 25; ++j) {
                const double t = std::pow(10.0, -2.0 + 4.0 * i / 24);
                const double t1 = std::pow(10.0, -2.0 + 4.0 * j / 24);
                const CubicCoefficients c = cubic_coefficients(ThetaParams(t, t1));
                const auto roots = positive_real_roots(c);
                if (roots.size() != 3) continue;
                ++three_count;
                const double sum = roots[0] + roots[1] + roots[2];
                const double prod = roots[0] * roots[1] * roots[2];
                CHECK(sum == Catch::Approx(-c.c2 / c.c3).epsilon(1e-8));
                CHECK(prod == Catch::Approx(-c.c0 / c.c3).epsilon(1e-8));
                CHECK(prod == Catch::Approx(2 * (t1 * t1 + 1)).epsilon(1e-8));
            }
        CHECK(three_count > 0);
    }
    SECTION("double roots are collapsed and flagged when tight") {
        // (u - 1)^2 (u - 2): tangency at 1, simple root at 2
        const CubicCoefficients tangent{1.0, -4.0, 5.0, -2.0};
        bool flag = false;
        const auto roots = positive_real_roots(tangent, 1e-13, &flag);
        REQUIRE(roots.size() == 2);
        CHECK(roots[0] == Catch::Approx(1.0).margin(1e-6));
        CHECK(roots[1] == Catch::Approx(2.0).epsilon(1e-10));

        // two distinct roots 1e-7 apart raise the near-tangency flag
        const double a = 1.0, b = 1.0 + 1e-7;
        const CubicCoefficients close{1.0, -(a + b + 3.0), a * b + 3.0 * (a + b), -3.0 * a * b};
        flag = false;
        const auto roots2 = positive_real_roots(close, 1e-13, &flag);
        CHECK(roots2.size() == 3);
        CHECK(flag);
    }
    SECTION("degenerate leading coefficient is rejected") {
        CHECK_THROWS_AS(positive_real_roots(CubicCoefficients{0.0, 1.0, 1.0, -1.0}),
                        std::invalid_argument);
    }
}

TEST_CASE("derivative of f") {
    SECTION("vanishes identically at unit weights") {
        for (double u : {0.1, 1.0, 17.0}) CHECK(f_prime(u, ThetaParams(1, 1)) == 0.0);
    }
    SECTION("matches central finite differences") {
        std::mt19937_64 rng(24);
        for (int trial = 0; trial < 1000; ++trial) {
            const ThetaParams p(log_uniform(rng, 0.05, 20), log_uniform(rng, 0.05, 20));
            const double u = log_uniform(rng, 1e-2, 1e2);
            const double h = 1e-6 * std::max(1.0, u);
            const double fd = (f_on_I(u + h, p) - f_on_I(u - h, p)) / (2 * h);
            CHECK(f_prime(u, p) == Catch::Approx(fd).margin(1e-6));
        }
    }
    SECTION("exceeds one at the middle root of the worked example") {
        CHECK(f_prime(kRootMid, ThetaParams(0.2, 0.5)) ==
              Catch::Approx(kFprimeMid).epsilon(1e-12));
        CHECK(f_prime(kRootMid, ThetaParams(0.2, 0.5)) > 1.0);
    }
}

TEST_CASE("phase diagnosis") {
    SECTION("unit weights: unique measure, no transition") {
        const PhaseDiagnosis d = diagnose_phase(ThetaParams(1, 1));
        REQUIRE(d.fixed_points.size() == 1);
        CHECK_FALSE(d.transition);
        CHECK_FALSE(d.criterion_witness.has_value());
        CHECK(d.fixed_points[0].u == Catch::Approx(1.0).epsilon(1e-12));
    }
    SECTION("the worked example shows the transition") {
        const PhaseDiagnosis d = diagnose_phase(ThetaParams(0.2, 0.5));
        REQUIRE(d.fixed_points.size() == 3);
        CHECK(d.transition);
        CHECK(d.canonical_pattern);
        CHECK(d.fixed_points[0].stability == Stability::stable);
        CHECK(d.fixed_points[1].stability == Stability::unstable);
        CHECK(d.fixed_points[2].stability == Stability::stable);
        REQUIRE(d.criterion_witness.has_value());
        CHECK(*d.criterion_witness == Catch::Approx(kRootMid).epsilon(1e-10));
    }
}

TEST_CASE("2-D fixed-point search") {
    SECTION("unit weights: only (1,1)") {
        const auto pts = fixed_points_2d(ThetaParams(1, 1), 6);
        REQUIRE(pts.size() == 1);
        CHECK(pts[0].u == Catch::Approx(1.0).margin(1e-11));
        CHECK(pts[0].v == Catch::Approx(1.0).margin(1e-11));
    }
    SECTION("the worked example recovers all three on-slice roots") {
        const ThetaParams p(0.2, 0.5);
        const auto pts = fixed_points_2d(p, 10);
        const double expected[3] = {kRootLow, kRootMid, kRootHigh};
        int matched = 0;
        for (const auto& x : pts) {
            CHECK(x.u > 0.0);
            CHECK(x.v > 0.0);
            const RootRatios fx = step_F(x, p);
            CHECK(std::max(std::abs(fx.u - x.u), std::abs(fx.v - x.v)) <= 1e-10);
            if (std::abs(x.v - 1.0) <= 1e-9)
                for (double e : expected)
                    if (std::abs(x.u - e) <= 1e-8 * std::max(1.0, e)) ++matched;
        }
        CHECK(matched == 3);
    }
    SECTION("grid density below two is rejected") {
        CHECK_THROWS_AS(fixed_points_2d(ThetaParams(1, 1), 1), std::invalid_argument);
    }
}

TEST_CASE("statics and dynamics agree at the worked example") {
    const ThetaParams p(0.2, 0.5);
    const PhaseDiagnosis d = diagnose_phase(p);
    REQUIRE(d.fixed_points.size() == 3);
    const double r1 = d.fixed_points[0].u, r2 = d.fixed_points[1].u, r3 = d.fixed_points[2].u;

    SECTION("stable roots attract nearby orbits on the slice") {
        for (double target : {r1, r3})
            for (double eps : {-1e-3, 1e-3}) {
                const Orbit o =
                    iterate_orbit(RootRatios(target + eps, 1.0), p, 10000, 1e-12);
                REQUIRE(o.status == OrbitStatus::converged);
                CHECK(std::abs(o.limit.u - target) <= 1e-8);
            }
    }
    SECTION("the unstable middle root repels") {
        for (double eps : {-1e-3, 1e-3}) {
            const Orbit o = iterate_orbit(RootRatios(r2 + eps, 1.0), p, 10000, 1e-12);
            REQUIRE(o.status == OrbitStatus::converged);
            CHECK(std::abs(o.limit.u - r2) > 1e-2);
        }
    }
}
