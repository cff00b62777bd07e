// Polynomial arithmetic over doubles and exact rationals.

#include <catch2/catch_amalgamated.hpp>

#include <random>

#include <sostree/polynomial.hpp>
#include <sostree/rational.hpp>

using namespace sostree;
using PolyQ = Polynomial<Rational>;
using PolyD = Polynomial<double>;

namespace {

PolyQ random_poly(std::mt19937_64& rng, int max_degree) {
    std::uniform_int_distribution<int> deg(0, max_degree);
    std::uniform_int_distribution<int> num(-9, 9);
    std::uniform_int_distribution<int> den(1, 9);
    std::vector<Rational> c(deg(rng) + 1);
    for (auto& x : c) x = Rational(num(rng), den(rng));
    if (c.back() == 0) c.back() = Rational(1);
    return PolyQ(std::move(c));
}

} // namespace

TEST_CASE("degree, trim and leading coefficient") {
    CHECK(PolyQ().degree() == -1);
    CHECK(PolyQ().is_zero());
    const PolyQ p(std::vector<Rational>{Rational(1), Rational(2), Rational(0)});
    CHECK(p.degree() == 1);
    CHECK(p.leading() == 2);
    CHECK(PolyQ::monomial(3, Rational(5)).degree() == 3);
    CHECK_THROWS_AS(PolyQ().leading(), std::invalid_argument);
}

TEST_CASE("evaluation is compatible with ring operations") {
    std::mt19937_64 rng(101);
    std::uniform_int_distribution<int> xs(-5, 5);
    for (int trial = 0; trial < 200; ++trial) {
        const PolyQ a = random_poly(rng, 5), b = random_poly(rng, 5);
        const Rational x(xs(rng), 3);
        CHECK((a + b).evaluate(x) == a.evaluate(x) + b.evaluate(x));
        CHECK((a - b).evaluate(x) == a.evaluate(x) - b.evaluate(x));
        CHECK((a * b).evaluate(x) == a.evaluate(x) * b.evaluate(x));
        CHECK(a.shifted(2).evaluate(x) == a.evaluate(x) * x * x);
    }
}

TEST_CASE("euclidean division is exact over rationals") {
    std::mt19937_64 rng(102);
    for (int trial = 0; trial < 300; ++trial) {
        const PolyQ num = random_poly(rng, 6);
        const PolyQ den = random_poly(rng, 3);
        const auto dm = PolyQ::divide(num, den);
        const PolyQ recomposed = dm.quotient * den + dm.remainder;
        CHECK((recomposed - num).is_zero());
        CHECK(dm.remainder.degree() < den.degree());
    }
    CHECK_THROWS_AS(PolyQ::divide(random_poly(rng, 2), PolyQ()), std::invalid_argument);
}

TEST_CASE("division by an exact factor leaves zero remainder") {
    // (u - 1) (u + 2)^2 = u^3 + 3u^2 - 4
    const PolyQ cubic(std::vector<Rational>{-4, 0, 3, 1});
    const PolyQ factor(std::vector<Rational>{-1, 1});
    const auto dm = PolyQ::divide(cubic, factor);
    CHECK(dm.remainder.is_zero());
    CHECK(dm.quotient.coefficient(0) == 4);
    CHECK(dm.quotient.coefficient(1) == 4);
    CHECK(dm.quotient.coefficient(2) == 1);
}

TEST_CASE("composition with a fraction matches pointwise evaluation") {
    std::mt19937_64 rng(103);
    std::uniform_int_distribution<int> xs(-4, 4);
    for (int trial = 0; trial < 200; ++trial) {
        const PolyQ outer = random_poly(rng, 2);
        const PolyQ num = random_poly(rng, 2);
        const PolyQ den = random_poly(rng, 2);
        const PolyQ composed = compose_with_fraction(outer, num, den);
        const Rational x(xs(rng), 5);
        const Rational qx = den.evaluate(x);
        if (qx == 0) continue;
        // outer(num/den) * den^deg(outer) at x, all exact
        const Rational ratio = num.evaluate(x) / qx;
        Rational expected(0), ratio_pow(1);
        for (int k = 0; k <= outer.degree(); ++k) {
            expected += outer.coefficient(k) * ratio_pow;
            ratio_pow *= ratio;
        }
        for (int k = 0; k < outer.degree(); ++k) expected *= qx;
        CHECK(composed.evaluate(x) == expected);
    }
}

TEST_CASE("double-precision division tracks the rational result") {
    const PolyD num(std::vector<double>{-4, 0, 3, 1});
    const PolyD den(std::vector<double>{-1, 1});
    const auto dm = PolyD::divide(num, den);
    for (double c : dm.remainder.coefficients()) CHECK(std::abs(c) <= 1e-12);
    CHECK(dm.quotient.coefficient(2) == Catch::Approx(1.0));
    CHECK(dm.quotient.coefficient(1) == Catch::Approx(4.0));
    CHECK(dm.quotient.coefficient(0) == Catch::Approx(4.0));
}
