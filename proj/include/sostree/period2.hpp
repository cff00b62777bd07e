#ifndef SOSTREE_PERIOD2_HPP
#define SOSTREE_PERIOD2_HPP

// Period-2 (antiferromagnetic) analysis on the invariant slice: the quadratic
// A u^2 + B u + C obtained exactly by dividing f(f(u)) - u by f(u) - u on the
// polynomial level, the closed-form coefficient displays, the sign-rule
// criterion, and certified parameter-plane scans of {D >= 0, B < 0}.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "sostree/errors.hpp"
#include "sostree/grid.hpp"
#include "sostree/newton2d.hpp"
#include "sostree/params.hpp"
#include "sostree/polynomial.hpp"
#include "sostree/rational.hpp"

namespace sostree {

enum class QuadraticSource { printed_formula, exact_division };

inline const char* to_string(QuadraticSource s) {
    return s == QuadraticSource::printed_formula ? "printed_formula" : "exact_division";
}

// Coefficients of the period-2 quadratic plus its discriminant D = B^2 - 4AC.
// A > 0 and C > 0 for every admissible parameter pair; construction enforces it.
struct QuadraticABC {
    double a, b, c;
    double d;
    QuadraticSource source;

    QuadraticABC(double a_, double b_, double c_, QuadraticSource src)
        : a(a_), b(b_), c(c_), d(b_ * b_ - 4.0 * a_ * c_), source(src) {
        if (!(a > 0.0) || !(c > 0.0))
            throw internal_error("QuadraticABC: A and C must be positive, got A=" +
                                 std::to_string(a_) + " C=" + std::to_string(c_));
    }
};

namespace detail {

template <class T>
T power(T base, unsigned exp) {
    T r(1);
    while (exp != 0) {
        if (exp & 1u) r *= base;
        base *= base;
        exp >>= 1u;
    }
    return r;
}

// The closed-form coefficient displays, term by term:
//   A = t^6 + 2 t^4 t1^2 + 2 t^3 t1 + t^2 + 2 t t1 + 1
//   B = 2 t^7 t1 + 4 t^5 t1^3 + 2 t^5 t1 + 6 t^4 t1^2 + 4 t^3 t1^3 - t^4
//       + 2 t^3 t1 + 10 t^2 t1^2 + 6 t t1 + 1
//   C = t^8 + 4 t^6 t1^2 + 4 t^4 t1^4 + 4 t^5 t1 + 8 t^3 t1^3 + 2 t^4
//       + 6 t^2 t1^2 + 2 t^2 + 4 t t1 + 1
template <class T>
std::array<std::vector<T>, 3> abc_terms(const T& t, const T& t1) {
    std::array<std::vector<T>, 3> out;
    auto m = [&](int coeff, unsigned pt, unsigned pt1) {
        return T(coeff) * power(t, pt) * power(t1, pt1);
    };
    out[0] = {m(1, 6, 0), m(2, 4, 2), m(2, 3, 1), m(1, 2, 0), m(2, 1, 1), m(1, 0, 0)};
    out[1] = {m(2, 7, 1), m(4, 5, 3), m(2, 5, 1), m(6, 4, 2), m(4, 3, 3),
              m(-1, 4, 0), m(2, 3, 1), m(10, 2, 2), m(6, 1, 1), m(1, 0, 0)};
    out[2] = {m(1, 8, 0), m(4, 6, 2), m(4, 4, 4), m(4, 5, 1), m(8, 3, 3),
              m(2, 4, 0), m(6, 2, 2), m(2, 2, 0), m(4, 1, 1), m(1, 0, 0)};
    return out;
}

template <class T>
std::array<T, 3> abc_values(const T& theta, const T& theta1) {
    const auto terms = abc_terms<T>(theta, theta1);
    std::array<T, 3> out{T(0), T(0), T(0)};
    for (int i = 0; i < 3; ++i)
        for (const T& t : terms[i]) out[i] += t;
    return out;
}

struct KahanSum {
    double sum = 0.0, comp = 0.0, abs_sum = 0.0;
    void add(double x) {
        abs_sum += std::abs(x);
        const double y = x - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
};

struct ScaledABC {
    double a, b, c;
    double scale_a, scale_b, scale_c;
};

// Compensated evaluation, keeping the sum of term magnitudes alongside; the
// magnitude decides whether a floating-point sign can be trusted.
inline ScaledABC eval_abc_scaled(double theta, double theta1) {
    const auto terms = abc_terms<double>(theta, theta1);
    KahanSum s[3];
    for (int i = 0; i < 3; ++i)
        for (double t : terms[i]) s[i].add(t);
    return {s[0].sum, s[1].sum, s[2].sum, s[0].abs_sum, s[1].abs_sum, s[2].abs_sum};
}

// Numerator / denominator of f as degree-2 polynomials in u.
template <class T>
std::pair<Polynomial<T>, Polynomial<T>> f_fraction(const T& t, const T& t1) {
    const T t2 = t * t;
    Polynomial<T> num(std::vector<T>{T(2) * t2 * (t1 * t1 + T(1)), T(4) * t * t1, T(1)});
    Polynomial<T> den(std::vector<T>{t2 * t2 + T(2) * t2 * t1 * t1 + T(1),
                                     T(2) * t * t1 * (t2 + T(1)), t2});
    return {std::move(num), std::move(den)};
}

template <class T>
struct Period2Division {
    std::array<T, 3> abc; // A, B, C
    Polynomial<T> remainder;
    T dividend_norm; // largest |coefficient| of the degree-5 dividend
};

// Core of the derivation. With f = P/Q, homogenizing f(f(u)) gives
//   N2 = P(P,Q) and D2 = Q(P,Q)  (degree-2 composition with the pair (P, Q)),
// so period-2 points solve (N2 - u D2) / (P - u Q) = 0. The division is exact
// on the polynomial level; the degree-2 quotient is A u^2 + B u + C.
template <class T>
Period2Division<T> period2_division(const T& t, const T& t1) {
    using std::abs;
    auto [P, Q] = f_fraction<T>(t, t1);
    const Polynomial<T> n2 = compose_with_fraction(P, P, Q);
    const Polynomial<T> d2 = compose_with_fraction(Q, P, Q);
    const Polynomial<T> dividend = n2 - d2.shifted(1); // degree 5
    const Polynomial<T> divisor = P - Q.shifted(1);    // degree 3
    auto dm = Polynomial<T>::divide(dividend, divisor);
    if (dm.quotient.degree() != 2)
        throw internal_error("period2_division: quotient degree is not 2");
    T norm(0);
    for (const T& coeff : dividend.coefficients())
        norm = std::max(norm, T(abs(coeff)));
    return {{dm.quotient.coefficient(2), dm.quotient.coefficient(1), dm.quotient.coefficient(0)},
            std::move(dm.remainder), std::move(norm)};
}

} // namespace detail

// f as a ratio of degree-2 polynomials in u (numerator, denominator). The
// denominator has only positive coefficients, hence no positive root.
inline std::pair<Polynomial<double>, Polynomial<double>> f_as_rational(const ThetaParams& p) {
    return detail::f_fraction<double>(p.theta, p.theta1);
}

inline std::pair<Polynomial<Rational>, Polynomial<Rational>> f_as_rational_exact(
    const Rational& theta, const Rational& theta1) {
    return detail::f_fraction<Rational>(theta, theta1);
}

// Direct evaluation of the closed-form A, B, C displays.
inline QuadraticABC printed_ABC(const ThetaParams& p) {
    const auto s = detail::eval_abc_scaled(p.theta, p.theta1);
    return QuadraticABC(s.a, s.b, s.c, QuadraticSource::printed_formula);
}

inline std::array<Rational, 3> printed_abc_exact(const Rational& theta, const Rational& theta1) {
    return detail::abc_values<Rational>(theta, theta1);
}

// (A, B, C) by polynomial division in double precision. The remainder is pure
// roundoff; a remainder beyond 1e-9 of the dividend magnitude means the
// pipeline itself is broken and is reported as such, never patched over.
inline QuadraticABC extract_period2_quadratic(const ThetaParams& p,
                                              double* remainder_norm = nullptr) {
    const auto div = detail::period2_division<double>(p.theta, p.theta1);
    double rem = 0.0;
    for (double coeff : div.remainder.coefficients()) rem = std::max(rem, std::abs(coeff));
    if (remainder_norm) *remainder_norm = rem;
    if (rem > 1e-9 * std::max(1.0, div.dividend_norm))
        throw internal_error("extract_period2_quadratic: division remainder " +
                             std::to_string(rem) + " exceeds the roundoff budget");
    return QuadraticABC(div.abc[0], div.abc[1], div.abc[2], QuadraticSource::exact_division);
}

// Exact-rational derivation: the remainder must vanish identically and the
// quotient's leading coefficient must reproduce the closed-form A exactly.
inline std::array<Rational, 3> extract_period2_quadratic_exact(const Rational& theta,
                                                               const Rational& theta1) {
    if (!(theta > 0) || !(theta1 > 0))
        throw std::invalid_argument("extract_period2_quadratic_exact: weights must be positive");
    auto div = detail::period2_division<Rational>(theta, theta1);
    if (!div.remainder.is_zero())
        throw internal_error("extract_period2_quadratic_exact: nonzero division remainder");
    const auto printed = detail::abc_values<Rational>(theta, theta1);
    if (div.abc[0] != printed[0])
        throw internal_error("extract_period2_quadratic_exact: quotient leading coefficient "
                             "does not reproduce the closed-form A");
    return div.abc;
}

// Real roots of the quadratic in (0, inf), by the cancellation-free formula:
// the larger-magnitude root from -(b + sign(b) sqrt(D)) / 2, the other from
// c / (a r). Empty when D < 0 or no root is positive.
inline std::vector<double> period2_positive_roots(const QuadraticABC& q, double tol = 1e-12) {
    if (q.d < 0.0) return {};
    const double sq = std::sqrt(q.d);
    const double w = -0.5 * (q.b + (q.b >= 0.0 ? sq : -sq)); // nonzero since a, c > 0
    const double r1 = w / q.a;
    const double r2 = q.c / w;
    std::vector<double> roots;
    for (double r : {r1, r2})
        if (r > 0.0) roots.push_back(r);
    std::sort(roots.begin(), roots.end());
    if (roots.size() == 2 &&
        roots[1] - roots[0] <= tol * std::max({1.0, roots[0], roots[1]}))
        roots.pop_back();
    return roots;
}

// Sign-rule criterion: with A > 0 and C > 0, the coefficient sequence has no
// sign change exactly when B >= 0, and then no positive root exists. The
// direct quadratic-formula check is run alongside as a guard.
inline bool descartes_no_positive_roots(const QuadraticABC& q) {
    const bool no_positive = q.b >= 0.0;
    if (no_positive && !period2_positive_roots(q).empty())
        throw internal_error("descartes_no_positive_roots: sign rule contradicted by direct "
                             "root computation");
    return no_positive;
}

// ---------------------------------------------------------------------------
// Parameter-plane scan of S = {D >= 0, B < 0}

struct RegionScanViolation {
    int i, j;
    double theta, theta1;
    double b, d;
};

// Signs are -1/0/+1, row-major with theta as the outer axis. Cells whose
// floating value is within 1e-12 of the term-magnitude scale are re-evaluated
// in exact rational arithmetic, so every recorded sign is certified.
struct RegionScanReport {
    GridSpec grid;
    std::vector<std::int8_t> sign_b; // theta_n * theta1_n entries
    std::vector<std::int8_t> sign_d;
    long cells_b_negative = 0;
    long cells_d_nonnegative = 0;
    long cells_exact_resolved = 0;
    std::vector<RegionScanViolation> violations;
    bool empty = true; // no cell with D >= 0 and B < 0
    bool exact_mode = false;

    std::size_t index(int i, int j) const {
        return static_cast<std::size_t>(i) * grid.theta1_n + j;
    }
};

inline constexpr double kSignBoundaryFraction = 1e-12;

namespace detail {

struct CellSigns {
    int sb, sd;
    bool exact_used;
};

inline CellSigns certified_cell_signs(double theta, double theta1, bool exact_all) {
    if (!exact_all) {
        const ScaledABC s = eval_abc_scaled(theta, theta1);
        const double d = s.b * s.b - 4.0 * s.a * s.c;
        const double scale_d = s.b * s.b + 4.0 * s.scale_a * s.scale_c;
        const bool b_clear = std::abs(s.b) >= kSignBoundaryFraction * s.scale_b;
        const bool d_clear = std::abs(d) >= kSignBoundaryFraction * scale_d;
        if (b_clear && d_clear)
            return {s.b > 0 ? 1 : -1, d > 0 ? 1 : -1, false};
    }
    const Rational rt = rational_from_double(theta);
    const Rational rt1 = rational_from_double(theta1);
    const auto abc = abc_values<Rational>(rt, rt1);
    const Rational d = abc[1] * abc[1] - 4 * abc[0] * abc[2];
    return {sign_of(abc[1]), sign_of(d), true};
}

} // namespace detail

// Evaluates sign(B) and sign(D) over the grid and reports every cell with
// D >= 0 and B < 0. Deterministic row-major assembly for any worker count.
inline RegionScanReport scan_region_S(const GridSpec& grid, int workers = 0,
                                      bool exact_all = false) {
    grid.validate();
    RegionScanReport rep;
    rep.grid = grid;
    rep.exact_mode = exact_all;
    rep.sign_b.assign(static_cast<std::size_t>(grid.cell_count()), 0);
    rep.sign_d.assign(static_cast<std::size_t>(grid.cell_count()), 0);

    struct RowResult {
        long b_neg = 0, d_nonneg = 0, exact = 0;
        std::vector<RegionScanViolation> violations;
    };
    std::vector<RowResult> rows(grid.theta_n);

    detail::parallel_rows(grid.theta_n, workers, [&](int i) {
        const double theta = grid.theta_at(i);
        RowResult& row = rows[i];
        for (int j = 0; j < grid.theta1_n; ++j) {
            const double theta1 = grid.theta1_at(j);
            const auto cs = detail::certified_cell_signs(theta, theta1, exact_all);
            rep.sign_b[rep.index(i, j)] = static_cast<std::int8_t>(cs.sb);
            rep.sign_d[rep.index(i, j)] = static_cast<std::int8_t>(cs.sd);
            if (cs.exact_used) ++row.exact;
            if (cs.sb < 0) ++row.b_neg;
            if (cs.sd >= 0) ++row.d_nonneg;
            if (cs.sd >= 0 && cs.sb < 0) {
                const auto s = detail::eval_abc_scaled(theta, theta1);
                row.violations.push_back(
                    {i, j, theta, theta1, s.b, s.b * s.b - 4.0 * s.a * s.c});
            }
        }
    });

    for (const RowResult& row : rows) {
        rep.cells_b_negative += row.b_neg;
        rep.cells_d_nonnegative += row.d_nonneg;
        rep.cells_exact_resolved += row.exact;
        rep.violations.insert(rep.violations.end(), row.violations.begin(),
                              row.violations.end());
    }
    rep.empty = rep.violations.empty();
    return rep;
}

// Genuine period-2 points of the 2-D map: multi-start damped Newton on
// F(F(x)) - x with fixed points of F filtered out. Exploratory; emptiness is
// an observation, not a claim.
inline std::vector<RootRatios> period2_search_2d(const ThetaParams& p, int grid_density,
                                                 double tol = 1e-12,
                                                 detail::NewtonDiagnostics* diag = nullptr) {
    if (grid_density < 2)
        throw std::invalid_argument("period2_search_2d: grid_density must be >= 2");

    auto G = [&p](const detail::Vec2& x) {
        const detail::Vec2 fx = detail::eval_ratio_map(x, p);
        const detail::Vec2 ffx = detail::eval_ratio_map(fx, p);
        return detail::Vec2{ffx.x - x.x, ffx.y - x.y};
    };
    auto J = [&p](const detail::Vec2& x) {
        const detail::Vec2 fx = detail::eval_ratio_map(x, p);
        const detail::Mat2 a = detail::jacobian_ratio_map(fx, p);
        const detail::Mat2 b = detail::jacobian_ratio_map(x, p);
        return detail::Mat2{a.a11 * b.a11 + a.a12 * b.a21 - 1.0, a.a11 * b.a12 + a.a12 * b.a22,
                            a.a21 * b.a11 + a.a22 * b.a21, a.a21 * b.a12 + a.a22 * b.a22 - 1.0};
    };

    std::vector<RootRatios> found;
    const double lo = std::log(1e-3), hi = std::log(1e3);
    for (int i = 0; i < grid_density; ++i)
        for (int j = 0; j < grid_density; ++j) {
            const detail::Vec2 seed{std::exp(lo + (hi - lo) * i / (grid_density - 1)),
                                    std::exp(lo + (hi - lo) * j / (grid_density - 1))};
            const auto sol = detail::damped_newton(G, J, seed, tol, 120, diag);
            if (!sol) continue;
            const detail::Vec2 fx = detail::eval_ratio_map(*sol, p);
            const double fixed_dist =
                std::max(std::abs(fx.x - sol->x), std::abs(fx.y - sol->y));
            if (fixed_dist <= 100 * tol) continue; // fixed point of F, not period 2
            bool duplicate = false;
            for (const auto& e : found)
                if (std::max(std::abs(e.u - sol->x), std::abs(e.v - sol->y)) <= 100 * tol) {
                    duplicate = true;
                    break;
                }
            if (!duplicate) found.emplace_back(sol->x, sol->y);
        }
    std::sort(found.begin(), found.end(), [](const RootRatios& a, const RootRatios& b) {
        return a.u < b.u || (a.u == b.u && a.v < b.v);
    });
    return found;
}

} // namespace sostree

#endif
