#ifndef SOSTREE_PHASE_HPP
#define SOSTREE_PHASE_HPP

// Translation-invariant fixed points on the invariant slice {v = 1}: the
// fixed-point cubic, guaranteed-complete positive root isolation, stability
// through f', the phase-transition diagnosis, and a multi-start Newton search
// for fixed points of the full 2-D map.

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "sostree/errors.hpp"
#include "sostree/newton2d.hpp"
#include "sostree/params.hpp"
#include "sostree/recursion.hpp"

namespace sostree {

// u = f(u) cleared of its denominator:
//   t^2 u^3 + (2 t t1 (t^2+1) - 1) u^2 + (t^4 + 2 t^2 t1^2 + 1 - 4 t t1) u
//   - 2 t^2 (t1^2 + 1) = 0
// c3 > 0 and c0 < 0 for every admissible parameter pair, so at least one
// positive root always exists.
struct CubicCoefficients {
    double c3, c2, c1, c0;

    double evaluate(double u) const { return ((c3 * u + c2) * u + c1) * u + c0; }
    double derivative(double u) const { return (3 * c3 * u + 2 * c2) * u + c1; }
    double scale() const { return std::max(1.0, std::abs(c2) + std::abs(c1) + std::abs(c0)); }

    // Magnitude of the terms entering evaluate(u): residuals below
    // eps * residual_scale(u) are indistinguishable from zero in doubles, so
    // root acceptance must be measured against this, not against scale() alone.
    double residual_scale(double u) const {
        const double a = std::abs(u);
        return std::max(scale(),
                        ((std::abs(c3) * a + std::abs(c2)) * a + std::abs(c1)) * a + std::abs(c0));
    }
};

inline CubicCoefficients cubic_coefficients(const ThetaParams& p) {
    const double t = p.theta, t1 = p.theta1;
    const double t2 = t * t;
    return {t2, 2 * t * t1 * (t2 + 1) - 1.0, t2 * t2 + 2 * t2 * t1 * t1 + 1.0 - 4 * t * t1,
            -2 * t2 * (t1 * t1 + 1.0)};
}

// Exact quotient-rule derivative of f on the slice v = 1.
inline double f_prime(double u, const ThetaParams& p) {
    const double t = p.theta, t1 = p.theta1;
    const double t2 = t * t;
    const double num = u * u + 4 * t * t1 * u + 2 * t2 * (t1 * t1 + 1);
    const double den = t2 * u * u + 2 * t * t1 * (t2 + 1) * u + (t2 * t2 + 2 * t2 * t1 * t1 + 1);
    const double dnum = 2 * u + 4 * t * t1;
    const double dden = 2 * t2 * u + 2 * t * t1 * (t2 + 1);
    return (dnum * den - num * dden) / (den * den);
}

namespace detail {

inline double bisect_root(const CubicCoefficients& c, double lo, double hi) {
    double flo = c.evaluate(lo);
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break; // interval at machine resolution
        const double fmid = c.evaluate(mid);
        if (fmid == 0.0) return mid;
        if ((flo < 0.0) == (fmid < 0.0)) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace detail

// All distinct roots in (0, inf), ascending, multiplicity collapsed. Strategy:
// critical points of the cubic split (0, U] into monotone pieces (U is a
// Cauchy-type bound, no root exceeds it); every sign change is bisected, and a
// critical point where the cubic itself nearly vanishes is a tangency root. A
// deflation pass cross-checks that nothing was missed. If two reported roots
// are closer than 1e-6 the optional near_tangency flag is raised.
inline std::vector<double> positive_real_roots(const CubicCoefficients& c, double tol = 1e-13,
                                               bool* near_tangency = nullptr) {
    if (c.c3 == 0.0) throw std::invalid_argument("positive_real_roots: leading coefficient is zero");
    if (near_tangency) *near_tangency = false;
    const double U = 1.0 + (std::abs(c.c2) + std::abs(c.c1) + std::abs(c.c0)) / std::abs(c.c3);

    // breakpoints: 0, the critical points inside (0, U), and U
    std::vector<double> xs{0.0};
    {
        const double a = 3 * c.c3, b = 2 * c.c2, q = c.c1;
        const double disc = b * b - 4 * a * q;
        if (disc > 0.0) {
            const double sq = std::sqrt(disc);
            const double r1 = (-b - sq) / (2 * a), r2 = (-b + sq) / (2 * a);
            for (double r : {std::min(r1, r2), std::max(r1, r2)})
                if (r > 0.0 && r < U) xs.push_back(r);
        }
    }
    xs.push_back(U);

    std::vector<double> roots;
    auto push_unique = [&roots](double r) {
        for (double e : roots)
            if (std::abs(e - r) <= 1e-9 * std::max(1.0, std::abs(r))) return;
        roots.push_back(r);
    };

    std::vector<bool> interval_has_root(xs.size() - 1, false);
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        const double fa = c.evaluate(xs[i]), fb = c.evaluate(xs[i + 1]);
        if ((fa < 0.0 && fb > 0.0) || (fa > 0.0 && fb < 0.0)) {
            push_unique(detail::bisect_root(c, xs[i], xs[i + 1]));
            interval_has_root[i] = true;
        }
    }

    // tangency: a critical point sitting (numerically) on the axis counts as a
    // collapsed double root, but only when the crossings were not already
    // picked up on either side
    for (std::size_t i = 1; i + 1 < xs.size(); ++i)
        if (std::abs(c.evaluate(xs[i])) <= residual_tol && !interval_has_root[i - 1] &&
            !interval_has_root[i])
            push_unique(xs[i]);

    // deflation cross-check from the best-conditioned root
    if (!roots.empty()) {
        double r0 = roots.front();
        for (double r : roots)
            if (std::abs(c.derivative(r)) > std::abs(c.derivative(r0))) r0 = r;
        const double q2 = c.c3;
        const double q1 = c.c2 + q2 * r0;
        const double q0 = c.c1 + q1 * r0;
        const double disc = q1 * q1 - 4 * q2 * q0;
        if (disc >= 0.0) {
            const double sq = std::sqrt(disc);
            for (double r : {(-q1 - sq) / (2 * q2), (-q1 + sq) / (2 * q2)})
                if (r > 0.0 && std::abs(c.evaluate(r)) <= residual_tol) push_unique(r);
        }
    }

    std::erase_if(roots, [](double r) { return !(r > 0.0); });
    std::sort(roots.begin(), roots.end());
    if (near_tangency)
        for (std::size_t i = 0; i + 1 < roots.size(); ++i)
            if (roots[i + 1] - roots[i] < 1e-6) *near_tangency = true;
    return roots;
}

enum class Stability { stable, unstable, neutral };

inline const char* to_string(Stability s) {
    switch (s) {
        case Stability::stable: return "stable";
        case Stability::unstable: return "unstable";
        default: return "neutral";
    }
}

struct FixedPointOnI {
    double u;
    double derivative; // f'(u)
    Stability stability;
};

// |f'| within this margin of 1 is reported neutral rather than guessed.
inline constexpr double kStabilityMargin = 1e-9;

inline Stability classify_stability(double derivative) {
    const double a = std::abs(derivative);
    if (a > 1.0 + kStabilityMargin) return Stability::unstable;
    if (a < 1.0 - kStabilityMargin) return Stability::stable;
    return Stability::neutral;
}

struct PhaseDiagnosis {
    ThetaParams params;
    std::vector<FixedPointOnI> fixed_points; // ascending in u
    bool transition = false;                 // more than one invariant measure
    std::optional<double> criterion_witness; // a root with f' > 1, when present
    bool canonical_pattern = false; // three roots arranged stable/unstable/stable
    bool near_tangency = false;
};

inline PhaseDiagnosis diagnose_phase(const ThetaParams& p) {
    PhaseDiagnosis d{p, {}, false, std::nullopt, false, false};
    const auto roots = positive_real_roots(cubic_coefficients(p), 1e-13, &d.near_tangency);
    if (roots.empty())
        throw internal_error("diagnose_phase: no positive fixed point found; the cubic "
                             "always has one");
    for (double u : roots) {
        const double der = f_prime(u, p);
        d.fixed_points.push_back({u, der, classify_stability(der)});
    }
    d.transition = d.fixed_points.size() >= 2;
    if (d.fixed_points.size() == 3) {
        const auto& fp = d.fixed_points;
        d.canonical_pattern = fp[0].stability == Stability::stable &&
                              fp[1].stability == Stability::unstable &&
                              fp[2].stability == Stability::stable;
        if (fp[1].derivative > 1.0) d.criterion_witness = fp[1].u;
    }
    return d;
}

struct SearchDiagnostics {
    int seeds = 0;
    int converged = 0;
    int singular_jacobians = 0;
    int stalled = 0;
};

// Fixed points of the full 2-D map by damped Newton on F(x) - x from a
// log-spaced seed grid over [1e-3, 1e3]^2, deduplicated at 100*tol.
inline std::vector<RootRatios> fixed_points_2d(const ThetaParams& p, int grid_density,
                                               double tol = 1e-12,
                                               SearchDiagnostics* diag = nullptr) {
    if (grid_density < 2) throw std::invalid_argument("fixed_points_2d: grid_density must be >= 2");

    auto G = [&p](const detail::Vec2& x) {
        const detail::Vec2 fx = detail::eval_ratio_map(x, p);
        return detail::Vec2{fx.x - x.x, fx.y - x.y};
    };
    auto J = [&p](const detail::Vec2& x) {
        detail::Mat2 m = detail::jacobian_ratio_map(x, p);
        m.a11 -= 1.0;
        m.a22 -= 1.0;
        return m;
    };

    detail::NewtonDiagnostics nd;
    std::vector<RootRatios> found;
    const double lo = std::log(1e-3), hi = std::log(1e3);
    for (int i = 0; i < grid_density; ++i)
        for (int j = 0; j < grid_density; ++j) {
            const detail::Vec2 seed{std::exp(lo + (hi - lo) * i / (grid_density - 1)),
                                    std::exp(lo + (hi - lo) * j / (grid_density - 1))};
            if (diag) ++diag->seeds;
            const auto sol = detail::damped_newton(G, J, seed, tol, 100, &nd);
            if (!sol) continue;
            if (diag) ++diag->converged;
            bool duplicate = false;
            for (const auto& e : found)
                if (std::max(std::abs(e.u - sol->x), std::abs(e.v - sol->y)) <= 100 * tol) {
                    duplicate = true;
                    break;
                }
            if (!duplicate) found.emplace_back(sol->x, sol->y);
        }
    if (diag) {
        diag->singular_jacobians = nd.singular_jacobians;
        diag->stalled = nd.stalled;
    }
    std::sort(found.begin(), found.end(),
              [](const RootRatios& a, const RootRatios& b) { return a.u < b.u || (a.u == b.u && a.v < b.v); });
    return found;
}

} // namespace sostree

#endif
