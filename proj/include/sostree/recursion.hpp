#ifndef SOSTREE_RECURSION_HPP
#define SOSTREE_RECURSION_HPP

// The 2-D rational ratio map F, its scalar restriction f to the invariant
// slice {v = 1}, orbit iteration with cycle detection, and the algebraic
// regression check against the classical SOS system at theta1 = 1.

#include <array>
#include <cmath>
#include <cstdint>
#include <deque>
#include <string>
#include <vector>

#include "sostree/errors.hpp"
#include "sostree/params.hpp"

namespace sostree {

// One application of the ratio recursion:
//   u' = (t^2 + 2 t t1 u + 2 t^2 t1^2 v + u^2 + 2 t t1 u v + t^2 v^2) / Dn
//   v' = (t^4 + 2 t^3 t1 u + 2 t^2 t1^2 v + t^2 u^2 + 2 t t1 u v + v^2) / Dn
//   Dn = 1 + 2 t t1 u + 2 t^2 t1^2 v + t^2 u^2 + 2 t^3 t1 u v + t^4 v^2
// All terms are positive, so the denominator never vanishes.
inline RootRatios step_F(const RootRatios& x, const ThetaParams& p) {
    const double t = p.theta, t1 = p.theta1;
    const double u = x.u, v = x.v;
    const double t2 = t * t, t3 = t2 * t, t4 = t2 * t2, t1sq = t1 * t1;

    const double num_u = t2 + 2 * t * t1 * u + 2 * t2 * t1sq * v + u * u + 2 * t * t1 * u * v +
                         t2 * v * v;
    const double num_v = t4 + 2 * t3 * t1 * u + 2 * t2 * t1sq * v + t2 * u * u +
                         2 * t * t1 * u * v + v * v;
    const double den = 1.0 + 2 * t * t1 * u + 2 * t2 * t1sq * v + t2 * u * u +
                       2 * t3 * t1 * u * v + t4 * v * v;

    if (!std::isfinite(num_u) || !std::isfinite(num_v) || !std::isfinite(den)) {
        const double worst = std::max({num_u, num_v, den});
        throw std::overflow_error("step_F: non-finite intermediate (magnitude ~" +
                                  std::to_string(worst) + ") for theta=" + std::to_string(t) +
                                  ", theta1=" + std::to_string(t1));
    }
    return RootRatios(num_u / den, num_v / den);
}

// Restriction of F to the invariant slice v = 1:
//   f(u) = (u^2 + 4 t t1 u + 2 t^2 (t1^2 + 1))
//        / (t^2 u^2 + 2 t t1 (t^2 + 1) u + t^4 + 2 t^2 t1^2 + 1)
inline double f_on_I(double u, const ThetaParams& p) {
    const double t = p.theta, t1 = p.theta1;
    const double t2 = t * t;
    const double num = u * u + 4 * t * t1 * u + 2 * t2 * (t1 * t1 + 1);
    const double den = t2 * u * u + 2 * t * t1 * (t2 + 1) * u + (t2 * t2 + 2 * t2 * t1 * t1 + 1);
    return num / den;
}

// Componentwise relative residual between step_F at theta1 = 1 and the
// classical squared-fraction system
//   u' = ((u + t v + t) / (t^2 v + t u + 1))^2
//   v' = ((t u + v + t^2) / (t^2 v + t u + 1))^2
// The two routes are algebraically identical; any residual is roundoff.
inline std::array<double, 2> classical_reduction_residual(double u, double v, double theta) {
    const RootRatios via_F = step_F(RootRatios(u, v), ThetaParams(theta, 1.0));
    const double den = theta * theta * v + theta * u + 1.0;
    const double cu = (u + theta * v + theta) / den;
    const double cv = (theta * u + v + theta * theta) / den;
    const double u_classical = cu * cu;
    const double v_classical = cv * cv;
    return {std::abs(via_F.u - u_classical) / u_classical,
            std::abs(via_F.v - v_classical) / v_classical};
}

enum class OrbitStatus { converged, cycle, max_iterations };

// Orbit of the ratio map with sparse history: every 100th state plus the
// last 64, enough for plotting without unbounded memory.
struct Orbit {
    RootRatios initial;
    std::vector<std::pair<std::int64_t, RootRatios>> states; // (step, state), ascending
    OrbitStatus status;
    std::int64_t iterations = 0;

    // converged only
    RootRatios limit{1.0, 1.0};

    // cycle only
    int period = 0;
    std::vector<RootRatios> cycle_points;
};

namespace detail {

inline double sup_distance(const RootRatios& a, const RootRatios& b) {
    return std::max(std::abs(a.u - b.u), std::abs(a.v - b.v));
}

// Looks for a period-p return (2 <= p <= window) of `next` against the most
// recent states, newest last. Returns 0 when none matches.
inline int detect_cycle_period(const std::deque<RootRatios>& recent, const RootRatios& next,
                               double tol, int window = 4) {
    for (int p = 2; p <= window; ++p) {
        if (static_cast<int>(recent.size()) < p) break;
        if (sup_distance(next, recent[recent.size() - p]) <= tol) return p;
    }
    return 0;
}

} // namespace detail

// Iterates step_F from x0. Convergence: the next state moves by at most tol
// in sup norm, in which case the current state is the reported limit and
// satisfies |F(limit) - limit| <= tol. Cycles up to period 4 are detected by
// comparison against the trailing states.
inline Orbit iterate_orbit(const RootRatios& x0, const ThetaParams& params,
                           std::int64_t max_iter = 100000, double tol = 1e-12) {
    if (max_iter < 1) throw std::invalid_argument("iterate_orbit: max_iter must be >= 1");
    if (!(tol > 0.0)) throw std::invalid_argument("iterate_orbit: tol must be positive");

    constexpr std::size_t kRing = 64;
    constexpr std::int64_t kDecimation = 100;

    Orbit orbit{x0, {}, OrbitStatus::max_iterations};
    std::vector<std::pair<std::int64_t, RootRatios>> decimated;
    std::deque<std::pair<std::int64_t, RootRatios>> ring;
    std::deque<RootRatios> recent; // trailing window for cycle detection

    auto record = [&](std::int64_t step, const RootRatios& s) {
        if (step % kDecimation == 0) decimated.emplace_back(step, s);
        ring.emplace_back(step, s);
        if (ring.size() > kRing) ring.pop_front();
        recent.push_back(s);
        if (recent.size() > 5) recent.pop_front();
    };

    record(0, x0);
    RootRatios cur = x0;
    for (std::int64_t k = 0; k < max_iter; ++k) {
        const RootRatios nxt = step_F(cur, params);
        if (detail::sup_distance(nxt, cur) <= tol) {
            orbit.status = OrbitStatus::converged;
            orbit.limit = cur;
            orbit.iterations = k;
            break;
        }
        if (const int p = detail::detect_cycle_period(recent, nxt, tol)) {
            orbit.status = OrbitStatus::cycle;
            orbit.period = p;
            orbit.iterations = k + 1;
            for (std::size_t i = recent.size() - p; i < recent.size(); ++i)
                orbit.cycle_points.push_back(recent[i]);
            record(k + 1, nxt);
            break;
        }
        record(k + 1, nxt);
        cur = nxt;
        orbit.iterations = k + 1;
    }

    // merge decimated history with the trailing ring, dropping duplicates
    for (const auto& entry : decimated) {
        if (!ring.empty() && entry.first >= ring.front().first) break;
        orbit.states.push_back(entry);
    }
    for (const auto& entry : ring) orbit.states.push_back(entry);
    return orbit;
}

} // namespace sostree

#endif
