#ifndef SOSTREE_NEWTON2D_HPP
#define SOSTREE_NEWTON2D_HPP

// Damped Newton iteration on the open positive quadrant, plus the analytic
// Jacobian of the ratio map. Shared by the 2-D fixed-point and period-2
// searches.

#include <cmath>
#include <optional>

#include "sostree/params.hpp"
#include "sostree/recursion.hpp"

namespace sostree::detail {

struct Vec2 {
    double x;
    double y;
};

struct Mat2 {
    double a11, a12, a21, a22;
    double det() const { return a11 * a22 - a12 * a21; }
};

inline double sup_norm(const Vec2& v) { return std::max(std::abs(v.x), std::abs(v.y)); }

// Raw evaluation of F on doubles; callers keep iterates inside the quadrant.
inline Vec2 eval_ratio_map(const Vec2& p, const ThetaParams& th) {
    const RootRatios r = step_F(RootRatios(p.x, p.y), th);
    return {r.u, r.v};
}

// Analytic Jacobian of F. With shared denominator Dn and numerators Nu, Nv:
// d(N/Dn)/dx = (N_x Dn - N Dn_x) / Dn^2.
inline Mat2 jacobian_ratio_map(const Vec2& p, const ThetaParams& th) {
    const double t = th.theta, t1 = th.theta1;
    const double u = p.x, v = p.y;
    const double t2 = t * t, t3 = t2 * t, t4 = t2 * t2, t1sq = t1 * t1;

    const double nu = t2 + 2 * t * t1 * u + 2 * t2 * t1sq * v + u * u + 2 * t * t1 * u * v +
                      t2 * v * v;
    const double nv = t4 + 2 * t3 * t1 * u + 2 * t2 * t1sq * v + t2 * u * u +
                      2 * t * t1 * u * v + v * v;
    const double dn = 1.0 + 2 * t * t1 * u + 2 * t2 * t1sq * v + t2 * u * u +
                      2 * t3 * t1 * u * v + t4 * v * v;

    const double nu_u = 2 * t * t1 + 2 * u + 2 * t * t1 * v;
    const double nu_v = 2 * t2 * t1sq + 2 * t * t1 * u + 2 * t2 * v;
    const double nv_u = 2 * t3 * t1 + 2 * t2 * u + 2 * t * t1 * v;
    const double nv_v = 2 * t2 * t1sq + 2 * t * t1 * u + 2 * v;
    const double dn_u = 2 * t * t1 + 2 * t2 * u + 2 * t3 * t1 * v;
    const double dn_v = 2 * t2 * t1sq + 2 * t3 * t1 * u + 2 * t4 * v;

    const double inv2 = 1.0 / (dn * dn);
    return {(nu_u * dn - nu * dn_u) * inv2, (nu_v * dn - nu * dn_v) * inv2,
            (nv_u * dn - nv * dn_u) * inv2, (nv_v * dn - nv * dn_v) * inv2};
}

struct NewtonDiagnostics {
    int singular_jacobians = 0;
    int stalled = 0;
};

// Damped Newton for G(x) = 0 with backtracking line search confined to the
// positive quadrant. Returns nullopt when the seed does not converge.
template <class Fn, class Jac>
std::optional<Vec2> damped_newton(Fn&& G, Jac&& J, Vec2 seed, double tol, int max_iter = 100,
                                  NewtonDiagnostics* diag = nullptr) {
    Vec2 x = seed;
    if (x.x <= 0.0 || x.y <= 0.0) return std::nullopt;
    Vec2 g = G(x);
    for (int it = 0; it < max_iter; ++it) {
        const double gn = sup_norm(g);
        if (gn <= tol) return x;

        const Mat2 m = J(x);
        const double det = m.det();
        const double scale = std::abs(m.a11) + std::abs(m.a12) + std::abs(m.a21) +
                             std::abs(m.a22) + 1e-300;
        if (std::abs(det) <= 1e-14 * scale * scale) {
            if (diag) ++diag->singular_jacobians;
            return std::nullopt;
        }
        const Vec2 delta{(-g.x * m.a22 + g.y * m.a12) / det,
                         (-m.a11 * g.y + m.a21 * g.x) / det};

        double lambda = 1.0;
        bool moved = false;
        for (int half = 0; half < 40; ++half, lambda *= 0.5) {
            const Vec2 cand{x.x + lambda * delta.x, x.y + lambda * delta.y};
            if (cand.x <= 0.0 || cand.y <= 0.0 || !std::isfinite(cand.x) || !std::isfinite(cand.y))
                continue;
            const Vec2 gc = G(cand);
            if (!std::isfinite(gc.x) || !std::isfinite(gc.y)) continue;
            if (sup_norm(gc) < gn) {
                x = cand;
                g = gc;
                moved = true;
                break;
            }
        }
        if (!moved) {
            if (diag) ++diag->stalled;
            return std::nullopt;
        }
    }
    return sup_norm(g) <= tol ? std::optional<Vec2>(x) : std::nullopt;
}

} // namespace sostree::detail

#endif
