#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>

#include "knotgeo/conformal.hpp"
#include "knotgeo/curve.hpp"
#include "knotgeo/moebius.hpp"
#include "knotgeo/types.hpp"

namespace knotgeo {

/// Point of T*S^m: a base point on the sphere and a covector, identified
/// with a tangent vector of R^(m+1) via the round metric. covector _|_ base.
struct CotangentPoint {
    VecX base;
    VecX covector;
};

/// The identification S^m x S^m minus the diagonal -> T*S^m:
/// y is stereographically projected from x onto the hyperplane through the
/// origin orthogonal to x, and the image is read as a covector at x.
/// The antipode of x projects to the zero covector.
inline CotangentPoint phi_identify(const VecX& x, const VecX& y) {
    if (x.size() != y.size()) throw std::invalid_argument("phi_identify: dimension mismatch");
    if (std::abs(x.norm() - 1.0) > 1e-9 || std::abs(y.norm() - 1.0) > 1e-9)
        throw std::domain_error("phi_identify: points must be on the unit sphere");
    const double xy = x.dot(y);
    if (1.0 - xy < 1e-14) throw std::invalid_argument("phi_identify: x == y");
    CotangentPoint out;
    out.base = x;
    out.covector = x + (y - x) / (1.0 - xy);
    return out;
}

/// Inverse of the projection leg of phi: the sphere point whose projection
/// from x is the covector u (u _|_ x).
inline VecX phi_unproject(const VecX& x, const VecX& u) {
    const double u2 = u.squaredNorm();
    return ((u2 - 1.0) * x + 2.0 * u) / (u2 + 1.0);
}

namespace detail {

/// Stereographic chart on S^m from the pole +-e_m (last axis), covering
/// everything but the pole. coords(x)_k = x_k / (1 -+ x_m).
struct SphereChart {
    int m;          // sphere dimension
    int pole_sign;  // +1: project from +e_m, -1: from -e_m

    VecX coords(const VecX& x) const {
        const double denom = 1.0 - pole_sign * x(m);
        VecX q(m);
        for (int k = 0; k < m; ++k) q(k) = x(k) / denom;
        return q;
    }

    /// Ambient gradient rows of the chart functions at x.
    MatX jacobian(const VecX& x) const {
        const double denom = 1.0 - pole_sign * x(m);
        MatX J = MatX::Zero(m, m + 1);
        for (int k = 0; k < m; ++k) {
            J(k, k) = 1.0 / denom;
            J(k, m) = pole_sign * x(k) / (denom * denom);
        }
        return J;
    }
};

inline SphereChart pick_chart(const VecX& x) {
    const int m = static_cast<int>(x.size()) - 1;
    // switch charts when within 30 degrees of the active pole
    if (x(m) > std::cos(M_PI / 6.0)) return {m, -1};
    return {m, +1};
}

/// Momentum coordinates of the covector u at x in the given chart: p with
/// u = sum p_k * (tangential gradient of q_k).
inline VecX momentum_coords(const SphereChart& chart, const VecX& x, const VecX& u) {
    const int m = chart.m;
    const MatX J = chart.jacobian(x);
    const MatX P = MatX::Identity(m + 1, m + 1) - x * x.transpose();
    const MatX G = J * P;  // tangential gradients as rows
    const MatX gram = G * G.transpose();
    return gram.ldlt().solve(G * u);
}

}  // namespace detail

/// Density of the pulled-back canonical symplectic form of T*S^m against
/// ds dt on the surface (x(s), phi_x(y(t))), by 5-point Richardson stencils
/// of the local (q, p) coordinates. The chart is chosen from x(s0) and held
/// fixed across the stencil; force_pole = +-1 overrides the choice (used by
/// the chart-independence checks).
inline double symplectic_pullback_density(const std::function<VecX(double)>& xs,
                                          const std::function<VecX(double)>& yt, double s0,
                                          double t0, double hs, double ht, int force_pole = 0) {
    const VecX x0 = xs(s0);
    const detail::SphereChart chart =
        force_pole == 0 ? detail::pick_chart(x0)
                        : detail::SphereChart{static_cast<int>(x0.size()) - 1, force_pole};
    const int m = chart.m;

    auto qp = [&](double s, double t, VecX& q, VecX& p) {
        const VecX x = xs(s);
        const VecX y = yt(t);
        const CotangentPoint cp = phi_identify(x, y);
        q = chart.coords(x);
        p = detail::momentum_coords(chart, x, cp.covector);
    };

    // 5-point first derivatives in s and t of both q and p
    VecX qp1, pp1, qm1, pm1, qp2, pp2, qm2, pm2;
    qp(s0 + hs, t0, qp1, pp1);
    qp(s0 - hs, t0, qm1, pm1);
    qp(s0 + 2 * hs, t0, qp2, pp2);
    qp(s0 - 2 * hs, t0, qm2, pm2);
    const VecX qs = (8.0 * (qp1 - qm1) - (qp2 - qm2)) / (12.0 * hs);
    const VecX ps = (8.0 * (pp1 - pm1) - (pp2 - pm2)) / (12.0 * hs);
    qp(s0, t0 + ht, qp1, pp1);
    qp(s0, t0 - ht, qm1, pm1);
    qp(s0, t0 + 2 * ht, qp2, pp2);
    qp(s0, t0 - 2 * ht, qm2, pm2);
    const VecX qt = (8.0 * (qp1 - qm1) - (qp2 - qm2)) / (12.0 * ht);
    const VecX pt = (8.0 * (pp1 - pm1) - (pp2 - pm2)) / (12.0 * ht);

    // omega = sum dq_k ^ dp_k on (d/ds, d/dt)
    double density = 0.0;
    for (int k = 0; k < m; ++k) density += qs(k) * pt(k) - qt(k) * ps(k);
    return density;
}

/// Pullback density for a discrete knot lifted to S^3, at the vertex pair
/// (i, j), differentiated along the curve at vertex spacing. The density is
/// per unit (R^3 arclength)^2, matching the conformal module densities.
inline double canonical_form_pullback(const PolyCurve& c, int i, int j) {
    if (!c.closed()) throw std::invalid_argument("canonical_form_pullback: curve must be closed");
    const int n = c.size();
    const int sep = std::min((j - i + n) % n, (i - j + n) % n);
    if (sep < 3)
        throw std::invalid_argument("canonical_form_pullback: pair too close for the stencil");

    const double L = c.total_length();
    const double h = L / n;
    auto lift_at = [&](long k) -> VecX {
        const Vec4 v = lift_to_sphere(c.vertex_wrapped(k)).normalized();
        VecX out(4);
        out << v(0), v(1), v(2), v(3);
        return out;
    };
    // map the FD parameter to vertex index steps
    auto xs = [&](double s) { return lift_at(std::lround(s)); };
    auto yt = [&](double t) { return lift_at(std::lround(t)); };
    const double density_per_step =
        symplectic_pullback_density(xs, yt, static_cast<double>(i), static_cast<double>(j), 1.0,
                                    1.0);
    return density_per_step / (h * h);
}

/// Double sum of the real-part density over a 2-component link grid.
/// Re Omega is exact, so the signed total vanishes up to discretization.
inline double exactness_integral(const LinkSet& link, double* abs_sum = nullptr) {
    if (link.count() != 2) throw std::invalid_argument("exactness_integral: need 2 components");
    const PolyCurve& a = link.component(0);
    const PolyCurve& b = link.component(1);
    const double wa = a.total_length() / a.size();
    const double wb = b.total_length() / b.size();
    double signed_total = 0.0, abs_total = 0.0;
    for (int i = 0; i < a.size(); ++i)
        for (int j = 0; j < b.size(); ++j) {
            const CrossRatioSample s = cross_ratio_sample(a, i, b, j);
            signed_total += s.reDensity * wa * wb;
            abs_total += std::abs(s.reDensity) * wa * wb;
        }
    if (abs_sum) *abs_sum = abs_total;
    return signed_total;
}

}  // namespace knotgeo
