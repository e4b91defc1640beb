#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "knotgeo/curve.hpp"
#include "knotgeo/types.hpp"

namespace knotgeo {

struct EnergyDiagnostics {
    double max_integrand = 0.0;
    double min_pair_distance = 0.0;
    double end_collinearity_defect = 0.0;  // open curves only, radians
};

struct EnergyReport {
    double value = 0.0;
    double alpha = 2.0;
    int n = 0;
    std::string formula;  // renormalized | cosine | cross | open | sphere
    EnergyDiagnostics diagnostics;
};

namespace detail {

inline double circumradius_nd(const VecX& a, const VecX& b, const VecX& c) {
    const VecX u = a - b, v = c - b;
    const double u2 = u.squaredNorm(), v2 = v.squaredNorm();
    const double uv = u.dot(v);
    const double cross2 = u2 * v2 - uv * uv;
    if (cross2 <= 1e-24 * u2 * v2 || u2 == 0.0 || v2 == 0.0)
        return std::numeric_limits<double>::infinity();
    const double area2 = std::sqrt(cross2);  // = 2 * triangle area
    return std::sqrt(u2 * v2 * (u - v).squaredNorm()) / (2.0 * area2);
}

/// Quadrature view of a curve, normalized to unit length. Segment lengths
/// are corrected from chords to circumscribed-circle arcs so the intrinsic
/// (arc) distances track the underlying smooth curve at second order; the
/// per-vertex curvature feeds the diagonal term of the renormalized sum.
struct QuadView {
    int n = 0;
    bool closed = true;
    std::vector<VecX> v;         // vertices, scaled by 1/L
    std::vector<double> cum;     // corrected arclength positions, cum[n] = 1
    std::vector<double> w;       // quadrature weights (dual cells)
    std::vector<double> kappa;   // curvature estimate per vertex (unit-length scale)
    double raw_length = 0.0;     // corrected length before normalization
    double min_pair_dist = 0.0;  // before normalization

    double chord(int i, int j) const { return (v[i] - v[j]).norm(); }
    double arc(int i, int j) const {
        const double f = std::abs(cum[j] - cum[i]);
        return closed ? std::min(f, 1.0 - f) : f;
    }
};

template <typename VertexAt>
QuadView build_quad_view(int n, bool closed, VertexAt&& vert) {
    QuadView q;
    q.n = n;
    q.closed = closed;
    q.v.resize(n);
    for (int i = 0; i < n; ++i) q.v[i] = vert(i);
    const int nseg = closed ? n : n - 1;

    auto wrapped = [&](long i) -> const VecX& {
        if (closed) {
            long r = i % n;
            if (r < 0) r += n;
            return q.v[r];
        }
        return q.v[std::clamp<long>(i, 0, n - 1)];
    };

    // per-vertex circumradius (infinite when collinear or at open endpoints)
    std::vector<double> radius(n, std::numeric_limits<double>::infinity());
    for (int i = 0; i < n; ++i) {
        if (!closed && (i == 0 || i == n - 1)) continue;
        radius[i] = circumradius_nd(wrapped(i - 1L), q.v[i], wrapped(i + 1L));
    }

    std::vector<double> seg(nseg);
    for (int k = 0; k < nseg; ++k) {
        const double c = (wrapped(k + 1L) - q.v[k]).norm();
        double a1 = c, a2 = c;
        if (std::isfinite(radius[k])) a1 = circular_arc_length(c, radius[k]);
        const int k1 = closed ? (k + 1) % n : k + 1;
        if (std::isfinite(radius[k1])) a2 = circular_arc_length(c, radius[k1]);
        seg[k] = 0.5 * (a1 + a2);
    }
    double L = 0.0;
    for (double s : seg) L += s;
    q.raw_length = L;

    for (auto& p : q.v) p /= L;
    q.cum.resize(nseg + 1);
    q.cum[0] = 0.0;
    for (int k = 0; k < nseg; ++k) q.cum[k + 1] = q.cum[k] + seg[k] / L;

    q.w.resize(n);
    for (int i = 0; i < n; ++i) {
        const double prev = (i > 0) ? seg[i - 1] / L : (closed ? seg[nseg - 1] / L : 0.0);
        const double next = (i < nseg) ? seg[i] / L : 0.0;
        q.w[i] = 0.5 * (prev + next);
    }

    q.kappa.resize(n, 0.0);
    for (int i = 0; i < n; ++i)
        if (std::isfinite(radius[i])) q.kappa[i] = L / radius[i];

    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            best = std::min(best, (q.v[i] - q.v[j]).norm() * L);
    q.min_pair_dist = best;
    return q;
}

inline QuadView quad_view_r3(const PolyCurve& c, bool resample = true) {
    const PolyCurve u = resample ? c.resample_uniform(c.size()) : c;
    return build_quad_view(u.size(), u.closed(), [&](int i) -> VecX {
        VecX p(3);
        p << u.vertex(i).x(), u.vertex(i).y(), u.vertex(i).z();
        return p;
    });
}

inline void require_energy_curve(const QuadView& q) {
    if (q.n < 8) throw std::domain_error("energy: need at least 8 vertices");
    if (!(q.min_pair_dist > 0.0))
        throw std::domain_error("energy: curve has duplicate points");
}

inline void require_no_duplicate_points(const PolyCurve& c) {
    for (int i = 0; i < c.size(); ++i)
        for (int j = i + 1; j < c.size(); ++j)
            if ((c.vertex(i) - c.vertex(j)).squaredNorm() == 0.0)
                throw std::domain_error("energy: curve has duplicate points (vertices " +
                                        std::to_string(i) + " and " + std::to_string(j) + ")");
}

inline void require_alpha(double alpha) {
    if (!(alpha > 0.0) || alpha >= 3.0)
        throw std::domain_error("energy: alpha must lie in (0, 3); the integral diverges at 3");
}

}  // namespace detail

/// Renormalized alpha-energy of a closed knot: the pair sum of
/// chord^-alpha - arc^-alpha on the unit-length normalized curve, minus the
/// closed-form renormalization constant 2^alpha/(alpha-1) (the finite part
/// of the intrinsic arc integral; -4 at alpha = 2). The alpha = 2 value is
/// scale and Moebius invariant.
inline EnergyReport energy_alpha(const PolyCurve& c, double alpha, int threads = 0) {
    detail::require_alpha(alpha);
    if (!c.closed()) throw std::domain_error("energy_alpha: curve must be closed");
    detail::require_no_duplicate_points(c);
    const detail::QuadView q = detail::quad_view_r3(c);
    detail::require_energy_curve(q);

    const int n = q.n;
    std::vector<double> row(n, 0.0), rowmax(n, 0.0);
    parallel_rows(n, threads, [&](int i) {
        double acc = 0.0, mx = 0.0;
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            const double g =
                std::pow(q.chord(i, j), -alpha) - std::pow(q.arc(i, j), -alpha);
            acc += g * q.w[i] * q.w[j];
            mx = std::max(mx, std::abs(g));
        }
        if (alpha == 2.0) acc += (q.kappa[i] * q.kappa[i] / 12.0) * q.w[i] * q.w[i];
        row[i] = acc;
        rowmax[i] = mx;
    });

    EnergyReport rep;
    rep.value = ordered_sum(row) - std::pow(2.0, alpha) / (alpha - 1.0);
    rep.alpha = alpha;
    rep.n = n;
    rep.formula = "renormalized";
    rep.diagnostics.max_integrand = *std::max_element(rowmax.begin(), rowmax.end());
    rep.diagnostics.min_pair_distance = q.min_pair_dist;
    return rep;
}

/// Cosine formula: pair sum of (1 - cos(theta)) / chord^2 where theta is the
/// conformal angle, computed from the tangent reflected across the chord.
/// Agrees with energy_alpha(c, 2) in the refinement limit.
inline EnergyReport energy_cosine(const PolyCurve& c, int threads = 0) {
    if (!c.closed()) throw std::domain_error("energy_cosine: curve must be closed");
    detail::require_no_duplicate_points(c);
    const PolyCurve u = c.resample_uniform(c.size());
    const detail::QuadView q = detail::quad_view_r3(u, false);
    detail::require_energy_curve(q);

    const int n = q.n;
    std::vector<Vec3> tang(n);
    for (int i = 0; i < n; ++i) tang[i] = u.tangent(i);

    std::vector<double> row(n, 0.0), rowmax(n, 0.0);
    parallel_rows(n, threads, [&](int i) {
        double acc = 0.0, mx = 0.0;
        const Vec3 ti = tang[i];
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            Vec3 e(q.v[j](0) - q.v[i](0), q.v[j](1) - q.v[i](1), q.v[j](2) - q.v[i](2));
            const double c2 = e.squaredNorm();
            const Vec3 w = e / std::sqrt(c2);
            const Vec3 refl = 2.0 * ti.dot(w) * w - ti;
            const double costh = std::clamp(refl.dot(tang[j]), -1.0, 1.0);
            const double g = (1.0 - costh) / c2;
            acc += g * q.w[i] * q.w[j];
            mx = std::max(mx, std::abs(g));
        }
        row[i] = acc;
        rowmax[i] = mx;
    });

    EnergyReport rep;
    rep.value = ordered_sum(row);
    rep.alpha = 2.0;
    rep.n = n;
    rep.formula = "cosine";
    rep.diagnostics.max_integrand = *std::max_element(rowmax.begin(), rowmax.end());
    rep.diagnostics.min_pair_distance = q.min_pair_dist;
    return rep;
}

namespace detail {

/// Value-based ordering so cross_energy(a, b) and cross_energy(b, a) run
/// the identical summation and agree bitwise.
inline bool curve_precedes(const PolyCurve& a, const PolyCurve& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    for (int i = 0; i < a.size(); ++i)
        for (int k = 0; k < 3; ++k) {
            if (a.vertex(i)(k) < b.vertex(i)(k)) return true;
            if (a.vertex(i)(k) > b.vertex(i)(k)) return false;
        }
    return true;
}

}  // namespace detail

/// Cross term of a two-component link energy. No renormalization is needed:
/// the plain double sum of 1/|x-y|^2 converges for disjoint curves.
/// Symmetric in its arguments, bitwise.
inline EnergyReport cross_energy(const PolyCurve& c1, const PolyCurve& c2, int threads = 0) {
    if (!c1.closed() || !c2.closed())
        throw std::domain_error("cross_energy: curves must be closed");
    if (!detail::curve_precedes(c1, c2)) return cross_energy(c2, c1, threads);
    const double L = std::max(c1.total_length(), c2.total_length());
    if (curve_distance(c1, c2) < 1e-9 * L)
        throw std::domain_error("cross_energy: curves intersect");
    const PolyCurve a = c1.resample_uniform(c1.size());
    const PolyCurve b = c2.resample_uniform(c2.size());
    const double wa = a.total_length() / a.size();
    const double wb = b.total_length() / b.size();

    const int n = a.size();
    std::vector<double> row(n, 0.0), rowmax(n, 0.0);
    double mind = std::numeric_limits<double>::infinity();
    parallel_rows(n, threads, [&](int i) {
        double acc = 0.0, mx = 0.0;
        for (int j = 0; j < b.size(); ++j) {
            const double d2 = (a.vertex(i) - b.vertex(j)).squaredNorm();
            acc += wa * wb / d2;
            mx = std::max(mx, 1.0 / d2);
        }
        row[i] = acc;
        rowmax[i] = mx;
    });
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < b.size(); ++j)
            mind = std::min(mind, (a.vertex(i) - b.vertex(j)).norm());

    EnergyReport rep;
    rep.value = ordered_sum(row);
    rep.alpha = 2.0;
    rep.n = n;
    rep.formula = "cross";
    rep.diagnostics.max_integrand = *std::max_element(rowmax.begin(), rowmax.end());
    rep.diagnostics.min_pair_distance = mind;
    return rep;
}

/// Open (long knot) energy: same integrand as alpha = 2 with the open-arc
/// intrinsic distance and no additive constant. A straight line scores zero.
inline EnergyReport energy_open(const PolyCurve& c, int threads = 0) {
    if (c.closed()) throw std::domain_error("energy_open: curve must be open");
    const detail::QuadView q = detail::quad_view_r3(c);
    detail::require_energy_curve(q);

    const int n = q.n;
    std::vector<double> row(n, 0.0), rowmax(n, 0.0);
    parallel_rows(n, threads, [&](int i) {
        double acc = 0.0, mx = 0.0;
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            const double g = 1.0 / (q.chord(i, j) * q.chord(i, j)) -
                             1.0 / (q.arc(i, j) * q.arc(i, j));
            acc += g * q.w[i] * q.w[j];
            mx = std::max(mx, std::abs(g));
        }
        acc += (q.kappa[i] * q.kappa[i] / 12.0) * q.w[i] * q.w[i];
        row[i] = acc;
        rowmax[i] = mx;
    });

    // record how straight the truncated ends are
    auto end_defect = [&](int a, int b, int cidx) {
        const Vec3 u = (c.vertex(b) - c.vertex(a)).normalized();
        const Vec3 v = (c.vertex(cidx) - c.vertex(b)).normalized();
        return angle_between(u, v);
    };
    EnergyReport rep;
    rep.value = ordered_sum(row);
    rep.alpha = 2.0;
    rep.n = n;
    rep.formula = "open";
    rep.diagnostics.max_integrand = *std::max_element(rowmax.begin(), rowmax.end());
    rep.diagnostics.min_pair_distance = q.min_pair_dist;
    rep.diagnostics.end_collinearity_defect =
        std::max(end_defect(0, 1, 2), end_defect(c.size() - 1, c.size() - 2, c.size() - 3));
    return rep;
}

/// Spherical energy E^(alpha) on S^3: geodesic ambient distance
/// d(x,y) = arccos<x,y> against the intrinsic arc distance. No additive
/// constant and no scale normalization (S^3 has a fixed scale). A great
/// circle scores zero for every alpha.
inline EnergyReport energy_sphere(const SphereCurve& sc, double alpha, int threads = 0) {
    detail::require_alpha(alpha);
    if (!sc.closed()) throw std::domain_error("energy_sphere: curve must be closed");
    const int n = sc.size();
    if (n < 8) throw std::domain_error("energy_sphere: need at least 8 vertices");

    // corrected intrinsic segment lengths from R^4 circumcircle arcs; the
    // curve lies on S^3 so the R^4 arc equals the S^3 arc
    std::vector<double> radius(n, std::numeric_limits<double>::infinity());
    auto wrap = [&](long i) { return sc.vertex_wrapped(i); };
    for (int i = 0; i < n; ++i) {
        VecX a(4), b(4), c(4);
        a = wrap(i - 1L);
        b = wrap(i);
        c = wrap(i + 1L);
        radius[i] = detail::circumradius_nd(a, b, c);
    }
    std::vector<double> seg(n), w(n);
    for (int k = 0; k < n; ++k) {
        const double ch = (wrap(k + 1L) - wrap(k)).norm();
        double a1 = std::isfinite(radius[k]) ? circular_arc_length(ch, radius[k]) : ch;
        double a2 = std::isfinite(radius[(k + 1) % n]) ? circular_arc_length(ch, radius[(k + 1) % n]) : ch;
        seg[k] = 0.5 * (a1 + a2);
    }
    std::vector<double> cum(n + 1, 0.0);
    for (int k = 0; k < n; ++k) cum[k + 1] = cum[k] + seg[k];
    const double L = cum[n];
    for (int i = 0; i < n; ++i) w[i] = 0.5 * (seg[(i + n - 1) % n] + seg[i]);

    std::vector<double> row(n, 0.0), rowmax(n, 0.0);
    std::vector<double> kappa2(n, 0.0);  // geodesic curvature^2 in S^3
    for (int i = 0; i < n; ++i)
        if (std::isfinite(radius[i]))
            kappa2[i] = std::max(0.0, 1.0 / (radius[i] * radius[i]) - 1.0);

    double mind = std::numeric_limits<double>::infinity();
    parallel_rows(n, threads, [&](int i) {
        double acc = 0.0, mx = 0.0;
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            const double dg = SphereCurve::geodesic(wrap(i), wrap(j));
            const double f = std::abs(cum[j] - cum[i]);
            const double dk = std::min(f, L - f);
            const double g = std::pow(dg, -alpha) - std::pow(dk, -alpha);
            acc += g * w[i] * w[j];
            mx = std::max(mx, std::abs(g));
        }
        if (alpha == 2.0) acc += (kappa2[i] / 12.0) * w[i] * w[i];
        row[i] = acc;
        rowmax[i] = mx;
    });
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            mind = std::min(mind, SphereCurve::geodesic(wrap(i), wrap(j)));

    EnergyReport rep;
    rep.value = ordered_sum(row);
    rep.alpha = alpha;
    rep.n = n;
    rep.formula = "sphere";
    rep.diagnostics.max_integrand = *std::max_element(rowmax.begin(), rowmax.end());
    rep.diagnostics.min_pair_distance = mind;
    return rep;
}

/// Validation mode for the epsilon-limit definition at alpha = 2: the
/// extrinsic sum restricted to arc separation >= eps, minus the 2/eps
/// counterterm, on the unit-length curve. Converges to energy_alpha(c, 2)
/// as eps -> 0 (up to the discretization gap).
inline double energy_eps_limit(const PolyCurve& c, double eps) {
    if (!c.closed()) throw std::domain_error("energy_eps_limit: curve must be closed");
    if (!(eps > 0.0) || eps >= 0.5)
        throw std::domain_error("energy_eps_limit: eps must lie in (0, 1/2)");
    const detail::QuadView q = detail::quad_view_r3(c);
    detail::require_energy_curve(q);
    double acc = 0.0;
    for (int i = 0; i < q.n; ++i)
        for (int j = 0; j < q.n; ++j) {
            if (j == i) continue;
            if (q.arc(i, j) < eps) continue;
            const double ch = q.chord(i, j);
            acc += q.w[i] * q.w[j] / (ch * ch);
        }
    return acc - 2.0 / eps;
}

}  // namespace knotgeo
