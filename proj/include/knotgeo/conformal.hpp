#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

#include "knotgeo/curve.hpp"
#include "knotgeo/geometry.hpp"
#include "knotgeo/types.hpp"

namespace knotgeo {

/// Oriented circle, or a line when the construction degenerates
/// (infinite radius).
struct CircleGeom {
    Vec3 center{0, 0, 0};
    double radius = std::numeric_limits<double>::infinity();
    Vec3 normal{0, 0, 1};  // plane normal; rotation sense = right hand rule
    bool is_line = false;
    Vec3 line_point{0, 0, 0};
    Vec3 line_dir{1, 0, 0};
};

/// Per-pair record of the infinitesimal cross ratio: |Omega|, its argument
/// (the conformal angle), and the real/imaginary densities per unit
/// parameter squared.
struct CrossRatioSample {
    int i = 0, j = 0;
    double absDensity = 0.0;  // 1/|x-y|^2
    double theta = 0.0;       // conformal angle in [0, pi]
    double reDensity = 0.0;   // cos(theta)/|x-y|^2
    double imDensity = 0.0;   // sin(theta)/|x-y|^2, non-negative
};

/// Result of the bitangent sphere construction. Pairs of a planar
/// configuration give the plane itself; cocircular pairs (the two tangent
/// circles coincide) have no unique bitangent sphere and are tagged.
struct BitangentSphere {
    enum class Kind { sphere, plane, cocircular };
    Kind kind = Kind::sphere;
    Vec3 center{0, 0, 0};
    double radius = 0.0;
    Vec3 plane_normal{0, 0, 1};  // for Kind::plane (plane through the pair)
    int orientation = +1;
};

/// Oriented circle tangent to the curve at vertex i (direction = curve
/// tangent) passing through vertex j. Degenerates to the chord line when
/// the tangent is parallel to the chord.
inline CircleGeom tangent_circle_points(const Vec3& x, const Vec3& tx, const Vec3& y) {
    const Vec3 e = y - x;
    const double elen = e.norm();
    if (elen == 0.0) throw std::invalid_argument("tangent_circle: coincident points");
    CircleGeom out;
    const Vec3 eperp = e - e.dot(tx) * tx;
    const double p = eperp.norm();
    if (p <= 1e-12 * elen) {
        out.is_line = true;
        out.line_point = x;
        out.line_dir = (e.dot(tx) >= 0.0 ? tx : Vec3(-tx));
        return out;
    }
    const Vec3 m = eperp / p;
    const double d = e.squaredNorm() / (2.0 * p);
    out.center = x + d * m;
    out.radius = d;
    out.normal = ((x - out.center).cross(tx)).normalized();
    out.is_line = false;
    return out;
}

inline CircleGeom tangent_circle(const PolyCurve& c, int i, int j) {
    if (i == j) throw std::invalid_argument("tangent_circle: i == j");
    return tangent_circle_points(c.vertex(i), c.tangent(i), c.vertex(j));
}

/// Travel direction of the circle tangent at x through y, evaluated at y:
/// the reflection of the tangent across the unit chord. Validated against
/// the explicit circle construction in the test suite.
inline Vec3 tangent_circle_dir_at_far_point(const Vec3& tx, const Vec3& chord_unit) {
    return 2.0 * tx.dot(chord_unit) * chord_unit - tx;
}

inline double conformal_angle_points(const Vec3& x, const Vec3& tx, const Vec3& y,
                                     const Vec3& ty) {
    const Vec3 e = y - x;
    const double elen = e.norm();
    if (elen == 0.0) throw std::invalid_argument("conformal_angle: coincident points");
    const Vec3 w = e / elen;
    const Vec3 dir = tangent_circle_dir_at_far_point(tx, w);
    return angle_between(dir, ty);
}

/// Conformal angle between vertices i and j: the angle at v_j between the
/// circle tangent at v_i through v_j and the curve tangent at v_j.
/// Always in [0, pi]; zero on a round circle.
inline double conformal_angle(const PolyCurve& c, int i, int j) {
    if (i == j) throw std::invalid_argument("conformal_angle: i == j");
    return conformal_angle_points(c.vertex(i), c.tangent(i), c.vertex(j), c.tangent(j));
}

/// Cross-curve variant (x on c1, y on c2), used for link integrands.
inline double conformal_angle(const PolyCurve& c1, int i, const PolyCurve& c2, int j) {
    return conformal_angle_points(c1.vertex(i), c1.tangent(i), c2.vertex(j), c2.tangent(j));
}

inline CrossRatioSample cross_ratio_sample_points(const Vec3& x, const Vec3& tx, const Vec3& y,
                                                  const Vec3& ty, int i, int j) {
    CrossRatioSample s;
    s.i = i;
    s.j = j;
    const double d2 = (x - y).squaredNorm();
    if (d2 == 0.0) throw std::invalid_argument("cross_ratio_sample: coincident points");
    s.absDensity = 1.0 / d2;
    s.theta = conformal_angle_points(x, tx, y, ty);
    s.reDensity = std::cos(s.theta) * s.absDensity;
    s.imDensity = std::sin(s.theta) * s.absDensity;
    return s;
}

inline CrossRatioSample cross_ratio_sample(const PolyCurve& c, int i, int j) {
    if (i == j) throw std::invalid_argument("cross_ratio_sample: i == j");
    return cross_ratio_sample_points(c.vertex(i), c.tangent(i), c.vertex(j), c.tangent(j), i, j);
}

inline CrossRatioSample cross_ratio_sample(const PolyCurve& c1, int i, const PolyCurve& c2,
                                           int j) {
    return cross_ratio_sample_points(c1.vertex(i), c1.tangent(i), c2.vertex(j), c2.tangent(j), i,
                                     j);
}

/// The 2-sphere tangent to the curve at both v_i and v_j: the unique sphere
/// containing both tangent circles, a plane for planar configurations, or a
/// tagged degenerate result when the tangent circles coincide.
inline BitangentSphere bitangent_sphere(const PolyCurve& c, int i, int j) {
    if (i == j) throw std::invalid_argument("bitangent_sphere: i == j");
    const Vec3 x = c.vertex(i), y = c.vertex(j);
    const Vec3 u = c.tangent(i), v = c.tangent(j);
    const Vec3 e = y - x;
    const double elen = e.norm();
    if (elen == 0.0) throw std::invalid_argument("bitangent_sphere: coincident points");

    BitangentSphere out;
    out.orientation = (u.cross(e).dot(v) >= 0.0) ? +1 : -1;

    // center O satisfies (O-x).u = 0, (O-y).v = 0, |O-x| = |O-y|
    Eigen::Matrix3d M;
    M.row(0) = u.transpose();
    M.row(1) = v.transpose();
    M.row(2) = 2.0 * e.transpose();
    Vec3 rhs(u.dot(x), v.dot(y), y.squaredNorm() - x.squaredNorm());

    const double det = M.determinant();
    const double scale = elen;  // rows u, v are unit; e row carries the scale
    if (std::abs(det) <= 1e-10 * 2.0 * scale) {
        // planar configuration: u, v, e linearly dependent
        const double th = conformal_angle_points(x, u, y, v);
        if (th < 1e-9 || th > M_PI - 1e-9) {
            // tangent circles coincide (or mirror): no unique sphere
            out.kind = BitangentSphere::Kind::cocircular;
            return out;
        }
        out.kind = BitangentSphere::Kind::plane;
        Vec3 nrm = u.cross(e);
        if (nrm.norm() <= 1e-12 * elen) nrm = v.cross(e);
        if (nrm.norm() <= 1e-12 * elen) {
            out.kind = BitangentSphere::Kind::cocircular;
            return out;
        }
        out.plane_normal = nrm.normalized();
        return out;
    }
    out.kind = BitangentSphere::Kind::sphere;
    out.center = M.partialPivLu().solve(rhs);
    out.radius = (x - out.center).norm();
    return out;
}

}  // namespace knotgeo
