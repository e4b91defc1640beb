#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "knotgeo/curve.hpp"
#include "knotgeo/types.hpp"

namespace knotgeo {

/// Inversion in the sphere of the given center and radius:
/// p maps to the point on the ray center->p with |Cp|*|Cp'| = r^2.
struct SphereInversion {
    Vec3 center{0, 0, 0};
    double radius = 1.0;

    SphereInversion() = default;
    SphereInversion(const Vec3& c, double r) : center(c), radius(r) {
        if (!(r > 0.0)) throw std::invalid_argument("SphereInversion: radius must be positive");
    }
};

/// Composition of inversions, applied left to right. Empty = identity.
using MoebiusMap = std::vector<SphereInversion>;

inline MoebPoint invert_point(const SphereInversion& inv, const MoebPoint& p) {
    if (p.at_infinity) return MoebPoint::finite(inv.center);
    const Vec3 d = p.p - inv.center;
    const double d2 = d.squaredNorm();
    if (d2 == 0.0) return MoebPoint::infinity();
    return MoebPoint::finite(inv.center + (inv.radius * inv.radius / d2) * d);
}

inline Vec3 invert_point(const SphereInversion& inv, const Vec3& p) {
    const MoebPoint out = invert_point(inv, MoebPoint::finite(p));
    if (out.at_infinity) throw std::domain_error("invert_point: point at inversion center");
    return out.p;
}

inline MoebPoint apply_map(const MoebiusMap& m, MoebPoint p) {
    for (const auto& inv : m) p = invert_point(inv, p);
    return p;
}

/// Vertexwise image of a curve. A vertex within 1e-12 of an inversion center
/// (relative to the inversion radius) would map to infinity and is an error.
inline PolyCurve apply_map(const MoebiusMap& m, const PolyCurve& c) {
    std::vector<Vec3> out;
    out.reserve(c.size());
    for (int i = 0; i < c.size(); ++i) {
        Vec3 p = c.vertex(i);
        for (const auto& inv : m) {
            const Vec3 d = p - inv.center;
            const double dist = d.norm();
            if (dist <= 1e-12 * inv.radius)
                throw std::domain_error("apply_map: vertex " + std::to_string(i) +
                                        " hits an inversion center");
            p = inv.center + (inv.radius * inv.radius / (dist * dist)) * d;
        }
        out.push_back(p);
    }
    return PolyCurve(std::move(out), c.closed());
}

// Stereographic convention, fixed project-wide: pole at (0,0,0,1) on S^3,
// projecting to the equatorial R^3.

inline Vec4 lift_to_sphere(const Vec3& p) {
    const double r2 = p.squaredNorm();
    return Vec4(2.0 * p.x(), 2.0 * p.y(), 2.0 * p.z(), r2 - 1.0) / (r2 + 1.0);
}

inline MoebPoint project_to_r3(const Vec4& q) {
    const double denom = 1.0 - q(3);
    if (std::abs(denom) < 1e-15) return MoebPoint::infinity();
    return MoebPoint::finite(Vec3(q(0), q(1), q(2)) / denom);
}

inline SphereCurve lift_curve(const PolyCurve& c) {
    std::vector<Vec4> out;
    out.reserve(c.size());
    for (int i = 0; i < c.size(); ++i) out.push_back(lift_to_sphere(c.vertex(i)).normalized());
    return SphereCurve(std::move(out), c.closed());
}

/// Light cone embedding of S^3 in the Minkowski space R^5_1: q -> (1, q).
inline VecX light_cone_lift(const Vec4& q) {
    if (std::abs(q.norm() - 1.0) > 1e-9)
        throw std::domain_error("light_cone_lift: input is not on the unit sphere");
    VecX v(5);
    v << 1.0, q(0), q(1), q(2), q(3);
    return v;
}

}  // namespace knotgeo
