#pragma once

#include <cmath>
#include <limits>
#include <optional>

#include "knotgeo/types.hpp"

namespace knotgeo {

/// Circle through three points, or the degenerate (collinear) case.
struct Circumcircle {
    Vec3 center{0, 0, 0};
    double radius = std::numeric_limits<double>::infinity();
    Vec3 normal{0, 0, 1};   // plane normal; undefined direction when collinear
    bool collinear = false;
};

/// Circumscribed circle of the triangle (a, b, c). Points within a relative
/// sine of 1e-12 of collinear are reported as such.
inline Circumcircle circumcircle(const Vec3& a, const Vec3& b, const Vec3& c) {
    const Vec3 u = a - b;
    const Vec3 v = c - b;
    const Vec3 w = u.cross(v);
    const double w2 = w.squaredNorm();
    const double scale2 = u.squaredNorm() * v.squaredNorm();
    Circumcircle out;
    if (w2 <= 1e-24 * scale2 || scale2 == 0.0) {
        out.collinear = true;
        return out;
    }
    out.center = b + (u.squaredNorm() * v - v.squaredNorm() * u).cross(w) / (2.0 * w2);
    out.radius = (b - out.center).norm();
    out.normal = w / std::sqrt(w2);
    return out;
}

/// Arc length between two consecutive samples subtending chord `chord` on a
/// circle of radius `radius`; falls back to the chord for a line.
inline double circular_arc_length(double chord, double radius) {
    if (!std::isfinite(radius) || radius <= 0.0) return chord;
    double half = chord / (2.0 * radius);
    if (half >= 1.0) return M_PI * radius;  // antipodal or degenerate sampling
    return 2.0 * radius * std::asin(half);
}

/// Minimum distance between segments [a0,a1] and [b0,b1].
inline double segment_segment_distance(const Vec3& a0, const Vec3& a1, const Vec3& b0,
                                       const Vec3& b1) {
    const Vec3 d1 = a1 - a0;
    const Vec3 d2 = b1 - b0;
    const Vec3 r = a0 - b0;
    const double a = d1.squaredNorm();
    const double e = d2.squaredNorm();
    const double f = d2.dot(r);
    double s = 0.0, t = 0.0;
    if (a <= 1e-30 && e <= 1e-30) {
        return r.norm();
    }
    if (a <= 1e-30) {
        t = std::clamp(f / e, 0.0, 1.0);
    } else {
        const double c = d1.dot(r);
        if (e <= 1e-30) {
            s = std::clamp(-c / a, 0.0, 1.0);
        } else {
            const double b = d1.dot(d2);
            const double denom = a * e - b * b;
            if (denom > 1e-14 * a * e) {
                s = std::clamp((b * f - c * e) / denom, 0.0, 1.0);
            }
            t = (b * s + f) / e;
            if (t < 0.0) {
                t = 0.0;
                s = std::clamp(-c / a, 0.0, 1.0);
            } else if (t > 1.0) {
                t = 1.0;
                s = std::clamp((b - c) / a, 0.0, 1.0);
            }
        }
    }
    return (a0 + s * d1 - (b0 + t * d2)).norm();
}

/// Unsigned angle between two vectors, in [0, pi].
inline double angle_between(const Vec3& a, const Vec3& b) {
    return std::atan2(a.cross(b).norm(), a.dot(b));
}

}  // namespace knotgeo
