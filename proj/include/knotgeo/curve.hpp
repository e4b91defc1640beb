#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "knotgeo/geometry.hpp"
#include "knotgeo/types.hpp"

namespace knotgeo {

/// Discrete curve: an ordered vertex list in R^3, closed or open, with a
/// cached cumulative arclength table. Immutable after construction; all
/// operations are pure.
class PolyCurve {
public:
    PolyCurve(std::vector<Vec3> vertices, bool closed)
        : verts_(std::move(vertices)), closed_(closed) {
        const int n = static_cast<int>(verts_.size());
        if (n < 2) throw std::invalid_argument("PolyCurve: need at least 2 vertices");
        cum_.resize(segment_count() + 1);
        cum_[0] = 0.0;
        for (int k = 0; k < segment_count(); ++k) {
            const double len = (vertex_wrapped(k + 1) - verts_[k]).norm();
            if (len <= 0.0)
                throw std::invalid_argument("PolyCurve: consecutive vertices coincide at index " +
                                            std::to_string(k));
            cum_[k + 1] = cum_[k] + len;
        }
    }

    static PolyCurve make_closed(std::vector<Vec3> v) { return PolyCurve(std::move(v), true); }
    static PolyCurve make_open(std::vector<Vec3> v) { return PolyCurve(std::move(v), false); }

    int size() const { return static_cast<int>(verts_.size()); }
    bool closed() const { return closed_; }
    int segment_count() const { return closed_ ? size() : size() - 1; }

    const std::vector<Vec3>& vertices() const { return verts_; }
    const Vec3& vertex(int i) const { return verts_.at(i); }
    Vec3 vertex_wrapped(long i) const {
        const long n = size();
        if (closed_) {
            long r = i % n;
            if (r < 0) r += n;
            return verts_[r];
        }
        return verts_.at(std::clamp<long>(i, 0, n - 1));
    }

    double total_length() const { return cum_.back(); }
    /// Arclength position of vertex i (0 for the first vertex).
    double arclen(int i) const { return cum_.at(i); }
    double segment_length(int k) const { return cum_.at(k + 1) - cum_.at(k); }

    /// Shorter arc between vertices of a closed curve; for open curves the
    /// along-curve distance. Errors on i == j.
    double arc_distance(int i, int j) const {
        if (i == j) throw std::invalid_argument("arc_distance: i == j");
        const double f = std::abs(cum_.at(j) - cum_.at(i));
        if (!closed_) return f;
        return std::min(f, total_length() - f);
    }

    /// Unit tangent at vertex i: the tangent of the circle through vertices
    /// i-1, i, i+1, oriented along the vertex order. Collinear neighborhoods
    /// fall back to the centered difference; open-curve endpoints use the
    /// end segment direction.
    Vec3 tangent(int i) const {
        if (!closed_) {
            if (i == 0) return (verts_[1] - verts_[0]).normalized();
            if (i == size() - 1) return (verts_[i] - verts_[i - 1]).normalized();
        }
        const Vec3 a = vertex_wrapped(static_cast<long>(i) - 1);
        const Vec3 b = verts_.at(i);
        const Vec3 c = vertex_wrapped(static_cast<long>(i) + 1);
        const Circumcircle cc = circumcircle(a, b, c);
        if (cc.collinear) return (c - a).normalized();
        Vec3 t = cc.normal.cross(b - cc.center).normalized();
        if (t.dot(c - a) < 0.0) t = -t;
        return t;
    }

    /// n vertices at equal arclength spacing along the polyline. Closed
    /// curves keep the start vertex, drop the duplicate endpoint, and are
    /// rescaled about their centroid so the total length is preserved
    /// (plain interpolation cuts corners and would shrink the polygon);
    /// open curves keep both ends.
    PolyCurve resample_uniform(int n) const {
        if (n < 8) throw std::invalid_argument("resample_uniform: n must be >= 8");
        const double L = total_length();
        std::vector<Vec3> out;
        out.reserve(n);
        const double step = closed_ ? L / n : L / (n - 1);
        int seg = 0;
        for (int k = 0; k < n; ++k) {
            const double target = std::min(k * step, L);
            while (seg + 1 < static_cast<int>(cum_.size()) - 1 && cum_[seg + 1] < target) ++seg;
            const double t = (target - cum_[seg]) / (cum_[seg + 1] - cum_[seg]);
            out.push_back(verts_[seg] + t * (vertex_wrapped(seg + 1) - verts_[seg]));
        }
        PolyCurve res(std::move(out), closed_);
        if (!closed_) return res;
        const double scale = L / res.total_length();
        if (scale == 1.0) return res;
        Vec3 centroid = Vec3::Zero();
        for (const auto& p : res.verts_) centroid += p;
        centroid /= static_cast<double>(n);
        for (auto& p : res.verts_) p = centroid + scale * (p - centroid);
        for (auto& c : res.cum_) c *= scale;
        return res;
    }

    /// Minimum distance between non-adjacent segments; the discrete proxy
    /// for distance to a self-crossing.
    double min_self_distance() const {
        const int m = segment_count();
        double best = std::numeric_limits<double>::infinity();
        for (int i = 0; i < m; ++i) {
            for (int j = i + 2; j < m; ++j) {
                if (closed_ && i == 0 && j == m - 1) continue;  // shares vertex 0
                best = std::min(best, segment_segment_distance(verts_[i], vertex_wrapped(i + 1),
                                                               verts_[j], vertex_wrapped(j + 1)));
            }
        }
        return best;
    }

    PolyCurve transformed(const std::function<Vec3(const Vec3&)>& f) const {
        std::vector<Vec3> out;
        out.reserve(verts_.size());
        for (const auto& v : verts_) out.push_back(f(v));
        return PolyCurve(std::move(out), closed_);
    }

private:
    std::vector<Vec3> verts_;
    bool closed_;
    std::vector<double> cum_;
};

inline double total_length(const PolyCurve& c) { return c.total_length(); }

/// Minimum distance between two curves (segment based).
inline double curve_distance(const PolyCurve& a, const PolyCurve& b) {
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < a.segment_count(); ++i)
        for (int j = 0; j < b.segment_count(); ++j)
            best = std::min(best,
                            segment_segment_distance(a.vertex(i), a.vertex_wrapped(i + 1),
                                                     b.vertex(j), b.vertex_wrapped(j + 1)));
    return best;
}

/// A link: closed components with positive pairwise distance.
class LinkSet {
public:
    explicit LinkSet(std::vector<PolyCurve> components) : comps_(std::move(components)) {
        for (const auto& c : comps_)
            if (!c.closed()) throw std::invalid_argument("LinkSet: all components must be closed");
        for (size_t i = 0; i < comps_.size(); ++i)
            for (size_t j = i + 1; j < comps_.size(); ++j)
                if (curve_distance(comps_[i], comps_[j]) <= 0.0)
                    throw std::invalid_argument("LinkSet: components " + std::to_string(i) +
                                                " and " + std::to_string(j) + " intersect");
    }
    int count() const { return static_cast<int>(comps_.size()); }
    const PolyCurve& component(int i) const { return comps_.at(i); }

private:
    std::vector<PolyCurve> comps_;
};

/// Closed polyline on the unit 3-sphere in R^4; arclength is measured with
/// geodesic (great-arc) segment lengths.
class SphereCurve {
public:
    SphereCurve(std::vector<Vec4> vertices, bool closed)
        : verts_(std::move(vertices)), closed_(closed) {
        const int n = static_cast<int>(verts_.size());
        if (n < 2) throw std::invalid_argument("SphereCurve: need at least 2 vertices");
        for (int i = 0; i < n; ++i)
            if (std::abs(verts_[i].norm() - 1.0) > 1e-9)
                throw std::domain_error("SphereCurve: vertex " + std::to_string(i) +
                                        " is not on the unit sphere");
        cum_.resize(segment_count() + 1);
        cum_[0] = 0.0;
        for (int k = 0; k < segment_count(); ++k) {
            const double g = geodesic(verts_[k], vertex_wrapped(k + 1));
            if (g <= 0.0)
                throw std::invalid_argument("SphereCurve: consecutive vertices coincide");
            cum_[k + 1] = cum_[k] + g;
        }
    }

    static double geodesic(const Vec4& a, const Vec4& b) {
        return std::acos(std::clamp(a.dot(b), -1.0, 1.0));
    }

    int size() const { return static_cast<int>(verts_.size()); }
    bool closed() const { return closed_; }
    int segment_count() const { return closed_ ? size() : size() - 1; }
    const Vec4& vertex(int i) const { return verts_.at(i); }
    Vec4 vertex_wrapped(long i) const {
        const long n = size();
        long r = i % n;
        if (r < 0) r += n;
        return verts_[closed_ ? r : std::clamp<long>(i, 0, n - 1)];
    }
    double total_length() const { return cum_.back(); }
    double arclen(int i) const { return cum_.at(i); }

    double arc_distance(int i, int j) const {
        if (i == j) throw std::invalid_argument("arc_distance: i == j");
        const double f = std::abs(cum_.at(j) - cum_.at(i));
        if (!closed_) return f;
        return std::min(f, total_length() - f);
    }

private:
    std::vector<Vec4> verts_;
    bool closed_;
    std::vector<double> cum_;
};

}  // namespace knotgeo
