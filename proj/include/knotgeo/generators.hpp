#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "knotgeo/curve.hpp"

namespace knotgeo {

/// Samples a closed parametric curve (period 2*pi) at n points of equal
/// arclength. The parameter positions are found on a refined table so the
/// emitted vertices lie on the smooth curve itself.
inline PolyCurve sample_uniform_arclength(const std::function<Vec3(double)>& gamma, int n,
                                          int refine = 64) {
    const int m = n * refine;
    std::vector<Vec3> fine(m);
    for (int i = 0; i < m; ++i) fine[i] = gamma(2.0 * M_PI * i / m);
    std::vector<double> cum(m + 1, 0.0);
    for (int i = 0; i < m; ++i) cum[i + 1] = cum[i] + (fine[(i + 1) % m] - fine[i]).norm();
    const double L = cum[m];
    std::vector<Vec3> out(n);
    int seg = 0;
    for (int k = 0; k < n; ++k) {
        const double target = k * L / n;
        while (seg + 1 < m && cum[seg + 1] < target) ++seg;
        const double frac = (target - cum[seg]) / (cum[seg + 1] - cum[seg]);
        const double t = 2.0 * M_PI * (seg + frac) / m;
        out[k] = gamma(t);
    }
    return PolyCurve(std::move(out), true);
}

/// Regular n-gon inscribed in a circle of the given radius.
inline PolyCurve make_circle(int n, double radius = 1.0) {
    std::vector<Vec3> v(n);
    for (int i = 0; i < n; ++i) {
        const double t = 2.0 * M_PI * i / n;
        v[i] = Vec3(radius * std::cos(t), radius * std::sin(t), 0.0);
    }
    return PolyCurve(std::move(v), true);
}

inline PolyCurve make_ellipse(int n, double a, double b) {
    return sample_uniform_arclength(
        [a, b](double t) { return Vec3(a * std::cos(t), b * std::sin(t), 0.0); }, n);
}

/// (p,q)-torus knot on the torus of radii (R, r).
inline PolyCurve make_torus_knot(int n, int p, int q, double R = 2.0, double r = 1.0) {
    return sample_uniform_arclength(
        [=](double t) {
            const double w = R + r * std::cos(q * t);
            return Vec3(w * std::cos(p * t), w * std::sin(p * t), r * std::sin(q * t));
        },
        n);
}

inline PolyCurve make_trefoil(int n) { return make_torus_knot(n, 2, 3); }

/// Unit circle perturbed by seeded random radial and vertical Fourier modes,
/// scaled so the largest displacement equals `amplitude`.
inline PolyCurve make_perturbed_circle(int n, std::uint64_t seed, double amplitude) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    const int kmin = 2, kmax = 6;
    std::vector<double> ar, br, az, bz;
    for (int k = kmin; k <= kmax; ++k) {
        ar.push_back(uni(rng));
        br.push_back(uni(rng));
        az.push_back(uni(rng));
        bz.push_back(uni(rng));
    }
    auto disp = [&](double t, double* dr, double* dz) {
        *dr = 0.0;
        *dz = 0.0;
        for (int k = kmin; k <= kmax; ++k) {
            const int idx = k - kmin;
            *dr += ar[idx] * std::cos(k * t) + br[idx] * std::sin(k * t);
            *dz += az[idx] * std::cos(k * t) + bz[idx] * std::sin(k * t);
        }
    };
    double maxd = 0.0;
    for (int i = 0; i < 512; ++i) {
        double dr, dz;
        disp(2.0 * M_PI * i / 512, &dr, &dz);
        maxd = std::max(maxd, std::hypot(dr, dz));
    }
    const double scale = maxd > 0.0 ? amplitude / maxd : 0.0;
    return sample_uniform_arclength(
        [&](double t) {
            double dr, dz;
            disp(t, &dr, &dz);
            const double rad = 1.0 + scale * dr;
            return Vec3(rad * std::cos(t), rad * std::sin(t), scale * dz);
        },
        n);
}

/// Stadium-shaped clasp family: two parallel straight strands at distance
/// gap_ratio * total_length, joined by semicircular caps. The minimum
/// self-distance is the gap, so the family degenerates to a doubled segment
/// as gap_ratio -> 0.
inline PolyCurve make_clasp(int n, double gap_ratio) {
    if (gap_ratio <= 0.0 || gap_ratio >= 1.0 / M_PI)
        throw std::invalid_argument("make_clasp: gap_ratio must be in (0, 1/pi)");
    const double len = 1.0;  // straight strand length
    const double g = 2.0 * len * gap_ratio / (1.0 - M_PI * gap_ratio);
    const double rc = g / 2.0;
    const double L = 2.0 * len + 2.0 * M_PI * rc;
    std::vector<Vec3> v(n);
    for (int k = 0; k < n; ++k) {
        double s = L * k / n;
        Vec3 p;
        if (s < len) {
            p = Vec3(s, -rc, 0.0);
        } else if (s < len + M_PI * rc) {
            const double a = (s - len) / rc;
            p = Vec3(len + rc * std::sin(a), -rc * std::cos(a), 0.0);
        } else if (s < 2.0 * len + M_PI * rc) {
            const double x = s - (len + M_PI * rc);
            p = Vec3(len - x, rc, 0.0);
        } else {
            const double a = (s - 2.0 * len - M_PI * rc) / rc;
            p = Vec3(-rc * std::sin(a), rc * std::cos(a), 0.0);
        }
        v[k] = p;
    }
    return PolyCurve(std::move(v), true);
}

/// Straight open polyline from a to b with n vertices.
inline PolyCurve make_segment(int n, const Vec3& a, const Vec3& b) {
    std::vector<Vec3> v(n);
    for (int i = 0; i < n; ++i) v[i] = a + (b - a) * (static_cast<double>(i) / (n - 1));
    return PolyCurve(std::move(v), false);
}

}  // namespace knotgeo
