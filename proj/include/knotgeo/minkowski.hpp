#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "knotgeo/curve.hpp"
#include "knotgeo/moebius.hpp"
#include "knotgeo/types.hpp"

namespace knotgeo {

/// Minkowski inner product on R^(d)_1: index 0 carries the negative sign.
inline double mink_inner(const VecX& u, const VecX& v) {
    if (u.size() != v.size()) throw std::invalid_argument("mink_inner: dimension mismatch");
    double s = -u(0) * v(0);
    for (int k = 1; k < u.size(); ++k) s += u(k) * v(k);
    return s;
}

inline MatX minkowski_metric(int dim) {
    MatX J = MatX::Identity(dim, dim);
    J(0, 0) = -1.0;
    return J;
}

inline long long binom(int m, int r) {
    if (r < 0 || r > m) return 0;
    long long out = 1;
    for (int k = 0; k < r; ++k) out = out * (m - k) / (k + 1);
    return out;
}

/// All r-subsets of {0..m-1} in lexicographic order.
inline std::vector<std::vector<int>> combinations(int m, int r) {
    std::vector<std::vector<int>> out;
    std::vector<int> idx(r);
    for (int i = 0; i < r; ++i) idx[i] = i;
    while (true) {
        out.push_back(idx);
        int t = r - 1;
        while (t >= 0 && idx[t] == m - r + t) --t;
        if (t < 0) break;
        ++idx[t];
        for (int s = t + 1; s < r; ++s) idx[s] = idx[s - 1] + 1;
    }
    return out;
}

/// Lexicographic rank of a sorted r-subset of {0..m-1}.
inline int comb_rank(const std::vector<int>& I, int m) {
    const int r = static_cast<int>(I.size());
    long long rank = 0;
    int prev = -1;
    for (int t = 0; t < r; ++t) {
        for (int v = prev + 1; v < I[t]; ++v) rank += binom(m - 1 - v, r - 1 - t);
        prev = I[t];
    }
    return static_cast<int>(rank);
}

/// Sorts idx ascending; returns the permutation sign, or 0 on duplicates.
inline int sort_index_sign(std::vector<int>& idx) {
    int sign = 1;
    for (size_t a = 0; a < idx.size(); ++a)
        for (size_t b = a + 1; b < idx.size(); ++b) {
            if (idx[a] == idx[b]) return 0;
            if (idx[a] > idx[b]) {
                std::swap(idx[a], idx[b]);
                sign = -sign;
            }
        }
    return sign;
}

/// Grade-(q+2) exterior product carried as the lex-ordered array of its
/// Pluecker coordinates (the (q+2)x(q+2) minors of the spanning vectors).
struct Blade {
    int q = 0;
    int n = 3;
    VecX coords;

    int grade() const { return q + 2; }
    int ambient_dim() const { return n + 2; }
    int coord_count() const { return static_cast<int>(binom(n + 2, q + 2)); }
};

/// Metric signature per lex-ordered multi-index: +1 if the index contains 0,
/// -1 otherwise. The -1 count is N1 = C(n+1, q+2).
inline std::vector<int> blade_signature(int q, int n) {
    const auto combs = combinations(n + 2, q + 2);
    std::vector<int> sig(combs.size());
    for (size_t t = 0; t < combs.size(); ++t) sig[t] = (combs[t][0] == 0) ? +1 : -1;
    return sig;
}

inline Blade wedge(const std::vector<VecX>& vectors) {
    if (vectors.size() < 2) throw std::invalid_argument("wedge: need at least 2 vectors");
    const int k = static_cast<int>(vectors.size());
    const int d = static_cast<int>(vectors[0].size());
    for (const auto& v : vectors)
        if (v.size() != d) throw std::invalid_argument("wedge: mixed dimensions");
    if (k > d) throw std::invalid_argument("wedge: grade exceeds dimension");

    Blade b;
    b.q = k - 2;
    b.n = d - 2;
    const auto combs = combinations(d, k);
    b.coords.resize(static_cast<int>(combs.size()));
    MatX sub(k, k);
    for (size_t t = 0; t < combs.size(); ++t) {
        for (int r = 0; r < k; ++r)
            for (int c = 0; c < k; ++c) sub(r, c) = vectors[r](combs[t][c]);
        b.coords(static_cast<int>(t)) = sub.determinant();
    }
    return b;
}

inline double blade_inner(const Blade& a, const Blade& b) {
    if (a.q != b.q || a.n != b.n) throw std::invalid_argument("blade_inner: shape mismatch");
    const auto sig = blade_signature(a.q, a.n);
    double s = 0.0;
    for (size_t t = 0; t < sig.size(); ++t) s += sig[t] * a.coords(t) * b.coords(t);
    return s;
}

/// Signature-weighted inner product of raw coordinate vectors in the blade
/// space of shape (q, n); used for tangent vectors of Theta(q, n).
inline double blade_coord_inner(const VecX& a, const VecX& b, int q, int n) {
    const auto sig = blade_signature(q, n);
    if (a.size() != static_cast<int>(sig.size()) || b.size() != a.size())
        throw std::invalid_argument("blade_coord_inner: size mismatch");
    double s = 0.0;
    for (size_t t = 0; t < sig.size(); ++t) s += sig[t] * a(t) * b(t);
    return s;
}

/// Coordinate lookup for an arbitrarily ordered multi-index (alternating).
inline double blade_coord(const Blade& b, std::vector<int> idx) {
    const int sign = sort_index_sign(idx);
    if (sign == 0) return 0.0;
    return sign * b.coords(comb_rank(idx, b.ambient_dim()));
}

/// Largest Pluecker relation residual, scaled by the squared sup-norm of the
/// coordinates. All relations are checked (no minimal independent set).
inline double plucker_residual(const Blade& b) {
    const int m = b.ambient_dim();
    const int q = b.q;
    const double scale = b.coords.cwiseAbs().maxCoeff();
    if (scale == 0.0) return 0.0;
    const auto Is = combinations(m, q + 1);
    const auto Js = combinations(m, q + 3);
    double worst = 0.0;
    for (const auto& I : Is) {
        for (const auto& J : Js) {
            double rel = 0.0;
            for (int k = 0; k < q + 3; ++k) {
                std::vector<int> left(I);
                left.push_back(J[k]);
                std::vector<int> right;
                for (int t = 0; t < q + 3; ++t)
                    if (t != k) right.push_back(J[t]);
                const double term = blade_coord(b, std::move(left)) *
                                    blade_coord(b, std::move(right));
                rel += ((k + 1) % 2 == 0 ? term : -term);  // (-1)^(k+1) with k 0-based
            }
            worst = std::max(worst, std::abs(rel));
        }
    }
    return worst / (scale * scale);
}

/// Unit-pseudonorm blade satisfying the Pluecker relations: a point of the
/// sphere space Theta(q, n).
struct SphereElem {
    Blade blade;

    explicit SphereElem(Blade b) : blade(std::move(b)) {
        const double p2 = blade_inner(blade, blade);
        if (std::abs(p2 - 1.0) > 1e-10)
            throw std::domain_error("SphereElem: pseudonorm is not 1");
        if (plucker_residual(blade) > 1e-10)
            throw std::domain_error("SphereElem: Pluecker relations violated");
    }
};

/// Normalized wedge: the bijection from spanned (q+2)-planes meeting the
/// light cone transversally to Theta(q, n). Errors when the plane is not
/// transversal (pseudonorm <= 0).
inline Blade psi_G(const std::vector<VecX>& vectors) {
    Blade b = wedge(vectors);
    const double p2 = blade_inner(b, b);
    if (!(p2 > 0.0))
        throw std::domain_error(
            "psi_G: plane does not cut the light cone transversally (<p,p> <= 0)");
    b.coords /= std::sqrt(p2);
    return b;
}

/// Compound matrix of A: entry (I, J) is the minor of A on rows I and
/// columns J. Satisfies wedge(A v_1, ..) = psi_matrix(A) * wedge(v_1, ..).
inline MatX psi_matrix(const MatX& A, int q, int n) {
    if (A.rows() != n + 2 || A.cols() != n + 2)
        throw std::invalid_argument("psi_matrix: matrix must be (n+2) x (n+2)");
    const auto combs = combinations(n + 2, q + 2);
    const int N = static_cast<int>(combs.size());
    const int k = q + 2;
    MatX out(N, N);
    MatX sub(k, k);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            for (int r = 0; r < k; ++r)
                for (int c = 0; c < k; ++c) sub(r, c) = A(combs[i][r], combs[j][c]);
            out(i, j) = sub.determinant();
        }
    return out;
}

inline MatX lorentz_rotation(int dim, int i, int j, double angle) {
    if (i < 1 || j < 1 || i == j || i >= dim || j >= dim)
        throw std::invalid_argument("lorentz_rotation: need distinct spatial axes");
    MatX A = MatX::Identity(dim, dim);
    A(i, i) = std::cos(angle);
    A(j, j) = std::cos(angle);
    A(i, j) = -std::sin(angle);
    A(j, i) = std::sin(angle);
    return A;
}

inline MatX lorentz_boost(int dim, int k, double rapidity) {
    if (k < 1 || k >= dim) throw std::invalid_argument("lorentz_boost: bad axis");
    MatX A = MatX::Identity(dim, dim);
    A(0, 0) = std::cosh(rapidity);
    A(k, k) = std::cosh(rapidity);
    A(0, k) = std::sinh(rapidity);
    A(k, 0) = std::sinh(rapidity);
    return A;
}

inline double lorentz_residual(const MatX& A) {
    const MatX J = minkowski_metric(static_cast<int>(A.rows()));
    return (A.transpose() * J * A - J).cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------------------
// de Sitter picture of oriented 2-spheres in S^3 (q = 2, n = 3)
// ---------------------------------------------------------------------------

struct SphereS3 {
    Vec4 center;     // geodesic center on S^3
    double radius;   // geodesic radius in (0, pi)
    int orientation; // +1 / -1
};

/// The de Sitter point of the oriented 2-sphere {q : <q, center> = cos(r)}:
/// the unit spacelike normal of the spanning 4-plane in R^5_1.
inline VecX desitter_from_sphere(const Vec4& center, double radius, int orientation) {
    if (!(radius > 0.0) || !(radius < M_PI))
        throw std::domain_error("desitter_from_sphere: radius must lie in (0, pi)");
    if (std::abs(center.norm() - 1.0) > 1e-9)
        throw std::domain_error("desitter_from_sphere: center must be on S^3");
    VecX sigma(5);
    const double s = std::sin(radius);
    sigma << std::cos(radius) / s, center(0) / s, center(1) / s, center(2) / s, center(3) / s;
    if (orientation < 0) sigma = -sigma;
    return sigma;
}

inline SphereS3 sphere_from_desitter(const VecX& sigma) {
    if (sigma.size() != 5) throw std::invalid_argument("sphere_from_desitter: need a 5-vector");
    if (std::abs(mink_inner(sigma, sigma) - 1.0) > 1e-9)
        throw std::domain_error("sphere_from_desitter: point is not on the de Sitter quadric");
    const double snorm = std::sqrt(1.0 + sigma(0) * sigma(0));
    SphereS3 out;
    out.center = Vec4(sigma(1), sigma(2), sigma(3), sigma(4)) / snorm;
    out.radius = std::acos(std::clamp(sigma(0) / snorm, -1.0, 1.0));
    out.orientation = +1;
    return out;
}

/// Hodge dual of a 4-blade in R^5_1 to the vector d with
/// <d, x> = (x wedge p)_{01234} for all x; metric compatible and
/// SO(4,1)-equivariant.
inline VecX dual_vector_from_blade4(const Blade& b) {
    if (b.q != 2 || b.n != 3)
        throw std::invalid_argument("dual_vector_from_blade4: expected a (q=2, n=3) blade");
    // lex order of 4-subsets of {0..4}: 0123, 0124, 0134, 0234, 1234
    VecX d(5);
    d(0) = -b.coords(4);
    d(1) = -b.coords(3);
    d(2) = b.coords(2);
    d(3) = -b.coords(1);
    d(4) = b.coords(0);
    return d;
}

/// Inverse of the dual: the unit 4-blade of the Minkowski-orthogonal
/// complement of sigma, sign-fixed so the round trip is the identity.
inline Blade blade4_from_dual_vector(const VecX& sigma) {
    if (sigma.size() != 5) throw std::invalid_argument("blade4_from_dual_vector: need 5-vector");
    const VecX jsigma = minkowski_metric(5) * sigma;
    // Euclidean complement of J*sigma = Minkowski complement of sigma
    Eigen::FullPivHouseholderQR<MatX> qr(jsigma);
    const MatX Q = qr.matrixQ();
    std::vector<VecX> span;
    for (int c = 1; c < 5; ++c) span.push_back(Q.col(c));
    Blade b = psi_G(span);
    const VecX d = dual_vector_from_blade4(b);
    if (d.dot(sigma) < 0.0) b.coords = -b.coords;
    return b;
}

// ---------------------------------------------------------------------------
// The 0-sphere map s(x, y) into Theta(0, 3) in R^10_6 and its derivatives
// ---------------------------------------------------------------------------

/// Oriented 0-sphere (point pair on S^3) as a unit blade; swapping the
/// arguments negates every coordinate.
inline Blade s_map(const Vec4& x, const Vec4& y) {
    if ((x - y).norm() == 0.0) throw std::invalid_argument("s_map: coincident points");
    return psi_G({light_cone_lift(x), light_cone_lift(y)});
}

struct SMapJet {
    VecX s;   // s(x_i, y_j) coordinates in R^10
    VecX sx;  // partial along the first curve parameter
    VecX sy;  // partial along the second curve parameter
};

namespace detail {

inline VecX s_coords(const PolyCurve& c, long i, long j) {
    const Vec4 x = lift_to_sphere(c.vertex_wrapped(i)).normalized();
    const Vec4 y = lift_to_sphere(c.vertex_wrapped(j)).normalized();
    return s_map(x, y).coords;
}

}  // namespace detail

/// s(x,y) with partials w.r.t. the curve arclength parameters, by centered
/// differences at vertex spacing with one Richardson step (5-point stencil).
/// The curve should be uniformly sampled; the pair must be at least 3 apart.
inline SMapJet s_map_jet(const PolyCurve& c, int i, int j) {
    if (!c.closed()) throw std::invalid_argument("s_map_jet: curve must be closed");
    const int n = c.size();
    const int sep = std::min((j - i + n) % n, (i - j + n) % n);
    if (sep < 3) throw std::invalid_argument("s_map_jet: pair too close for the FD stencil");
    const double L = c.total_length();
    const double hi = (c.arc_distance(i, (i + 1) % n) + c.arc_distance(i, (i + n - 1) % n)) / 2.0;
    const double hj = (c.arc_distance(j, (j + 1) % n) + c.arc_distance(j, (j + n - 1) % n)) / 2.0;
    (void)L;

    SMapJet jet;
    jet.s = detail::s_coords(c, i, j);
    const VecX xp1 = detail::s_coords(c, i + 1L, j), xm1 = detail::s_coords(c, i - 1L, j);
    const VecX xp2 = detail::s_coords(c, i + 2L, j), xm2 = detail::s_coords(c, i - 2L, j);
    const VecX yp1 = detail::s_coords(c, i, j + 1L), ym1 = detail::s_coords(c, i, j - 1L);
    const VecX yp2 = detail::s_coords(c, i, j + 2L), ym2 = detail::s_coords(c, i, j - 2L);
    jet.sx = (8.0 * (xp1 - xm1) - (xp2 - xm2)) / (12.0 * hi);
    jet.sy = (8.0 * (yp1 - ym1) - (yp2 - ym2)) / (12.0 * hj);
    return jet;
}

/// <s_x, s_y> at the pair (i, j): the signed area density of the surface
/// s(K x K) in Theta(0,3). Equal to twice the real part density of the
/// infinitesimal cross ratio.
inline double signed_area_density(const PolyCurve& c, int i, int j) {
    const SMapJet jet = s_map_jet(c, i, j);
    return blade_coord_inner(jet.sx, jet.sy, 0, 3);
}

/// Cross-curve variant for links: x on c1, y on c2.
inline double signed_area_density(const PolyCurve& c1, int i, const PolyCurve& c2, int j) {
    auto coords = [&](const PolyCurve& a, long ia, const PolyCurve& b, long jb) {
        const Vec4 x = lift_to_sphere(a.vertex_wrapped(ia)).normalized();
        const Vec4 y = lift_to_sphere(b.vertex_wrapped(jb)).normalized();
        return s_map(x, y).coords;
    };
    const double hi =
        (c1.arc_distance(i, (i + 1) % c1.size()) + c1.arc_distance(i, (i + c1.size() - 1) % c1.size())) /
        2.0;
    const double hj =
        (c2.arc_distance(j, (j + 1) % c2.size()) + c2.arc_distance(j, (j + c2.size() - 1) % c2.size())) /
        2.0;
    const VecX xp1 = coords(c1, i + 1L, c2, j), xm1 = coords(c1, i - 1L, c2, j);
    const VecX xp2 = coords(c1, i + 2L, c2, j), xm2 = coords(c1, i - 2L, c2, j);
    const VecX yp1 = coords(c1, i, c2, j + 1L), ym1 = coords(c1, i, c2, j - 1L);
    const VecX yp2 = coords(c1, i, c2, j + 2L), ym2 = coords(c1, i, c2, j - 2L);
    const VecX sx = (8.0 * (xp1 - xm1) - (xp2 - xm2)) / (12.0 * hi);
    const VecX sy = (8.0 * (yp1 - ym1) - (yp2 - ym2)) / (12.0 * hj);
    return blade_coord_inner(sx, sy, 0, 3);
}

}  // namespace knotgeo
