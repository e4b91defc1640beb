#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "knotgeo/conformal.hpp"
#include "knotgeo/energy.hpp"
#include "knotgeo/generators.hpp"
#include "knotgeo/moebius.hpp"
#include "testutil.hpp"

using namespace knotgeo;
using Catch::Approx;

namespace {

// Explicit construction oracle: sample the circle {center, radius, normal}
// and measure its travel direction at a point by a tight finite difference.
Vec3 circle_dir_at(const CircleGeom& c, const Vec3& p) {
    const Vec3 r = p - c.center;
    return c.normal.cross(r).normalized();
}

}  // namespace

TEST_CASE("tangent_circle on a round circle reproduces the circle") {
    const auto circ = make_circle(64);
    const CircleGeom tc = tangent_circle(circ, 3, 40);
    REQUIRE_FALSE(tc.is_line);
    CHECK((tc.center - Vec3(0, 0, 0)).norm() < 1e-9);
    CHECK(tc.radius == Approx(1.0).epsilon(1e-9));
}

TEST_CASE("tangent_circle passes both points and is tangent at x") {
    std::mt19937_64 rng(21);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int rep = 0; rep < 50; ++rep) {
        const Vec3 x(g(rng), g(rng), g(rng));
        Vec3 t(g(rng), g(rng), g(rng));
        t.normalize();
        const Vec3 y = x + Vec3(g(rng), g(rng), g(rng));
        if ((y - x).norm() < 1e-3) continue;
        const CircleGeom c = tangent_circle_points(x, t, y);
        if (c.is_line) continue;
        CHECK(std::abs((x - c.center).norm() - c.radius) < 1e-9 * c.radius);
        CHECK(std::abs((y - c.center).norm() - c.radius) < 1e-9 * c.radius);
        // tangency: the circle's direction at x equals t
        CHECK((circle_dir_at(c, x) - t).norm() < 1e-9);
    }
}

TEST_CASE("tangent parallel to the chord degenerates to a line") {
    const Vec3 x(0, 0, 0), y(1, 0, 0);
    const CircleGeom c = tangent_circle_points(x, Vec3(1, 0, 0), y);
    CHECK(c.is_line);
    CHECK((c.line_dir - Vec3(1, 0, 0)).norm() < 1e-12);
}

TEST_CASE("reflection formula matches the explicit two-circle oracle") {
    // the closed form for the direction of C(x,x,y) at y must agree with the
    // constructed circle's direction there
    std::mt19937_64 rng(33);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int rep = 0; rep < 200; ++rep) {
        const Vec3 x(g(rng), g(rng), g(rng));
        Vec3 t(g(rng), g(rng), g(rng));
        t.normalize();
        const Vec3 y = x + Vec3(g(rng), g(rng), g(rng));
        const Vec3 e = y - x;
        if (e.norm() < 1e-3) continue;
        const CircleGeom c = tangent_circle_points(x, t, y);
        if (c.is_line) continue;
        const Vec3 predicted = tangent_circle_dir_at_far_point(t, e.normalized());
        CHECK((predicted - circle_dir_at(c, y)).norm() < 1e-9);
    }
}

TEST_CASE("conformal angle on a round circle vanishes") {
    const auto circ = make_circle(128);
    for (int j : {5, 31, 64, 100}) CHECK(conformal_angle(circ, 0, j) < 1e-12);
}

TEST_CASE("conformal angle matches an explicit two-circle oracle on a planar curve") {
    // a planar 2:1 ellipse: fit both tangent circles explicitly and measure
    // the angle between their direction vectors at v_j
    const auto ell = make_ellipse(256, 2.0, 1.0);
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> pick(0, 255);
    for (int rep = 0; rep < 60; ++rep) {
        const int i = pick(rng), j = pick(rng);
        if (i == j) continue;
        const CircleGeom cx = tangent_circle(ell, i, j);
        const CircleGeom cy = tangent_circle(ell, j, i);
        if (cx.is_line || cy.is_line) continue;
        const Vec3 dx = circle_dir_at(cx, ell.vertex(j));
        // direction of C(y,y,x) at y is the curve tangent there by construction
        const Vec3 dy = circle_dir_at(cy, ell.vertex(j));
        const double want = angle_between(dx, dy);
        CHECK(conformal_angle(ell, i, j) == Approx(want).margin(1e-6));
    }
}

TEST_CASE("conformal angle is symmetric") {
    const auto tre = make_trefoil(256);
    std::mt19937_64 rng(41);
    std::uniform_int_distribution<int> pick(0, 255);
    for (int rep = 0; rep < 100; ++rep) {
        const int i = pick(rng), j = pick(rng);
        if (i == j) continue;
        CHECK(std::abs(conformal_angle(tre, i, j) - conformal_angle(tre, j, i)) < 1e-9);
    }
}

TEST_CASE("conformal angle is O(arc^2) near the diagonal") {
    const int n = 8192;
    const auto tre = make_trefoil(n);
    const double L = tre.total_length();
    double lo = 1e100, hi = 0.0;
    for (int k = 8; k <= 82; k += 2) {  // arc separations in [1e-3, 1e-2] * L
        const double s = k * L / n;
        if (s < 1e-3 * L || s > 1e-2 * L) continue;
        const double theta = conformal_angle(tre, 100, (100 + k) % n);
        const double ratio = theta / (s * s);
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
    }
    CHECK(hi / lo < 2.0);
}

TEST_CASE("cross ratio samples of the round circle") {
    const auto circ = make_circle(128);
    const CrossRatioSample s = cross_ratio_sample(circ, 3, 60);
    const double d2 = (circ.vertex(3) - circ.vertex(60)).squaredNorm();
    CHECK(s.absDensity == Approx(1.0 / d2).epsilon(1e-12));
    CHECK(s.theta < 1e-12);
    CHECK(s.reDensity == Approx(s.absDensity).epsilon(1e-12));
    CHECK(s.imDensity < 1e-12);
}

TEST_CASE("cross ratio invariants hold on random pairs") {
    const auto tre = make_trefoil(256);
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<int> pick(0, 255);
    for (int rep = 0; rep < 200; ++rep) {
        const int i = pick(rng), j = pick(rng);
        if (i == j) continue;
        const CrossRatioSample s = cross_ratio_sample(tre, i, j);
        CHECK(s.theta >= 0.0);
        CHECK(s.theta <= M_PI);
        CHECK(s.imDensity >= 0.0);
        CHECK(s.reDensity * s.reDensity + s.imDensity * s.imDensity ==
              Approx(s.absDensity * s.absDensity).epsilon(1e-10));
    }
}

TEST_CASE("grid sum of (abs - re) reconstructs the energy") {
    const auto tre0 = make_trefoil(256);
    const auto tre = tre0.resample_uniform(256);
    const int n = tre.size();
    const double L = tre.total_length();
    double acc = 0.0;
    const double w = 1.0 / n;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            const CrossRatioSample s = cross_ratio_sample(tre, i, j);
            acc += (s.absDensity - s.reDensity) * (L * L) * w * w;
        }
    const double want = energy_alpha(tre, 2.0).value;
    CHECK(std::abs(acc - want) / want < 1e-2);
}

TEST_CASE("bitangent sphere") {
    SECTION("planar configuration returns the plane") {
        const auto ell = make_ellipse(128, 2.0, 1.0);
        const BitangentSphere b = bitangent_sphere(ell, 10, 60);
        CHECK(b.kind == BitangentSphere::Kind::plane);
        CHECK(std::abs(std::abs(b.plane_normal.dot(Vec3(0, 0, 1))) - 1.0) < 1e-9);
    }
    SECTION("nonplanar pair on a trefoil gives a sphere containing both circles") {
        const auto tre = make_trefoil(512);
        std::mt19937_64 rng(29);
        std::uniform_int_distribution<int> pick(0, 511);
        int tested = 0;
        for (int rep = 0; rep < 40 && tested < 20; ++rep) {
            const int i = pick(rng), j = pick(rng);
            if (std::min((j - i + 512) % 512, (i - j + 512) % 512) < 8) continue;
            const BitangentSphere b = bitangent_sphere(tre, i, j);
            if (b.kind != BitangentSphere::Kind::sphere) continue;
            ++tested;
            for (const auto& circ : {tangent_circle(tre, i, j), tangent_circle(tre, j, i)}) {
                REQUIRE_FALSE(circ.is_line);
                // sample the circle; all points must lie on the sphere
                Vec3 u = (tre.vertex(i) - circ.center);
                if ((circ.center - tre.vertex(j)).norm() >
                    (circ.center - tre.vertex(i)).norm())
                    u = tre.vertex(j) - circ.center;
                u.normalize();
                const Vec3 v = circ.normal.cross(u);
                for (int k = 0; k < 16; ++k) {
                    const double t = 2.0 * M_PI * k / 16;
                    const Vec3 p =
                        circ.center + circ.radius * (std::cos(t) * u + std::sin(t) * v);
                    CHECK(std::abs((p - b.center).norm() - b.radius) < 1e-9 * b.radius);
                }
            }
        }
        CHECK(tested >= 10);
    }
    SECTION("pairs on a round circle are tagged cocircular") {
        const auto circ = make_circle(64);
        const BitangentSphere b = bitangent_sphere(circ, 3, 30);
        CHECK(b.kind == BitangentSphere::Kind::cocircular);
    }
}

TEST_CASE("conformal invariance of theta and the density combination") {
    // under an admissible inversion, theta at corresponding pairs is equal
    // and |x-y|^-2 * ds_i * ds_j is preserved
    const auto tre = make_trefoil(512);
    const SphereInversion inv(Vec3(6.0, 0.0, 0.0), 2.0);
    const auto img = apply_map({inv}, tre);
    auto dual_cell = [](const PolyCurve& c, int i) {
        const int n = c.size();
        const double prev = (c.vertex(i) - c.vertex_wrapped(i - 1L)).norm();
        const double next = (c.vertex_wrapped(i + 1L) - c.vertex(i)).norm();
        return 0.5 * (prev + next);
    };
    std::mt19937_64 rng(55);
    std::uniform_int_distribution<int> pick(0, 511);
    double worst_theta = 0.0, worst_dens = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
        const int i = pick(rng), j = pick(rng);
        const int sep = std::min((j - i + 512) % 512, (i - j + 512) % 512);
        if (sep < 16) continue;
        const CrossRatioSample a = cross_ratio_sample(tre, i, j);
        const CrossRatioSample b = cross_ratio_sample(img, i, j);
        worst_theta = std::max(worst_theta, std::abs(a.theta - b.theta));
        const double da = a.absDensity * dual_cell(tre, i) * dual_cell(tre, j);
        const double db = b.absDensity * dual_cell(img, i) * dual_cell(img, j);
        worst_dens = std::max(worst_dens, std::abs(da - db) / da);
    }
    CHECK(worst_theta < 2e-3);
    CHECK(worst_dens < 2e-3);
}
