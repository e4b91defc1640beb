#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "knotgeo/generators.hpp"
#include "knotgeo/minkowski.hpp"
#include "knotgeo/moebius.hpp"
#include "testutil.hpp"

using namespace knotgeo;
using Catch::Approx;

TEST_CASE("invert_point fundamentals") {
    const SphereInversion inv(Vec3(0, 0, 0), 1.0);
    SECTION("|CP| * |CP'| = r^2") {
        CHECK((invert_point(inv, Vec3(2, 0, 0)) - Vec3(0.5, 0, 0)).norm() < 1e-15);
    }
    SECTION("points on the sphere are fixed") {
        const Vec3 p = Vec3(1, 2, -1).normalized();
        CHECK((invert_point(inv, p) - p).norm() < 1e-15);
    }
    SECTION("involution") {
        std::mt19937_64 rng(2);
        std::uniform_real_distribution<double> u(-3.0, 3.0);
        const SphereInversion inv2(Vec3(0.5, -1.0, 2.0), 1.7);
        for (int k = 0; k < 100; ++k) {
            const Vec3 p(u(rng), u(rng), u(rng));
            if ((p - inv2.center).norm() < 1e-3) continue;
            CHECK((invert_point(inv2, invert_point(inv2, p)) - p).norm() < 1e-12);
        }
    }
    SECTION("the center maps to infinity and back") {
        const MoebPoint inf = invert_point(inv, MoebPoint::finite(inv.center));
        CHECK(inf.at_infinity);
        const MoebPoint back = invert_point(inv, inf);
        CHECK_FALSE(back.at_infinity);
        CHECK((back.p - inv.center).norm() == 0.0);
    }
    SECTION("radius must be positive") {
        CHECK_THROWS_AS(SphereInversion(Vec3(0, 0, 0), 0.0), std::invalid_argument);
    }
}

TEST_CASE("apply_map on curves") {
    const auto circ = make_circle(64);
    SECTION("identity map returns the input") {
        const auto img = apply_map({}, circ);
        for (int i = 0; i < 64; ++i) CHECK((img.vertex(i) - circ.vertex(i)).norm() == 0.0);
    }
    SECTION("circles map to circles") {
        const SphereInversion inv(Vec3(3.0, 1.0, 0.5), 1.3);
        const auto img = apply_map({inv}, circ);
        CHECK(testutil::circle_fit_residual_3d(img.vertices()) < 1e-9);
    }
    SECTION("a vertex at the inversion center is an error") {
        const SphereInversion inv(circ.vertex(10), 1.0);
        CHECK_THROWS_AS(apply_map({inv}, circ), std::domain_error);
    }
    SECTION("composition is application in sequence") {
        const MoebiusMap m = {SphereInversion(Vec3(4, 0, 0), 2.0),
                              SphereInversion(Vec3(0, 5, 1), 1.0)};
        const auto once = apply_map(m, circ);
        const auto twice = apply_map({m[1]}, apply_map({m[0]}, circ));
        for (int i = 0; i < 64; ++i) CHECK((once.vertex(i) - twice.vertex(i)).norm() < 1e-12);
    }
}

TEST_CASE("circles map to circles under random compositions") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const auto circ = make_circle(48);
    for (int rep = 0; rep < 20; ++rep) {
        MoebiusMap m;
        for (int k = 0; k < 2; ++k) {
            const Vec3 c(4.0 + u(rng), 4.0 * u(rng), 4.0 * u(rng));
            m.emplace_back(c, 1.0 + std::abs(u(rng)));
        }
        PolyCurve img = circ;
        bool ok = true;
        try {
            img = apply_map(m, circ);
        } catch (const std::domain_error&) {
            ok = false;  // map sent a vertex to infinity; skip
        }
        if (!ok) continue;
        CHECK(testutil::circle_fit_residual_3d(img.vertices()) < 1e-8);
    }
}

TEST_CASE("stereographic lift and projection") {
    SECTION("origin lifts to the antipode of the pole") {
        CHECK((lift_to_sphere(Vec3(0, 0, 0)) - Vec4(0, 0, 0, -1)).norm() < 1e-15);
    }
    SECTION("round trip") {
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> u(-4.0, 4.0);
        for (int k = 0; k < 200; ++k) {
            const Vec3 p(u(rng), u(rng), u(rng));
            const MoebPoint back = project_to_r3(lift_to_sphere(p));
            REQUIRE_FALSE(back.at_infinity);
            CHECK((back.p - p).norm() < 1e-12 * std::max(1.0, p.norm()));
        }
    }
    SECTION("the pole projects to infinity") {
        CHECK(project_to_r3(Vec4(0, 0, 0, 1)).at_infinity);
    }
    SECTION("a circle lifts to a circle on S^3") {
        std::vector<Vec4> img;
        for (int i = 0; i < 64; ++i) {
            const double t = 2.0 * M_PI * i / 64;
            img.push_back(lift_to_sphere(Vec3(0.3 + std::cos(t), std::sin(t), 0.7)));
        }
        CHECK(testutil::circle_fit_residual_4d(img) < 1e-9);
    }
}

TEST_CASE("light cone lift") {
    SECTION("basic point") {
        const VecX v = light_cone_lift(Vec4(1, 0, 0, 0));
        CHECK(v.size() == 5);
        CHECK(v(0) == 1.0);
        CHECK(v(1) == 1.0);
        CHECK(std::abs(mink_inner(v, v)) < 1e-12);
    }
    SECTION("first coordinate is one and the vector is lightlike") {
        std::mt19937_64 rng(8);
        std::normal_distribution<double> g(0.0, 1.0);
        for (int k = 0; k < 100; ++k) {
            Vec4 q(g(rng), g(rng), g(rng), g(rng));
            q.normalize();
            const VecX v = light_cone_lift(q);
            CHECK(v(0) == 1.0);
            CHECK(std::abs(mink_inner(v, v)) < 1e-12);
        }
    }
    SECTION("chordal identity <lift(q1), lift(q2)> = -|q1-q2|^2 / 2") {
        std::mt19937_64 rng(13);
        std::normal_distribution<double> g(0.0, 1.0);
        for (int k = 0; k < 100; ++k) {
            Vec4 q1(g(rng), g(rng), g(rng), g(rng)), q2(g(rng), g(rng), g(rng), g(rng));
            q1.normalize();
            q2.normalize();
            const double lhs = mink_inner(light_cone_lift(q1), light_cone_lift(q2));
            CHECK(lhs == Approx(-(q1 - q2).squaredNorm() / 2.0).margin(1e-12));
        }
    }
    SECTION("off-sphere input is rejected") {
        CHECK_THROWS_AS(light_cone_lift(Vec4(1.1, 0, 0, 0)), std::domain_error);
    }
}
