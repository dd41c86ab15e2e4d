#include <doctest.h>

#include <cmath>

#include "citysynth/geometry.hpp"
#include "citysynth/rng.hpp"

using namespace citysynth;

namespace {
const std::vector<Vec2> kUnitSquare = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
}

TEST_CASE("signed area: shoelace oracle on random polygons") {
    // Fan triangulation area of a convex polygon must equal the shoelace sum.
    Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Vec2> pts;
        for (int i = 0; i < 12; ++i) {
            pts.push_back({rng.uniform(-10, 10), rng.uniform(-10, 10)});
        }
        std::vector<Vec2> hull = convex_hull(pts);
        if (hull.size() < 3) continue;
        double fan = 0.0;
        for (size_t i = 1; i + 1 < hull.size(); ++i) {
            Vec2 a = hull[i] - hull[0], b = hull[i + 1] - hull[0];
            fan += 0.5 * a.cross(b);
        }
        CHECK(polygon_signed_area(hull) == doctest::Approx(fan).epsilon(1e-12));
    }
}

TEST_CASE("signed area: orientation sign") {
    CHECK(polygon_signed_area(kUnitSquare) == doctest::Approx(1.0));
    std::vector<Vec2> cw(kUnitSquare.rbegin(), kUnitSquare.rend());
    CHECK(polygon_signed_area(cw) == doctest::Approx(-1.0));
}

TEST_CASE("point in polygon: interior, exterior, and edge") {
    CHECK(point_in_polygon({0.5, 0.5}, kUnitSquare));
    CHECK_FALSE(point_in_polygon({1.5, 0.5}, kUnitSquare));
    CHECK(point_in_polygon({0.5, 0.0}, kUnitSquare));  // on edge counts as inside
    CHECK(point_in_polygon({0.0, 0.0}, kUnitSquare));  // vertex
}

TEST_CASE("point in polygon: concave ring") {
    std::vector<Vec2> ell = {{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}};
    CHECK(point_in_polygon({0.5, 1.5}, ell));
    CHECK_FALSE(point_in_polygon({1.5, 1.5}, ell));
}

TEST_CASE("polygon simplicity") {
    CHECK(polygon_is_simple(kUnitSquare));
    std::vector<Vec2> bowtie = {{0, 0}, {1, 1}, {1, 0}, {0, 1}};
    CHECK_FALSE(polygon_is_simple(bowtie));
}

TEST_CASE("distance to polyline") {
    std::vector<Vec2> path = {{0, 0}, {10, 0}};
    CHECK(distance_to_polyline({5, 3}, path) == doctest::Approx(3.0));
    CHECK(distance_to_polyline({-4, 3}, path) == doctest::Approx(5.0));  // beyond endpoint
    CHECK(distance_to_polyline({5, 0}, path) == doctest::Approx(0.0));
}

TEST_CASE("convex hull: CCW and containment") {
    Rng rng(3);
    std::vector<Vec2> pts;
    for (int i = 0; i < 200; ++i) pts.push_back({rng.uniform(0, 5), rng.uniform(0, 5)});
    std::vector<Vec2> hull = convex_hull(pts);
    REQUIRE(hull.size() >= 3);
    CHECK(polygon_signed_area(hull) > 0);
    for (const Vec2& p : pts) CHECK(point_in_polygon(p, hull));
}

TEST_CASE("convex hull: collinear input is empty") {
    CHECK(convex_hull({{0, 0}, {1, 1}, {2, 2}, {3, 3}}).empty());
}

TEST_CASE("oriented bounding box: axis-aligned rectangle") {
    std::vector<Vec2> rect = {{0, 0}, {10, 0}, {10, 4}, {0, 4}};
    Obb2 obb = oriented_bounding_box(rect);
    CHECK(obb.half_long == doctest::Approx(5.0));
    CHECK(obb.half_short == doctest::Approx(2.0));
    CHECK(obb.area() == doctest::Approx(40.0));
    CHECK(std::abs(obb.axis.x) == doctest::Approx(1.0));
}

TEST_CASE("oriented bounding box: rotation invariance of area") {
    std::vector<Vec2> rect = {{0, 0}, {10, 0}, {10, 4}, {0, 4}};
    Mat3 rot = Mat3::rotation_z(0.7);
    std::vector<Vec2> rotated;
    for (const Vec2& p : rect) {
        Vec3 q = rot * Vec3{p.x, p.y, 0};
        rotated.push_back({q.x + 3, q.y - 1});
    }
    Obb2 obb = oriented_bounding_box(rotated);
    CHECK(obb.area() == doctest::Approx(40.0).epsilon(1e-9));
    CHECK(obb.half_long == doctest::Approx(5.0).epsilon(1e-9));
    // Local coordinates of the corners land on the box boundary.
    for (const Vec2& p : rotated) {
        Vec2 local = obb.to_local(p);
        CHECK(std::abs(local.x) <= obb.half_long + 1e-9);
        CHECK(std::abs(local.y) <= obb.half_short + 1e-9);
        Vec2 back = obb.to_world(local);
        CHECK(back.x == doctest::Approx(p.x).epsilon(1e-12));
        CHECK(back.y == doctest::Approx(p.y).epsilon(1e-12));
    }
}

TEST_CASE("triangulation: area preserved and indices valid") {
    std::vector<Vec2> ell = {{0, 0}, {4, 0}, {4, 1}, {1, 1}, {1, 3}, {0, 3}};
    auto tris = triangulate_polygon(ell);
    CHECK(tris.size() == ell.size() - 2);
    double total = 0.0;
    for (const auto& t : tris) {
        Vec2 a = ell[t[1]] - ell[t[0]], b = ell[t[2]] - ell[t[0]];
        double area = 0.5 * a.cross(b);
        CHECK(area > 0);  // CCW winding preserved
        total += area;
    }
    CHECK(total == doctest::Approx(polygon_signed_area(ell)).epsilon(1e-12));
}

TEST_CASE("rotation_z_to maps +z to the requested up vector") {
    for (Vec3 up : {Vec3{0, 0, 1}, Vec3{1, 0, 1}, Vec3{-0.3, 0.4, 0.86}, Vec3{0, 1, 0.01}}) {
        up = up.normalized();
        Mat3 r = Mat3::rotation_z_to(up);
        Vec3 z = r * Vec3{0, 0, 1};
        CHECK((z - up).norm() < 1e-12);
        // Orthonormality.
        for (int i = 0; i < 3; ++i) {
            CHECK(r.col[i].norm() == doctest::Approx(1.0).epsilon(1e-12));
            for (int j = i + 1; j < 3; ++j) {
                CHECK(r.col[i].dot(r.col[j]) == doctest::Approx(0.0).epsilon(1e-12));
            }
        }
        // Right-handed.
        CHECK(r.col[0].cross(r.col[1]).dot(r.col[2]) == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("mat3 transpose-multiply inverts rotation") {
    Mat3 r = Mat3::rotation_z(1.234);
    Vec3 v{3, -2, 5};
    Vec3 back = r.transposed_mul(r * v);
    CHECK((back - v).norm() < 1e-12);
}
