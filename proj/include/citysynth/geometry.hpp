#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

namespace citysynth {

struct Vec2 {
    double x = 0.0, y = 0.0;

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double cross(const Vec2& o) const { return x * o.y - y * o.x; }
    double norm() const { return std::sqrt(x * x + y * y); }
    Vec2 normalized() const {
        double n = norm();
        return n > 0 ? Vec2{x / n, y / n} : Vec2{0, 0};
    }
    Vec2 perp() const { return {-y, x}; }
};

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator-() const { return {-x, -y, -z}; }
    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    Vec3 cross(const Vec3& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    double norm() const { return std::sqrt(x * x + y * y + z * z); }
    Vec3 normalized() const {
        double n = norm();
        return n > 0 ? Vec3{x / n, y / n, z / n} : Vec3{0, 0, 0};
    }
    Vec2 xy() const { return {x, y}; }
};

// Column-major 3x3 rotation matrix. Columns are the rotated basis vectors.
struct Mat3 {
    std::array<Vec3, 3> col{Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}};

    Vec3 operator*(const Vec3& v) const {
        return col[0] * v.x + col[1] * v.y + col[2] * v.z;
    }
    Mat3 operator*(const Mat3& o) const {
        Mat3 r;
        r.col[0] = (*this) * o.col[0];
        r.col[1] = (*this) * o.col[1];
        r.col[2] = (*this) * o.col[2];
        return r;
    }
    // Inverse of a rotation is its transpose.
    Vec3 transposed_mul(const Vec3& v) const {
        return {col[0].dot(v), col[1].dot(v), col[2].dot(v)};
    }
    static Mat3 rotation_z(double angle) {
        double c = std::cos(angle), s = std::sin(angle);
        Mat3 m;
        m.col[0] = {c, s, 0};
        m.col[1] = {-s, c, 0};
        m.col[2] = {0, 0, 1};
        return m;
    }
    // Rotation taking +z to the given unit vector (stable for up near +z).
    static Mat3 rotation_z_to(const Vec3& up);
};

struct Aabb2 {
    Vec2 lo{std::numeric_limits<double>::max(), std::numeric_limits<double>::max()};
    Vec2 hi{std::numeric_limits<double>::lowest(), std::numeric_limits<double>::lowest()};

    void expand(const Vec2& p) {
        lo.x = std::min(lo.x, p.x);
        lo.y = std::min(lo.y, p.y);
        hi.x = std::max(hi.x, p.x);
        hi.y = std::max(hi.y, p.y);
    }
    bool contains(const Vec2& p) const {
        return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y;
    }
    Vec2 extent() const { return hi - lo; }
    Vec2 center() const { return (lo + hi) * 0.5; }
};

struct Aabb3 {
    Vec3 lo{std::numeric_limits<double>::max(), std::numeric_limits<double>::max(),
            std::numeric_limits<double>::max()};
    Vec3 hi{std::numeric_limits<double>::lowest(), std::numeric_limits<double>::lowest(),
            std::numeric_limits<double>::lowest()};

    void expand(const Vec3& p) {
        lo.x = std::min(lo.x, p.x);
        lo.y = std::min(lo.y, p.y);
        lo.z = std::min(lo.z, p.z);
        hi.x = std::max(hi.x, p.x);
        hi.y = std::max(hi.y, p.y);
        hi.z = std::max(hi.z, p.z);
    }
    void expand(const Aabb3& b) {
        expand(b.lo);
        expand(b.hi);
    }
    Vec3 extent() const { return hi - lo; }
    Vec3 center() const { return (lo + hi) * 0.5; }
    int longest_axis() const;
};

// Signed area of a closed polygon ring (positive = counter-clockwise).
double polygon_signed_area(const std::vector<Vec2>& ring);

// Even-odd rule; points exactly on an edge count as inside.
bool point_in_polygon(const Vec2& p, const std::vector<Vec2>& ring);

bool polygon_is_simple(const std::vector<Vec2>& ring);

// Distance from a point to a polyline (closest point on any segment).
double distance_to_polyline(const Vec2& p, const std::vector<Vec2>& path);

// Andrew's monotone chain; returns counter-clockwise hull without repeated
// last point. Empty result if all points are collinear.
std::vector<Vec2> convex_hull(std::vector<Vec2> points);

// Minimum-area oriented bounding box of a point set (rotating over hull
// edge directions).
struct Obb2 {
    Vec2 center;
    Vec2 axis;     // unit direction of the long side
    double half_long = 0.0;
    double half_short = 0.0;

    double area() const { return 4.0 * half_long * half_short; }
    // Coordinates of p in the box frame (u along axis, v across).
    Vec2 to_local(const Vec2& p) const {
        Vec2 d = p - center;
        return {d.dot(axis), d.dot(axis.perp())};
    }
    Vec2 to_world(const Vec2& local) const {
        return center + axis * local.x + axis.perp() * local.y;
    }
};
Obb2 oriented_bounding_box(const std::vector<Vec2>& ring);

// Ear-clipping triangulation of a simple polygon (CCW ring). Returns index
// triples into the ring.
std::vector<std::array<int, 3>> triangulate_polygon(const std::vector<Vec2>& ring);

}  // namespace citysynth
