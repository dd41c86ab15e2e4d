#include "citysynth/geometry.hpp"

#include <algorithm>

namespace citysynth {

Mat3 Mat3::rotation_z_to(const Vec3& up) {
    Mat3 m;
    Vec3 z = up.normalized();
    if (std::abs(z.z) > 0.999999) {
        if (z.z < 0) {
            m.col[0] = {1, 0, 0};
            m.col[1] = {0, -1, 0};
            m.col[2] = {0, 0, -1};
        }
        return m;
    }
    // Build an orthonormal frame whose z column is `up`.
    Vec3 xaxis = Vec3{0, 0, 1}.cross(z).normalized();
    Vec3 yaxis = z.cross(xaxis);
    m.col[0] = xaxis;
    m.col[1] = yaxis;
    m.col[2] = z;
    return m;
}

int Aabb3::longest_axis() const {
    Vec3 e = extent();
    if (e.x >= e.y && e.x >= e.z) return 0;
    return e.y >= e.z ? 1 : 2;
}

double polygon_signed_area(const std::vector<Vec2>& ring) {
    double a = 0.0;
    size_t n = ring.size();
    for (size_t i = 0; i < n; ++i) {
        const Vec2& p = ring[i];
        const Vec2& q = ring[(i + 1) % n];
        a += p.cross(q);
    }
    return 0.5 * a;
}

bool point_in_polygon(const Vec2& p, const std::vector<Vec2>& ring) {
    size_t n = ring.size();
    bool inside = false;
    for (size_t i = 0, j = n - 1; i < n; j = i++) {
        const Vec2& a = ring[i];
        const Vec2& b = ring[j];
        // On-edge check first.
        Vec2 ab = b - a;
        Vec2 ap = p - a;
        double cr = ab.cross(ap);
        if (std::abs(cr) < 1e-12 && ap.dot(ab) >= 0 && ap.dot(ab) <= ab.dot(ab)) {
            return true;
        }
        if ((a.y > p.y) != (b.y > p.y)) {
            double xint = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if (p.x < xint) inside = !inside;
        }
    }
    return inside;
}

namespace {

bool segments_intersect(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
    auto orient = [](const Vec2& p, const Vec2& q, const Vec2& r) {
        double v = (q - p).cross(r - p);
        if (v > 1e-12) return 1;
        if (v < -1e-12) return -1;
        return 0;
    };
    int o1 = orient(a, b, c), o2 = orient(a, b, d);
    int o3 = orient(c, d, a), o4 = orient(c, d, b);
    return o1 != o2 && o3 != o4;
}

}  // namespace

bool polygon_is_simple(const std::vector<Vec2>& ring) {
    size_t n = ring.size();
    if (n < 3) return false;
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i + 1; j < n; ++j) {
            // Skip adjacent edges (they share a vertex).
            if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
            if (segments_intersect(ring[i], ring[(i + 1) % n], ring[j], ring[(j + 1) % n])) {
                return false;
            }
        }
    }
    return true;
}

double distance_to_polyline(const Vec2& p, const std::vector<Vec2>& path) {
    double best = std::numeric_limits<double>::max();
    if (path.size() == 1) return (p - path[0]).norm();
    for (size_t i = 0; i + 1 < path.size(); ++i) {
        Vec2 a = path[i], b = path[i + 1];
        Vec2 ab = b - a;
        double len2 = ab.dot(ab);
        double t = len2 > 0 ? std::clamp((p - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
        best = std::min(best, (p - (a + ab * t)).norm());
    }
    return best;
}

std::vector<Vec2> convex_hull(std::vector<Vec2> pts) {
    std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const Vec2& a, const Vec2& b) { return a.x == b.x && a.y == b.y; }),
              pts.end());
    size_t n = pts.size();
    if (n < 3) return {};
    std::vector<Vec2> hull(2 * n);
    size_t k = 0;
    for (size_t i = 0; i < n; ++i) {
        while (k >= 2 && (hull[k - 1] - hull[k - 2]).cross(pts[i] - hull[k - 2]) <= 1e-12) --k;
        hull[k++] = pts[i];
    }
    size_t lower = k + 1;
    for (size_t i = n - 1; i-- > 0;) {
        while (k >= lower && (hull[k - 1] - hull[k - 2]).cross(pts[i] - hull[k - 2]) <= 1e-12) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    if (hull.size() < 3) return {};
    return hull;
}

Obb2 oriented_bounding_box(const std::vector<Vec2>& ring) {
    std::vector<Vec2> hull = convex_hull(ring);
    if (hull.empty()) hull = ring;
    double best_area = std::numeric_limits<double>::max();
    Obb2 best;
    size_t n = hull.size();
    for (size_t i = 0; i < n; ++i) {
        Vec2 dir = (hull[(i + 1) % n] - hull[i]).normalized();
        if (dir.norm() == 0) continue;
        Vec2 perp = dir.perp();
        double ulo = std::numeric_limits<double>::max(), uhi = -ulo;
        double vlo = ulo, vhi = -ulo;
        for (const Vec2& p : hull) {
            double u = p.dot(dir), v = p.dot(perp);
            ulo = std::min(ulo, u);
            uhi = std::max(uhi, u);
            vlo = std::min(vlo, v);
            vhi = std::max(vhi, v);
        }
        double area = (uhi - ulo) * (vhi - vlo);
        if (area < best_area) {
            best_area = area;
            double uc = 0.5 * (ulo + uhi), vc = 0.5 * (vlo + vhi);
            Obb2 box;
            box.center = dir * uc + perp * vc;
            if (uhi - ulo >= vhi - vlo) {
                box.axis = dir;
                box.half_long = 0.5 * (uhi - ulo);
                box.half_short = 0.5 * (vhi - vlo);
            } else {
                box.axis = perp;
                box.half_long = 0.5 * (vhi - vlo);
                box.half_short = 0.5 * (uhi - ulo);
            }
            best = box;
        }
    }
    return best;
}

std::vector<std::array<int, 3>> triangulate_polygon(const std::vector<Vec2>& ring) {
    std::vector<int> idx(ring.size());
    for (size_t i = 0; i < ring.size(); ++i) idx[i] = static_cast<int>(i);
    std::vector<std::array<int, 3>> tris;
    auto is_convex = [&](int a, int b, int c) {
        return (ring[b] - ring[a]).cross(ring[c] - ring[b]) > 1e-12;
    };
    auto in_tri = [&](const Vec2& p, int a, int b, int c) {
        double d1 = (ring[b] - ring[a]).cross(p - ring[a]);
        double d2 = (ring[c] - ring[b]).cross(p - ring[b]);
        double d3 = (ring[a] - ring[c]).cross(p - ring[c]);
        return d1 >= -1e-12 && d2 >= -1e-12 && d3 >= -1e-12;
    };
    int guard = 0;
    while (idx.size() > 3 && guard++ < 100000) {
        bool clipped = false;
        size_t m = idx.size();
        for (size_t i = 0; i < m; ++i) {
            int a = idx[(i + m - 1) % m], b = idx[i], c = idx[(i + 1) % m];
            if (!is_convex(a, b, c)) continue;
            bool ear = true;
            for (int j : idx) {
                if (j == a || j == b || j == c) continue;
                if (in_tri(ring[j], a, b, c)) {
                    ear = false;
                    break;
                }
            }
            if (ear) {
                tris.push_back({a, b, c});
                idx.erase(idx.begin() + static_cast<long>(i));
                clipped = true;
                break;
            }
        }
        if (!clipped) break;  // degenerate remainder; emit what we have
    }
    if (idx.size() == 3) tris.push_back({idx[0], idx[1], idx[2]});
    return tris;
}

}  // namespace citysynth
