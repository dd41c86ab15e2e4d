#include "citysynth/bvh.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace citysynth {

Bvh::Bvh(const SceneMesh& scene) : scene_(&scene) {
    size_t n = scene.triangle_count();
    if (n == 0) throw std::invalid_argument("cannot build a BVH over an empty scene");
    order_.resize(n);
    for (size_t i = 0; i < n; ++i) order_[i] = static_cast<uint32_t>(i);

    std::vector<Aabb3> boxes(n);
    std::vector<Vec3> centroids(n);
    for (size_t i = 0; i < n; ++i) {
        Aabb3 b;
        b.expand(scene.tri_vertex(i, 0));
        b.expand(scene.tri_vertex(i, 1));
        b.expand(scene.tri_vertex(i, 2));
        boxes[i] = b;
        centroids[i] = b.center();
    }
    nodes_.reserve(2 * n);
    build(0, static_cast<int>(n), boxes, centroids);
}

int Bvh::build(int first, int count, std::vector<Aabb3>& boxes, std::vector<Vec3>& centroids) {
    int node_idx = static_cast<int>(nodes_.size());
    nodes_.push_back({});
    Aabb3 box;
    for (int i = first; i < first + count; ++i) box.expand(boxes[order_[i]]);
    nodes_[node_idx].box = box;

    if (count <= kMaxLeafSize) {
        // Leaf triangles sorted by id so traversal order is canonical.
        std::sort(order_.begin() + first, order_.begin() + first + count);
        nodes_[node_idx].first = first;
        nodes_[node_idx].count = count;
        return node_idx;
    }

    Aabb3 cbox;
    for (int i = first; i < first + count; ++i) cbox.expand(centroids[order_[i]]);
    int axis = cbox.longest_axis();
    auto key = [&](uint32_t t) {
        const Vec3& c = centroids[t];
        return axis == 0 ? c.x : axis == 1 ? c.y : c.z;
    };
    int mid = first + count / 2;
    std::nth_element(order_.begin() + first, order_.begin() + mid, order_.begin() + first + count,
                     [&](uint32_t a, uint32_t b) {
                         double ka = key(a), kb = key(b);
                         return ka < kb || (ka == kb && a < b);  // deterministic layout
                     });

    int left = build(first, mid - first, boxes, centroids);
    int right = build(mid, first + count - mid, boxes, centroids);
    nodes_[node_idx].left = left;
    nodes_[node_idx].right = right;
    nodes_[node_idx].count = 0;
    return node_idx;
}

namespace {

bool ray_box(const Aabb3& b, const Vec3& o, const Vec3& inv_d, double t_max) {
    double t0 = 0.0, t1 = t_max;
    const double* lo = &b.lo.x;
    const double* hi = &b.hi.x;
    const double* op = &o.x;
    const double* ip = &inv_d.x;
    for (int a = 0; a < 3; ++a) {
        double ta = (lo[a] - op[a]) * ip[a];
        double tb = (hi[a] - op[a]) * ip[a];
        if (ta > tb) std::swap(ta, tb);
        t0 = std::max(t0, ta);
        t1 = std::min(t1, tb);
        if (t0 > t1) return false;
    }
    return true;
}

}  // namespace

bool Bvh::intersect_triangle(uint32_t tri, const Vec3& o, const Vec3& d, double& t) const {
    // Moller-Trumbore with inclusive edges, so rays grazing a shared edge hit
    // both triangles and the id tie-break stays well defined.
    Vec3 a = scene_->tri_vertex(tri, 0);
    Vec3 e1 = scene_->tri_vertex(tri, 1) - a;
    Vec3 e2 = scene_->tri_vertex(tri, 2) - a;
    Vec3 pvec = d.cross(e2);
    double det = e1.dot(pvec);
    if (std::abs(det) < 1e-14) return false;
    double inv_det = 1.0 / det;
    Vec3 tvec = o - a;
    double u = tvec.dot(pvec) * inv_det;
    if (u < 0.0 || u > 1.0) return false;
    Vec3 qvec = tvec.cross(e1);
    double v = d.dot(qvec) * inv_det;
    if (v < 0.0 || u + v > 1.0) return false;
    double tt = e2.dot(qvec) * inv_det;
    if (tt <= 1e-12) return false;
    t = tt;
    return true;
}

std::optional<RayHit> Bvh::ray_cast(const Vec3& origin, const Vec3& direction) const {
    double n = direction.norm();
    if (n < 1e-12) throw std::invalid_argument("ray direction must be nonzero");
    Vec3 d = direction * (1.0 / n);
    Vec3 inv_d{d.x != 0 ? 1.0 / d.x : 1e300, d.y != 0 ? 1.0 / d.y : 1e300,
               d.z != 0 ? 1.0 / d.z : 1e300};

    double best_t = std::numeric_limits<double>::max();
    uint32_t best_tri = 0;
    bool found = false;

    int stack[128];
    int sp = 0;
    stack[sp++] = 0;
    while (sp > 0) {
        const Node& node = nodes_[stack[--sp]];
        if (!ray_box(node.box, origin, inv_d, best_t)) continue;
        if (node.count > 0) {
            for (int i = node.first; i < node.first + node.count; ++i) {
                uint32_t tri = order_[i];
                double t;
                if (intersect_triangle(tri, origin, d, t)) {
                    if (t < best_t || (t == best_t && tri < best_tri)) {
                        best_t = t;
                        best_tri = tri;
                        found = true;
                    }
                }
            }
        } else {
            stack[sp++] = node.right;
            stack[sp++] = node.left;
        }
    }
    if (!found) return std::nullopt;
    return RayHit{best_t, best_tri, scene_->tri_class[best_tri], scene_->tri_object[best_tri]};
}

std::optional<RayHit> Bvh::ray_cast_brute_force(const Vec3& origin, const Vec3& direction) const {
    double n = direction.norm();
    if (n < 1e-12) throw std::invalid_argument("ray direction must be nonzero");
    Vec3 d = direction * (1.0 / n);
    double best_t = std::numeric_limits<double>::max();
    uint32_t best_tri = 0;
    bool found = false;
    for (uint32_t tri = 0; tri < scene_->triangle_count(); ++tri) {
        double t;
        if (intersect_triangle(tri, origin, d, t)) {
            if (t < best_t || (t == best_t && tri < best_tri)) {
                best_t = t;
                best_tri = tri;
                found = true;
            }
        }
    }
    if (!found) return std::nullopt;
    return RayHit{best_t, best_tri, scene_->tri_class[best_tri], scene_->tri_object[best_tri]};
}

}  // namespace citysynth
