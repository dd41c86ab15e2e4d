#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "citysynth/geometry.hpp"
#include "citysynth/mesh.hpp"

namespace citysynth {

struct RayHit {
    double t = 0.0;           // distance along the (unit) ray direction
    uint32_t triangle = 0;
    uint8_t sem_class = 0;
    uint32_t object = 0;
};

// Median-split BVH over the scene triangles. Construction is deterministic;
// the tree is immutable after build and shareable across threads.
class Bvh {
public:
    static constexpr int kMaxLeafSize = 4;

    explicit Bvh(const SceneMesh& scene);

    // Nearest positive-t intersection; ties at equal t go to the lower
    // triangle id. Direction must be unit length.
    std::optional<RayHit> ray_cast(const Vec3& origin, const Vec3& direction) const;

    // Linear-scan reference used by the verification suite.
    std::optional<RayHit> ray_cast_brute_force(const Vec3& origin, const Vec3& direction) const;

    const SceneMesh& scene() const { return *scene_; }
    size_t node_count() const { return nodes_.size(); }

    struct Node {
        Aabb3 box;
        int left = -1, right = -1;   // internal nodes
        int first = 0, count = 0;    // leaf triangle range into order_
    };
    const std::vector<Node>& nodes() const { return nodes_; }
    const std::vector<uint32_t>& triangle_order() const { return order_; }

private:
    int build(int first, int count, std::vector<Aabb3>& boxes, std::vector<Vec3>& centroids);
    bool intersect_triangle(uint32_t tri, const Vec3& origin, const Vec3& dir, double& t) const;

    const SceneMesh* scene_;
    std::vector<Node> nodes_;
    std::vector<uint32_t> order_;
};

}  // namespace citysynth
