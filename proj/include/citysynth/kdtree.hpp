#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "citysynth/geometry.hpp"

namespace citysynth {

struct KnnResult {
    uint32_t index;
    double distance;
};

// Balanced 3D k-d tree. Queries match a linear scan exactly, including the
// tie rule: at equal distance the lower index wins.
class KdTree {
public:
    explicit KdTree(std::vector<Vec3> points);

    std::vector<KnnResult> knn(const Vec3& query, int k) const;
    // Reference implementation for the verification suite.
    std::vector<KnnResult> knn_linear_scan(const Vec3& query, int k) const;

    size_t size() const { return points_.size(); }

private:
    struct Node {
        int axis = 0;
        uint32_t point = 0;
        int left = -1, right = -1;
    };
    int build(int begin, int end);
    void search(int node, const Vec3& q, int k, std::vector<KnnResult>& heap) const;

    std::vector<Vec3> points_;
    std::vector<uint32_t> order_;
    std::vector<Node> nodes_;
    int root_ = -1;
};

}  // namespace citysynth
