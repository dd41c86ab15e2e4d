#include "citysynth/kdtree.hpp"

#include <algorithm>
#include <stdexcept>

namespace citysynth {

namespace {

// Worse-than ordering for the result heap: larger distance first, and at
// equal distance the larger index first, so the heap top is always the
// candidate to evict.
bool worse(const KnnResult& a, const KnnResult& b) {
    return a.distance < b.distance || (a.distance == b.distance && a.index < b.index);
}

double axis_value(const Vec3& p, int axis) { return axis == 0 ? p.x : axis == 1 ? p.y : p.z; }

}  // namespace

KdTree::KdTree(std::vector<Vec3> points) : points_(std::move(points)) {
    order_.resize(points_.size());
    for (size_t i = 0; i < order_.size(); ++i) order_[i] = static_cast<uint32_t>(i);
    nodes_.reserve(points_.size());
    if (!points_.empty()) root_ = build(0, static_cast<int>(points_.size()));
}

int KdTree::build(int begin, int end) {
    Aabb3 box;
    for (int i = begin; i < end; ++i) box.expand(points_[order_[i]]);
    int axis = box.longest_axis();
    int mid = (begin + end) / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                     [&](uint32_t a, uint32_t b) {
                         double va = axis_value(points_[a], axis), vb = axis_value(points_[b], axis);
                         return va < vb || (va == vb && a < b);
                     });
    int node_idx = static_cast<int>(nodes_.size());
    nodes_.push_back({axis, order_[mid], -1, -1});
    if (mid > begin) {
        int l = build(begin, mid);
        nodes_[node_idx].left = l;
    }
    if (mid + 1 < end) {
        int r = build(mid + 1, end);
        nodes_[node_idx].right = r;
    }
    return node_idx;
}

void KdTree::search(int node_idx, const Vec3& q, int k, std::vector<KnnResult>& heap) const {
    const Node& node = nodes_[node_idx];
    const Vec3& p = points_[node.point];
    double d = (q - p).norm();
    KnnResult cand{node.point, d};
    if (static_cast<int>(heap.size()) < k) {
        heap.push_back(cand);
        std::push_heap(heap.begin(), heap.end(), worse);
    } else if (worse(cand, heap.front())) {
        std::pop_heap(heap.begin(), heap.end(), worse);
        heap.back() = cand;
        std::push_heap(heap.begin(), heap.end(), worse);
    }

    double diff = axis_value(q, node.axis) - axis_value(p, node.axis);
    int near = diff <= 0 ? node.left : node.right;
    int far = diff <= 0 ? node.right : node.left;
    if (near >= 0) search(near, q, k, heap);
    if (far >= 0) {
        // The far side can still hold a closer point, or an equal-distance
        // point with a lower index.
        if (static_cast<int>(heap.size()) < k || std::abs(diff) <= heap.front().distance) {
            search(far, q, k, heap);
        }
    }
}

std::vector<KnnResult> KdTree::knn(const Vec3& query, int k) const {
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    if (points_.empty()) throw std::invalid_argument("knn on an empty tree");
    // Fewer points than requested neighbours: return them all.
    k = std::min(k, static_cast<int>(points_.size()));
    std::vector<KnnResult> heap;
    heap.reserve(k);
    search(root_, query, k, heap);
    std::sort(heap.begin(), heap.end(), [](const KnnResult& a, const KnnResult& b) {
        return a.distance < b.distance || (a.distance == b.distance && a.index < b.index);
    });
    return heap;
}

std::vector<KnnResult> KdTree::knn_linear_scan(const Vec3& query, int k) const {
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    if (points_.empty()) throw std::invalid_argument("knn on an empty tree");
    k = std::min(k, static_cast<int>(points_.size()));
    std::vector<KnnResult> all(points_.size());
    for (size_t i = 0; i < points_.size(); ++i) {
        all[i] = {static_cast<uint32_t>(i), (query - points_[i]).norm()};
    }
    std::partial_sort(all.begin(), all.begin() + k, all.end(),
                      [](const KnnResult& a, const KnnResult& b) {
                          return a.distance < b.distance ||
                                 (a.distance == b.distance && a.index < b.index);
                      });
    all.resize(k);
    return all;
}

}  // namespace citysynth
