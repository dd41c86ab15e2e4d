#include <doctest.h>

#include "citysynth/transfer.hpp"

using namespace citysynth;

namespace {

LabeledPointCloud make_cloud(std::vector<Vec3> pts, std::vector<uint8_t> labels) {
    LabeledPointCloud c;
    c.points = std::move(pts);
    c.label = labels;
    c.true_label = std::move(labels);
    return c;
}

RenderedFrame ground_frame(int size, double focal, double z) {
    RenderedFrame f;
    f.depth.width = f.depth.height = size;
    f.depth.depth.assign(static_cast<size_t>(size) * size, static_cast<float>(z));
    f.labels.width = f.labels.height = size;
    f.labels.labels.assign(static_cast<size_t>(size) * size, kGround);
    f.pose.position = {0, 0, z};
    return f;
}

}  // namespace

TEST_CASE("knn: coincident point inherits its label, k = 1") {
    LabeledPointCloud source = make_cloud({{0, 0, 0}, {5, 0, 0}}, {kGround, kBuilding});
    LabeledPointCloud target = make_cloud({{5, 0, 0}}, {kMissId});
    TransferParams params;
    params.k = 1;
    auto labels = annotate_by_knn(target, source, params);
    REQUIRE(labels.size() == 1);
    CHECK(labels[0] == kBuilding);
}

TEST_CASE("knn: majority of {building, building, tree} is building") {
    LabeledPointCloud source = make_cloud({{0, 0, 0}, {0.1, 0, 0}, {0, 0.1, 0}},
                                          {kBuilding, kBuilding, kTree});
    LabeledPointCloud target = make_cloud({{0.03, 0.03, 0}}, {kMissId});
    TransferParams params;
    params.k = 3;
    CHECK(annotate_by_knn(target, source, params)[0] == kBuilding);
}

TEST_CASE("knn: tie falls back to the single nearest neighbor") {
    // k = 2 with one label each: the nearest point decides.
    LabeledPointCloud source = make_cloud({{1, 0, 0}, {-2, 0, 0}}, {kTree, kBuilding});
    LabeledPointCloud target = make_cloud({{0, 0, 0}}, {kMissId});
    TransferParams params;
    params.k = 2;
    CHECK(annotate_by_knn(target, source, params)[0] == kTree);
}

TEST_CASE("knn: max_radius leaves remote points unresolved") {
    LabeledPointCloud source = make_cloud({{0, 0, 0}}, {kGround});
    LabeledPointCloud target = make_cloud({{0.5, 0, 0}, {100, 0, 0}}, {kMissId, kMissId});
    TransferParams params;
    params.k = 1;
    params.max_radius = 1.0;
    auto labels = annotate_by_knn(target, source, params);
    CHECK(labels[0] == kGround);
    CHECK(labels[1] == kMissId);
}

TEST_CASE("knn: self-transfer is exact") {
    std::vector<Vec3> pts;
    std::vector<uint8_t> labels;
    for (int i = 0; i < 500; ++i) {
        pts.push_back({double(i % 25), double(i / 25), 0});
        labels.push_back(static_cast<uint8_t>(i % kNumClasses));
    }
    LabeledPointCloud cloud = make_cloud(pts, labels);
    TransferParams params;
    params.k = 1;
    CHECK(annotate_by_knn(cloud, cloud, params) == labels);
}

TEST_CASE("knn: thread count never changes the answer") {
    std::vector<Vec3> src_pts, tgt_pts;
    std::vector<uint8_t> labels;
    for (int i = 0; i < 300; ++i) {
        src_pts.push_back({double(i % 20) * 0.7, double(i / 20) * 0.9, 0});
        labels.push_back(static_cast<uint8_t>(i % 3));
        tgt_pts.push_back({double(i % 17) * 0.8, double(i / 17) * 0.6, 0.1});
    }
    LabeledPointCloud source = make_cloud(src_pts, labels);
    LabeledPointCloud target = make_cloud(tgt_pts, std::vector<uint8_t>(300, kMissId));
    TransferParams params;
    CHECK(annotate_by_knn(target, source, params, 1) ==
          annotate_by_knn(target, source, params, 8));
}

TEST_CASE("projection: surface point under a nadir camera is labeled ground") {
    RenderedFrame f = ground_frame(32, 32.0, 50.0);
    CameraIntrinsics k{32, 32, 32.0, 16, 16};
    LabeledPointCloud target = make_cloud({{0, 0, 0}, {10, -5, 0}}, {kMissId, kMissId});
    auto labels = annotate_by_projection(target, {f}, k, false);
    CHECK(labels[0] == kGround);
    CHECK(labels[1] == kGround);
}

TEST_CASE("projection: floater takes the ground label without depth checking") {
    RenderedFrame f = ground_frame(32, 32.0, 50.0);
    CameraIntrinsics k{32, 32, 32.0, 16, 16};
    LabeledPointCloud target = make_cloud({{0, 0, 5}}, {kMissId});  // 5 m above ground
    CHECK(annotate_by_projection(target, {f}, k, false)[0] == kGround);
    // Depth check: stored depth 50 vs projected planar depth 45 -> rejected.
    CHECK(annotate_by_projection(target, {f}, k, true)[0] == kMissId);
}

TEST_CASE("projection: point outside every frustum stays unresolved") {
    RenderedFrame f = ground_frame(8, 8.0, 50.0);
    CameraIntrinsics k{8, 8, 8.0, 4, 4};
    LabeledPointCloud target = make_cloud({{1000, 0, 0}}, {kMissId});
    CHECK(annotate_by_projection(target, {f}, k, false)[0] == kMissId);
}

TEST_CASE("transfer params validation") {
    TransferParams p;
    p.k = 0;
    CHECK_THROWS(p.validate());
}
