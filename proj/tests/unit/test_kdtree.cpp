#include <doctest.h>

#include "citysynth/kdtree.hpp"
#include "citysynth/rng.hpp"

using namespace citysynth;

namespace {

std::vector<Vec3> random_points(int n, uint64_t seed) {
    Rng rng(seed);
    std::vector<Vec3> pts;
    for (int i = 0; i < n; ++i) {
        pts.push_back({rng.uniform(-10, 10), rng.uniform(-10, 10), rng.uniform(-10, 10)});
    }
    return pts;
}

}  // namespace

TEST_CASE("kdtree: single point answers every query") {
    KdTree tree({{1, 2, 3}});
    auto r = tree.knn({100, 100, 100}, 1);
    REQUIRE(r.size() == 1);
    CHECK(r[0].index == 0);
    CHECK(r[0].distance == doctest::Approx((Vec3{99, 98, 97}).norm()));
    // k larger than the point count clamps.
    CHECK(tree.knn({0, 0, 0}, 5).size() == 1);
}

TEST_CASE("kdtree: equidistant tie goes to the lower index") {
    KdTree tree({{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}});
    auto r = tree.knn({0, 0, 0}, 1);
    REQUIRE(r.size() == 1);
    CHECK(r[0].index == 0);
    CHECK(r[0].distance == doctest::Approx(1.0));
    // The oracle obeys the same rule.
    auto o = tree.knn_linear_scan({0, 0, 0}, 1);
    CHECK(o[0].index == 0);
}

TEST_CASE("kdtree: many duplicated points keep index ordering") {
    std::vector<Vec3> pts(10, Vec3{2, 2, 2});
    KdTree tree(pts);
    auto r = tree.knn({0, 0, 0}, 3);
    REQUIRE(r.size() == 3);
    CHECK(r[0].index == 0);
    CHECK(r[1].index == 1);
    CHECK(r[2].index == 2);
}

TEST_CASE("kdtree: linear-scan oracle agreement, k in {1,3,5}") {
    std::vector<Vec3> pts = random_points(1000, 31);
    KdTree tree(pts);
    Rng rng(32);
    for (int q = 0; q < 500; ++q) {
        Vec3 query{rng.uniform(-12, 12), rng.uniform(-12, 12), rng.uniform(-12, 12)};
        for (int k : {1, 3, 5}) {
            auto fast = tree.knn(query, k);
            auto slow = tree.knn_linear_scan(query, k);
            REQUIRE(fast.size() == slow.size());
            for (size_t i = 0; i < fast.size(); ++i) {
                CHECK(fast[i].index == slow[i].index);
                CHECK(fast[i].distance == slow[i].distance);
            }
        }
    }
}

TEST_CASE("kdtree: results sorted by (distance, index)") {
    std::vector<Vec3> pts = random_points(200, 9);
    KdTree tree(pts);
    auto r = tree.knn({0, 0, 0}, 10);
    REQUIRE(r.size() == 10);
    for (size_t i = 1; i < r.size(); ++i) {
        bool ordered = r[i - 1].distance < r[i].distance ||
                       (r[i - 1].distance == r[i].distance && r[i - 1].index < r[i].index);
        CHECK(ordered);
    }
}

TEST_CASE("kdtree: grid points exact nearest") {
    std::vector<Vec3> pts;
    for (int x = 0; x < 5; ++x) {
        for (int y = 0; y < 5; ++y) pts.push_back({double(x), double(y), 0});
    }
    KdTree tree(pts);
    auto r = tree.knn({2.2, 3.4, 0}, 1);
    CHECK(pts[r[0].index].x == 2.0);
    CHECK(pts[r[0].index].y == 3.0);
}
