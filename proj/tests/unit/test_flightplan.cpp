#include <doctest.h>

#include <cmath>

#include "citysynth/flightplan.hpp"

using namespace citysynth;

namespace {

FlightParams square_aoi(double size, double altitude = 100) {
    FlightParams p;
    p.aoi.expand({0, 0});
    p.aoi.expand({size, size});
    p.altitude = altitude;
    p.front_overlap = 0.8;
    p.side_overlap = 0.7;
    return p;
}

}  // namespace

TEST_CASE("ground footprint: analytic pinhole") {
    CameraIntrinsics k{1000, 1000, 1000.0, 500, 500};
    auto [w, h] = ground_footprint(k, 100.0);
    CHECK(w == doctest::Approx(100.0));
    CHECK(h == doctest::Approx(100.0));
    auto [w2, h2] = ground_footprint(k, 200.0);
    CHECK(w2 == doctest::Approx(200.0));  // linear in altitude

    CameraIntrinsics wide{1500, 1000, 1000.0, 750, 500};
    auto [w3, h3] = ground_footprint(wide, 100.0);
    CHECK(w3 == doctest::Approx(150.0));
    CHECK(h3 == doctest::Approx(100.0));
}

TEST_CASE("lawnmower: line and shot spacing from overlaps") {
    CameraIntrinsics k{1000, 1000, 1000.0, 500, 500};  // 100x100 m footprint at 100 m
    FlightParams p = square_aoi(400);
    std::vector<CameraPose> poses = plan_lawnmower(p, 0.0, k);
    // ceil(400/30)+1 = 15 lines, ceil(400/20)+1 = 21 shots per line.
    REQUIRE(poses.size() == 15 * 21);

    // Heading 0: lines run along +x, so y values step by the 30 m line spacing.
    std::vector<double> ys;
    for (const CameraPose& pose : poses) ys.push_back(pose.position.y);
    std::sort(ys.begin(), ys.end());
    ys.erase(std::unique(ys.begin(), ys.end(),
                         [](double a, double b) { return std::abs(a - b) < 1e-6; }),
             ys.end());
    REQUIRE(ys.size() == 15);
    for (size_t i = 1; i < ys.size(); ++i) CHECK(ys[i] - ys[i - 1] == doctest::Approx(30.0));
    // Line set centered on the aoi.
    CHECK((ys.front() + ys.back()) / 2 == doctest::Approx(200.0));

    // Consecutive same-line shots are 20 m apart = (1-0.8)*100.
    CHECK((poses[1].position - poses[0].position).norm() == doctest::Approx(20.0));

    for (const CameraPose& pose : poses) {
        CHECK(pose.position.z == doctest::Approx(100.0));
        CHECK(pose.view_direction().z == doctest::Approx(-1.0));  // nadir
    }
}

TEST_CASE("lawnmower: zero side overlap spaces lines a full footprint apart") {
    CameraIntrinsics k{1000, 1000, 1000.0, 500, 500};
    FlightParams p = square_aoi(400);
    p.side_overlap = 0.0;
    std::vector<CameraPose> poses = plan_lawnmower(p, 0.0, k);
    std::vector<double> ys;
    for (const CameraPose& pose : poses) ys.push_back(pose.position.y);
    std::sort(ys.begin(), ys.end());
    double step = 0;
    for (size_t i = 1; i < ys.size(); ++i) step = std::max(step, ys[i] - ys[i - 1]);
    CHECK(step == doctest::Approx(100.0));
}

TEST_CASE("lawnmower: serpentine ordering alternates direction") {
    CameraIntrinsics k{1000, 1000, 1000.0, 500, 500};
    FlightParams p = square_aoi(400);
    std::vector<CameraPose> poses = plan_lawnmower(p, 0.0, k);
    const int shots = 21;
    double dir0 = poses[1].position.x - poses[0].position.x;
    double dir1 = poses[shots + 1].position.x - poses[shots].position.x;
    CHECK(dir0 * dir1 < 0);  // adjacent lines flown in opposite directions
    // Along-track (+y of the camera frame) matches the flight direction.
    Vec3 along = poses[0].orientation * Vec3{0, 1, 0};
    CHECK(along.x * dir0 > 0);
}

TEST_CASE("crosshatch: concatenated headings, derived pose count 630") {
    CameraIntrinsics k{1000, 1000, 1000.0, 500, 500};
    FlightParams p = square_aoi(400);
    std::vector<CameraPose> poses = plan_crosshatch(p, k);
    CHECK(poses.size() == 630);  // 2 * 15 * 21

    p.headings_deg = {0.0};
    std::vector<CameraPose> single = plan_crosshatch(p, k);
    std::vector<CameraPose> lawn = plan_lawnmower(p, 0.0, k);
    REQUIRE(single.size() == lawn.size());
    for (size_t i = 0; i < single.size(); ++i) {
        CHECK((single[i].position - lawn[i].position).norm() < 1e-12);
    }
}

TEST_CASE("crosshatch: symmetric aoi gives equal pass sizes") {
    CameraIntrinsics k{1000, 1000, 1000.0, 500, 500};
    FlightParams p = square_aoi(350);
    size_t pass0 = plan_lawnmower(p, 0.0, k).size();
    size_t pass90 = plan_lawnmower(p, 90.0, k).size();
    CHECK(pass0 == pass90);
    CHECK(plan_crosshatch(p, k).size() == pass0 + pass90);
}

TEST_CASE("analytic front overlap of consecutive footprints") {
    CameraIntrinsics k{1000, 1000, 1000.0, 500, 500};
    FlightParams p = square_aoi(400);
    std::vector<CameraPose> poses = plan_lawnmower(p, 0.0, k);
    auto [fw, fh] = ground_footprint(k, p.altitude);
    double shot_spacing = (poses[1].position - poses[0].position).norm();
    double overlap = (fh - shot_spacing) / fh;
    CHECK(overlap == doctest::Approx(p.front_overlap).epsilon(1e-9));
}

TEST_CASE("flight params validation") {
    FlightParams p = square_aoi(100);
    p.front_overlap = 1.0;  // would give zero spacing
    CHECK_THROWS(p.validate());
    p = square_aoi(100);
    p.altitude = 0;
    CHECK_THROWS(p.validate());
}
