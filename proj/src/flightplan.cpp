#include "citysynth/flightplan.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace citysynth {

void FlightParams::validate() const {
    if (altitude <= 0) throw std::invalid_argument("altitude must be positive");
    if (front_overlap < 0 || front_overlap >= 1 || side_overlap < 0 || side_overlap >= 1) {
        throw std::invalid_argument("overlaps must lie in [0, 1)");
    }
    if (headings_deg.empty()) throw std::invalid_argument("at least one heading required");
    Vec2 e = aoi.extent();
    if (e.x <= 0 || e.y <= 0) throw std::invalid_argument("aoi must have positive extent");
}

std::pair<double, double> ground_footprint(const CameraIntrinsics& k, double altitude) {
    k.validate();
    if (altitude <= 0) throw std::invalid_argument("altitude must be positive");
    return {altitude * k.image_width / k.focal_length, altitude * k.image_height / k.focal_length};
}

namespace {

// Camera +y is the flight direction, +x across-track, view straight down.
Mat3 heading_orientation(double heading_deg, double gimbal_pitch_deg) {
    double h = heading_deg * M_PI / 180.0;
    Mat3 m;
    m.col[0] = {std::sin(h), -std::cos(h), 0};
    m.col[1] = {std::cos(h), std::sin(h), 0};
    m.col[2] = {0, 0, 1};
    if (gimbal_pitch_deg != 0.0) {
        double p = gimbal_pitch_deg * M_PI / 180.0;
        Mat3 rx;  // rotation about camera x: tilts the view forward
        rx.col[0] = {1, 0, 0};
        rx.col[1] = {0, std::cos(p), std::sin(p)};
        rx.col[2] = {0, -std::sin(p), std::cos(p)};
        m = m * rx;
    }
    return m;
}

}  // namespace

std::vector<CameraPose> plan_lawnmower(const FlightParams& params, double heading_deg,
                                       const CameraIntrinsics& intrinsics) {
    params.validate();
    auto [fw, fh] = ground_footprint(intrinsics, params.altitude);
    double line_spacing = fw * (1.0 - params.side_overlap);
    double shot_spacing = fh * (1.0 - params.front_overlap);

    double h = heading_deg * M_PI / 180.0;
    Vec2 along{std::cos(h), std::sin(h)};
    Vec2 across = along.perp() * -1.0;  // matches camera +x

    // Project the aoi corners onto the flight axes.
    double a_lo = 1e300, a_hi = -1e300, c_lo = 1e300, c_hi = -1e300;
    Vec2 corners[4] = {params.aoi.lo,
                       {params.aoi.hi.x, params.aoi.lo.y},
                       params.aoi.hi,
                       {params.aoi.lo.x, params.aoi.hi.y}};
    for (const Vec2& p : corners) {
        double a = p.dot(along), c = p.dot(across);
        a_lo = std::min(a_lo, a);
        a_hi = std::max(a_hi, a);
        c_lo = std::min(c_lo, c);
        c_hi = std::max(c_hi, c);
    }

    auto positions = [](double lo, double hi, double spacing) {
        int n = static_cast<int>(std::ceil((hi - lo) / spacing - 1e-9)) + 1;
        double span = (n - 1) * spacing;
        double start = 0.5 * (lo + hi) - 0.5 * span;
        std::vector<double> out(n);
        for (int i = 0; i < n; ++i) out[i] = start + i * spacing;
        return out;
    };
    std::vector<double> lines = positions(c_lo, c_hi, line_spacing);
    std::vector<double> shots = positions(a_lo, a_hi, shot_spacing);

    Mat3 fwd = heading_orientation(heading_deg, params.gimbal_pitch_deg);
    Mat3 bwd = heading_orientation(heading_deg + 180.0, params.gimbal_pitch_deg);

    std::vector<CameraPose> poses;
    poses.reserve(lines.size() * shots.size());
    for (size_t li = 0; li < lines.size(); ++li) {
        bool reversed = li % 2 == 1;  // serpentine
        for (size_t si = 0; si < shots.size(); ++si) {
            double a = reversed ? shots[shots.size() - 1 - si] : shots[si];
            Vec2 p = along * a + across * lines[li];
            CameraPose pose;
            pose.position = {p.x, p.y, params.altitude};
            pose.orientation = reversed ? bwd : fwd;
            poses.push_back(pose);
        }
    }
    return poses;
}

std::vector<CameraPose> plan_crosshatch(const FlightParams& params,
                                        const CameraIntrinsics& intrinsics) {
    params.validate();
    std::vector<CameraPose> poses;
    for (double heading : params.headings_deg) {
        std::vector<CameraPose> pass = plan_lawnmower(params, heading, intrinsics);
        poses.insert(poses.end(), pass.begin(), pass.end());
    }
    return poses;
}

}  // namespace citysynth
