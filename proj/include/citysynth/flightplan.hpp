#pragma once

#include <utility>
#include <vector>

#include "citysynth/camera.hpp"
#include "citysynth/geometry.hpp"

namespace citysynth {

struct FlightParams {
    Aabb2 aoi;
    double altitude = 100.0;  // meters above mean terrain
    double front_overlap = 0.8;
    double side_overlap = 0.7;
    std::vector<double> headings_deg = {0.0, 90.0};  // crosshatch default
    double gimbal_pitch_deg = 0.0;  // 0 = nadir; positive tilts forward

    void validate() const;
};

// Nadir ground footprint of one image on flat terrain.
std::pair<double, double> ground_footprint(const CameraIntrinsics& intrinsics, double altitude);

// Serpentine lines at the given heading. Line spacing =
// footprint_width * (1 - side_overlap); shot spacing =
// footprint_height * (1 - front_overlap). Line set is centered on the aoi
// and covers it with half-a-footprint margin.
std::vector<CameraPose> plan_lawnmower(const FlightParams& params, double heading_deg,
                                       const CameraIntrinsics& intrinsics);

// Concatenated lawnmower passes, heading-major ordering.
std::vector<CameraPose> plan_crosshatch(const FlightParams& params,
                                        const CameraIntrinsics& intrinsics);

}  // namespace citysynth
