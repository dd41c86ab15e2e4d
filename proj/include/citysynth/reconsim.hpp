#pragma once

#include <cstdint>
#include <vector>

#include "citysynth/bvh.hpp"
#include "citysynth/camera.hpp"
#include "citysynth/pointcloud.hpp"
#include "citysynth/render.hpp"
#include "citysynth/templates.hpp"

namespace citysynth {

struct NoiseParams {
    double sigma0 = 0.03;          // jitter sd at zero depth, meters
    double depth_coeff = 0.0005;   // jitter growth per meter of depth
    double outlier_fraction = 0.02;
    double outlier_max_offset = 5.0;  // meters along the viewing ray
    int min_views = 2;
    double surface_density = 4.0;  // points per m^2
    bool crown_as_hull = true;
    uint64_t seed = 0;

    void validate() const;
    std::string digest() const;
};

struct RenderedFrame {
    DepthFrame depth;
    LabelFrame labels;
    CameraPose pose;
};

// Exact ground-truth cloud: every finite-depth pixel (subsampled by stride)
// unprojected to world. label = true_label = the pixel label.
LabeledPointCloud fuse_depth_frames(const std::vector<RenderedFrame>& frames,
                                    const CameraIntrinsics& intrinsics, int stride = 1);

// Parametric stand-in for photogrammetric reconstruction. Candidates are
// sampled on the scene surfaces (tree crowns swapped for their bounding
// ellipsoid surface when crown_as_hull), kept when visible from >= min_views
// poses, jittered along the viewing ray of the nearest pose, and a fraction
// pushed further out as floating mismatch points. true_label always carries
// the source surface class.
LabeledPointCloud simulate_photogrammetric_cloud(const Bvh& bvh,
                                                 const CameraIntrinsics& intrinsics,
                                                 const std::vector<CameraPose>& poses,
                                                 const NoiseParams& params,
                                                 const std::vector<CrownEllipsoid>& crowns = {},
                                                 int threads = 1);

}  // namespace citysynth
