#pragma once

#include <cstdint>
#include <vector>

#include "citysynth/camera.hpp"
#include "citysynth/kdtree.hpp"
#include "citysynth/pointcloud.hpp"
#include "citysynth/reconsim.hpp"

namespace citysynth {

struct TransferParams {
    int k = 3;
    double max_radius = -1.0;  // < 0 means unlimited

    void validate() const;
};

// Naive baseline: each target point is projected into every frame and takes
// the label from the least-oblique frame it lands in. With depth_check on,
// frames whose stored depth disagrees with the projected planar depth by
// more than 0.5 m are skipped. Unresolved points get 255.
std::vector<uint8_t> annotate_by_projection(const LabeledPointCloud& target,
                                            const std::vector<RenderedFrame>& frames,
                                            const CameraIntrinsics& intrinsics, bool depth_check);

// Majority label of the k nearest source points; ties go to the single
// nearest. Points with no source within max_radius get 255.
std::vector<uint8_t> annotate_by_knn(const LabeledPointCloud& target,
                                     const LabeledPointCloud& source,
                                     const TransferParams& params, int threads = 1);

}  // namespace citysynth
