#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "citysynth/bvh.hpp"
#include "citysynth/camera.hpp"

namespace citysynth {

inline constexpr float kDepthMiss = std::numeric_limits<float>::infinity();

// Planar depth per pixel: distance along the camera optical axis, not ray
// length. Misses carry +infinity.
struct DepthFrame {
    int width = 0, height = 0;
    std::vector<float> depth;  // row-major

    float at(int u, int v) const { return depth[static_cast<size_t>(v) * width + u]; }
};

// Semantic class id per pixel; misses carry 255.
struct LabelFrame {
    int width = 0, height = 0;
    std::vector<uint8_t> labels;

    uint8_t at(int u, int v) const { return labels[static_cast<size_t>(v) * width + u]; }
};

// One primary ray through each pixel center. Deterministic regardless of
// the worker count (each row lands in its own slot).
std::pair<DepthFrame, LabelFrame> render_frame(const Bvh& bvh, const CameraPose& pose,
                                               const CameraIntrinsics& intrinsics,
                                               int threads = 1);

// PFM (grayscale, little-endian, negative scale) for depth; binary PGM (P5)
// for labels.
void write_pfm(const DepthFrame& frame, const std::string& path);
DepthFrame read_pfm(const std::string& path);
void write_pgm(const LabelFrame& frame, const std::string& path);
LabelFrame read_pgm(const std::string& path);

}  // namespace citysynth
