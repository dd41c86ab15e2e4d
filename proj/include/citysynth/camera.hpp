#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "citysynth/geometry.hpp"

namespace citysynth {

struct CameraIntrinsics {
    int image_width = 512;
    int image_height = 512;
    double focal_length = 512.0;  // pixels
    double cx = 256.0;
    double cy = 256.0;

    void validate() const {
        if (image_width <= 0 || image_height <= 0 || focal_length <= 0) {
            throw std::invalid_argument("camera intrinsics must be positive");
        }
        if (cx < 0 || cx > image_width || cy < 0 || cy > image_height) {
            throw std::invalid_argument("principal point must lie inside the image");
        }
    }
};

// Camera looks along -z of its own frame; orientation maps camera frame to
// world. Nadir pose: identity-like rotation with +z up.
struct CameraPose {
    Vec3 position;
    Mat3 orientation;

    Vec3 view_direction() const { return orientation * Vec3{0, 0, -1}; }
    Vec3 to_world(const Vec3& p_cam) const { return orientation * p_cam + position; }
    Vec3 to_camera(const Vec3& p_world) const {
        return orientation.transposed_mul(p_world - position);
    }
};

// Pixel (u, v) ray direction in the camera frame, through the pixel center.
// +u is right (+x), +v is down (-y).
inline Vec3 pixel_ray_camera(const CameraIntrinsics& k, double u, double v) {
    return Vec3{(u + 0.5 - k.cx) / k.focal_length, (k.cy - (v + 0.5)) / k.focal_length, -1.0}
        .normalized();
}

// Project a camera-frame point to pixel coordinates; valid only for z < 0.
inline Vec2 project_camera(const CameraIntrinsics& k, const Vec3& p_cam) {
    double inv = 1.0 / -p_cam.z;
    return {k.cx + k.focal_length * p_cam.x * inv - 0.5,
            k.cy - k.focal_length * p_cam.y * inv - 0.5};
}

// CSV export: index,x,y,z,qw,qx,qy,qz.
std::string poses_to_csv(const std::vector<CameraPose>& poses);
std::vector<CameraPose> poses_from_csv(const std::string& text);

}  // namespace citysynth
