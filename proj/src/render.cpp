#include "citysynth/render.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace citysynth {

std::pair<DepthFrame, LabelFrame> render_frame(const Bvh& bvh, const CameraPose& pose,
                                               const CameraIntrinsics& intrinsics, int threads) {
    intrinsics.validate();
    int w = intrinsics.image_width, h = intrinsics.image_height;
    DepthFrame depth{w, h, std::vector<float>(static_cast<size_t>(w) * h, kDepthMiss)};
    LabelFrame labels{w, h, std::vector<uint8_t>(static_cast<size_t>(w) * h, kMissId)};

    Vec3 axis = pose.view_direction();
    auto render_rows = [&](int v0, int v1) {
        for (int v = v0; v < v1; ++v) {
            for (int u = 0; u < w; ++u) {
                Vec3 dir = pose.orientation * pixel_ray_camera(intrinsics, u, v);
                auto hit = bvh.ray_cast(pose.position, dir);
                if (hit) {
                    size_t idx = static_cast<size_t>(v) * w + u;
                    depth.depth[idx] = static_cast<float>(hit->t * dir.dot(axis));
                    labels.labels[idx] = hit->sem_class;
                }
            }
        }
    };

    if (threads <= 1) {
        render_rows(0, h);
    } else {
        std::vector<std::thread> pool;
        int chunk = (h + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            int v0 = t * chunk, v1 = std::min(h, v0 + chunk);
            if (v0 < v1) pool.emplace_back(render_rows, v0, v1);
        }
        for (auto& th : pool) th.join();
    }
    return {std::move(depth), std::move(labels)};
}

void write_pfm(const DepthFrame& frame, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "Pf\n" << frame.width << " " << frame.height << "\n-1.0\n";
    // PFM stores rows bottom-up.
    for (int v = frame.height - 1; v >= 0; --v) {
        out.write(reinterpret_cast<const char*>(&frame.depth[static_cast<size_t>(v) * frame.width]),
                  static_cast<std::streamsize>(frame.width) * 4);
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

DepthFrame read_pfm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::string magic;
    int w, h;
    double scale;
    in >> magic >> w >> h >> scale;
    if (magic != "Pf" || scale > 0) throw std::runtime_error("unsupported PFM: " + path);
    in.get();  // single whitespace after the header
    DepthFrame frame{w, h, std::vector<float>(static_cast<size_t>(w) * h)};
    for (int v = h - 1; v >= 0; --v) {
        in.read(reinterpret_cast<char*>(&frame.depth[static_cast<size_t>(v) * w]),
                static_cast<std::streamsize>(w) * 4);
    }
    if (!in) throw std::runtime_error("truncated PFM: " + path);
    return frame;
}

void write_pgm(const LabelFrame& frame, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "P5\n" << frame.width << " " << frame.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(frame.labels.data()),
              static_cast<std::streamsize>(frame.labels.size()));
    if (!out) throw std::runtime_error("write failed: " + path);
}

LabelFrame read_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::string magic;
    int w, h, maxval;
    in >> magic >> w >> h >> maxval;
    if (magic != "P5" || maxval != 255) throw std::runtime_error("unsupported PGM: " + path);
    in.get();
    LabelFrame frame{w, h, std::vector<uint8_t>(static_cast<size_t>(w) * h)};
    in.read(reinterpret_cast<char*>(frame.labels.data()),
            static_cast<std::streamsize>(frame.labels.size()));
    if (!in) throw std::runtime_error("truncated PGM: " + path);
    return frame;
}

}  // namespace citysynth
