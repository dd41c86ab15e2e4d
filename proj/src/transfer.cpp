#include "citysynth/transfer.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace citysynth {

void TransferParams::validate() const {
    if (k < 1) throw std::invalid_argument("k must be >= 1");
}

std::vector<uint8_t> annotate_by_projection(const LabeledPointCloud& target,
                                            const std::vector<RenderedFrame>& frames,
                                            const CameraIntrinsics& intrinsics, bool depth_check) {
    if (frames.empty()) throw std::invalid_argument("projection annotation needs frames");
    constexpr double kDepthTolerance = 0.5;  // meters

    std::vector<uint8_t> labels(target.size(), kMissId);
    for (size_t i = 0; i < target.size(); ++i) {
        const Vec3& p = target.points[i];
        double best_angle = 1e300;
        for (const RenderedFrame& f : frames) {
            Vec3 p_cam = f.pose.to_camera(p);
            if (p_cam.z >= -1e-9) continue;
            Vec2 px = project_camera(intrinsics, p_cam);
            int u = static_cast<int>(std::lround(px.x));
            int v = static_cast<int>(std::lround(px.y));
            if (u < 0 || u >= f.labels.width || v < 0 || v >= f.labels.height) continue;
            uint8_t l = f.labels.at(u, v);
            if (l == kMissId) continue;
            if (depth_check) {
                float stored = f.depth.at(u, v);
                if (!std::isfinite(stored) || std::abs(-p_cam.z - stored) > kDepthTolerance) {
                    continue;
                }
            }
            // View angle to nadir: between the viewing ray and straight down.
            Vec3 ray = (p - f.pose.position).normalized();
            double angle = std::acos(std::clamp(-ray.z, -1.0, 1.0));
            if (angle < best_angle) {
                best_angle = angle;
                labels[i] = l;
            }
        }
    }
    return labels;
}

std::vector<uint8_t> annotate_by_knn(const LabeledPointCloud& target,
                                     const LabeledPointCloud& source,
                                     const TransferParams& params, int threads) {
    params.validate();
    if (source.size() == 0) throw std::invalid_argument("knn annotation needs a nonempty source");
    int k = std::min<int>(params.k, static_cast<int>(source.size()));

    KdTree tree(source.points);
    std::vector<uint8_t> labels(target.size(), kMissId);

    auto process = [&](size_t begin, size_t end) {
        for (size_t i = begin; i < end; ++i) {
            std::vector<KnnResult> nn = tree.knn(target.points[i], k);
            std::array<int, 256> votes{};
            for (const KnnResult& r : nn) {
                if (params.max_radius >= 0 && r.distance > params.max_radius) continue;
                votes[source.label[r.index]]++;
            }
            int best = -1;
            uint8_t best_label = kMissId;
            bool tie = false;
            for (int c = 0; c < 256; ++c) {
                if (votes[c] > best) {
                    best = votes[c];
                    best_label = static_cast<uint8_t>(c);
                    tie = false;
                } else if (votes[c] == best && best > 0) {
                    tie = true;
                }
            }
            if (best <= 0) continue;  // nothing within max_radius
            if (tie) {
                // Ties break to the single nearest in-radius neighbor.
                for (const KnnResult& r : nn) {
                    if (params.max_radius >= 0 && r.distance > params.max_radius) continue;
                    best_label = source.label[r.index];
                    break;
                }
            }
            labels[i] = best_label;
        }
    };

    if (threads <= 1 || target.size() < 1024) {
        process(0, target.size());
    } else {
        std::vector<std::thread> pool;
        size_t chunk = (target.size() + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            size_t b = static_cast<size_t>(t) * chunk;
            size_t e = std::min(target.size(), b + chunk);
            if (b < e) pool.emplace_back(process, b, e);
        }
        for (auto& th : pool) th.join();
    }
    return labels;
}

}  // namespace citysynth
