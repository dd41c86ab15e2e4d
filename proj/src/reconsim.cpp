#include "citysynth/reconsim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "citysynth/rng.hpp"

namespace citysynth {

void NoiseParams::validate() const {
    if (sigma0 < 0) throw std::invalid_argument("sigma0 must be >= 0");
    if (outlier_fraction < 0 || outlier_fraction > 1) {
        throw std::invalid_argument("outlier_fraction must lie in [0, 1]");
    }
    if (min_views < 1) throw std::invalid_argument("min_views must be >= 1");
    if (surface_density <= 0) throw std::invalid_argument("surface_density must be positive");
}

std::string NoiseParams::digest() const {
    std::ostringstream s;
    s << "sigma0=" << sigma0 << " depth_coeff=" << depth_coeff
      << " outlier_fraction=" << outlier_fraction << " outlier_max_offset=" << outlier_max_offset
      << " min_views=" << min_views << " surface_density=" << surface_density
      << " crown_as_hull=" << (crown_as_hull ? 1 : 0);
    return s.str();
}

LabeledPointCloud fuse_depth_frames(const std::vector<RenderedFrame>& frames,
                                    const CameraIntrinsics& intrinsics, int stride) {
    if (stride < 1) throw std::invalid_argument("stride must be >= 1");
    LabeledPointCloud cloud;
    cloud.provenance = CloudProvenance::kDepthFused;
    for (const RenderedFrame& f : frames) {
        if (f.depth.width != intrinsics.image_width || f.depth.height != intrinsics.image_height ||
            f.labels.width != f.depth.width || f.labels.height != f.depth.height) {
            throw std::invalid_argument("frame size does not match intrinsics");
        }
        for (int v = 0; v < f.depth.height; v += stride) {
            for (int u = 0; u < f.depth.width; u += stride) {
                float d = f.depth.at(u, v);
                if (!std::isfinite(d)) continue;
                double xn = (u + 0.5 - intrinsics.cx) / intrinsics.focal_length;
                double yn = (intrinsics.cy - (v + 0.5)) / intrinsics.focal_length;
                Vec3 p_cam{xn * d, yn * d, -static_cast<double>(d)};
                cloud.points.push_back(f.pose.to_world(p_cam));
                uint8_t l = f.labels.at(u, v);
                cloud.label.push_back(l);
                cloud.true_label.push_back(l);
            }
        }
    }
    return cloud;
}

namespace {

struct Candidate {
    Vec3 point;
    uint8_t sem_class = 0;
    uint32_t object = 0;
    bool from_hull = false;
};

// Deterministic sample count: floor(expected) plus a seeded coin for the
// fractional part.
int sample_count(double expected, Rng& rng) {
    int n = static_cast<int>(std::floor(expected));
    if (rng.uniform() < expected - n) ++n;
    return n;
}

}  // namespace

LabeledPointCloud simulate_photogrammetric_cloud(const Bvh& bvh,
                                                 const CameraIntrinsics& intrinsics,
                                                 const std::vector<CameraPose>& poses,
                                                 const NoiseParams& params,
                                                 const std::vector<CrownEllipsoid>& crowns,
                                                 int threads) {
    params.validate();
    intrinsics.validate();
    if (poses.empty()) throw std::invalid_argument("photogrammetric simulation needs camera poses");
    const SceneMesh& scene = bvh.scene();

    // Candidate surface samples.
    std::vector<Candidate> candidates;
    uint64_t surf_seed = hash_label(params.seed, "surface-samples");
    for (size_t tri = 0; tri < scene.triangle_count(); ++tri) {
        if (params.crown_as_hull && scene.tri_class[tri] == kTree) {
            // Crown triangles are replaced by the ellipsoid hull below.
            Vec3 centroid = (scene.tri_vertex(tri, 0) + scene.tri_vertex(tri, 1) +
                             scene.tri_vertex(tri, 2)) * (1.0 / 3.0);
            bool in_crown = false;
            for (const CrownEllipsoid& c : crowns) {
                if (c.object_id == scene.tri_object[tri] && c.scaled_radius(centroid) <= 1.05) {
                    in_crown = true;
                    break;
                }
            }
            if (in_crown) continue;
        }
        Rng rng(surf_seed, tri);
        int n = sample_count(scene.tri_area(tri) * params.surface_density, rng);
        Vec3 a = scene.tri_vertex(tri, 0), b = scene.tri_vertex(tri, 1), c = scene.tri_vertex(tri, 2);
        for (int j = 0; j < n; ++j) {
            double r1 = rng.uniform(), r2 = rng.uniform();
            if (r1 + r2 > 1) {
                r1 = 1 - r1;
                r2 = 1 - r2;
            }
            candidates.push_back({a + (b - a) * r1 + (c - a) * r2, scene.tri_class[tri],
                                  scene.tri_object[tri], false});
        }
    }
    if (params.crown_as_hull) {
        uint64_t hull_seed = hash_label(params.seed, "hull-samples");
        for (size_t k = 0; k < crowns.size(); ++k) {
            const CrownEllipsoid& c = crowns[k];
            // Thomsen's approximation for the ellipsoid surface area.
            double p = 1.6075;
            double ap = std::pow(c.semiaxes.x, p), bp = std::pow(c.semiaxes.y, p),
                   cp = std::pow(c.semiaxes.z, p);
            double area = 4 * M_PI * std::pow((ap * bp + ap * cp + bp * cp) / 3.0, 1.0 / p);
            Rng rng(hull_seed, k);
            int n = sample_count(area * params.surface_density, rng);
            for (int j = 0; j < n; ++j) {
                double theta = rng.uniform(0, 2 * M_PI);
                double z = rng.uniform(-1.0, 1.0);
                double r = std::sqrt(std::max(0.0, 1.0 - z * z));
                Vec3 dir{r * std::cos(theta), r * std::sin(theta), z};
                Vec3 pt = c.center + Vec3{dir.x * c.semiaxes.x, dir.y * c.semiaxes.y,
                                          dir.z * c.semiaxes.z};
                candidates.push_back({pt, kTree, c.object_id, true});
            }
        }
    }

    std::vector<uint8_t> keep(candidates.size(), 0);
    std::vector<Vec3> out_points(candidates.size());
    uint64_t noise_seed = hash_label(params.seed, "noise");

    auto process = [&](size_t begin, size_t end) {
        std::vector<size_t> order(poses.size());
        for (size_t ci = begin; ci < end; ++ci) {
            const Candidate& cand = candidates[ci];
            // Check poses nearest-first; the first visible one is the jitter
            // reference and we can stop once min_views are confirmed.
            std::iota(order.begin(), order.end(), size_t{0});
            std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
                double da = (cand.point - poses[a].position).norm();
                double db = (cand.point - poses[b].position).norm();
                return da < db || (da == db && a < b);
            });
            int visible = 0;
            int nearest_visible = -1;
            for (size_t pi : order) {
                const CameraPose& pose = poses[pi];
                Vec3 p_cam = pose.to_camera(cand.point);
                if (p_cam.z >= -1e-9) continue;
                Vec2 px = project_camera(intrinsics, p_cam);
                if (px.x < -0.5 || px.x > intrinsics.image_width - 0.5 || px.y < -0.5 ||
                    px.y > intrinsics.image_height - 0.5) {
                    continue;
                }
                Vec3 delta = cand.point - pose.position;
                double dist = delta.norm();
                Vec3 dir = delta * (1.0 / dist);
                double tol = std::max(0.05, 1e-4 * dist);
                bool occluded = false;
                // Walk past self-surface / same-object hits.
                Vec3 origin = pose.position;
                double traveled = 0.0;
                for (int hop = 0; hop < 8; ++hop) {
                    auto hit = bvh.ray_cast(origin, dir);
                    if (!hit || traveled + hit->t >= dist - tol) break;
                    if (cand.from_hull && hit->object == cand.object) {
                        // Hull candidates ignore their own tree's geometry.
                        origin = origin + dir * (hit->t + 1e-6);
                        traveled += hit->t + 1e-6;
                        continue;
                    }
                    occluded = true;
                    break;
                }
                if (occluded) continue;
                ++visible;
                if (nearest_visible < 0) nearest_visible = static_cast<int>(pi);
                if (visible >= params.min_views) break;
            }
            if (visible < params.min_views) continue;

            const CameraPose& ref = poses[static_cast<size_t>(nearest_visible)];
            Vec3 delta = cand.point - ref.position;
            Vec3 dir = delta.normalized();
            double depth = -ref.to_camera(cand.point).z;  // planar depth
            Rng rng(noise_seed, ci);
            double sd = params.sigma0 + params.depth_coeff * depth;
            Vec3 p = cand.point;
            if (sd > 0) p = p + dir * (sd * rng.normal());
            if (params.outlier_fraction > 0 && rng.uniform() < params.outlier_fraction) {
                p = p + dir * rng.uniform(0.0, params.outlier_max_offset);
            }
            keep[ci] = 1;
            out_points[ci] = p;
        }
    };

    if (threads <= 1 || candidates.size() < 1024) {
        process(0, candidates.size());
    } else {
        std::vector<std::thread> pool;
        size_t chunk = (candidates.size() + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            size_t b = static_cast<size_t>(t) * chunk;
            size_t e = std::min(candidates.size(), b + chunk);
            if (b < e) pool.emplace_back(process, b, e);
        }
        for (auto& th : pool) th.join();
    }

    LabeledPointCloud cloud;
    cloud.provenance = CloudProvenance::kPhotogrammetricSim;
    cloud.seed = params.seed;
    cloud.param_digest = params.digest();
    for (size_t ci = 0; ci < candidates.size(); ++ci) {
        if (!keep[ci]) continue;
        cloud.points.push_back(out_points[ci]);
        cloud.label.push_back(candidates[ci].sem_class);
        cloud.true_label.push_back(candidates[ci].sem_class);
    }
    return cloud;
}

}  // namespace citysynth
