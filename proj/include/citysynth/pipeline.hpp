#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "citysynth/building.hpp"
#include "citysynth/flightplan.hpp"
#include "citysynth/placement.hpp"
#include "citysynth/reconsim.hpp"
#include "citysynth/transfer.hpp"

namespace citysynth {

// Full pipeline configuration; serialized as JSON. Presets mirror the four
// synthetic training-set variants.
struct PipelineConfig {
    // inputs / outputs
    std::string dsm_path;
    std::string footprints_path;
    std::string roads_path;
    std::string output_dir;

    // terrain
    int upsample_factor = 4;
    bool detail_enabled = true;
    DetailParams detail;  // seed field ignored; fanned out from master seed

    // buildings
    BuildingParams buildings;

    // placement
    std::string placement_mode = "road_aligned";  // or "random"
    int tree_count = 60;
    int vehicle_count = 0;
    int clutter_count = 40;
    double clutter_spacing = 15.0;
    double clutter_jitter = 2.0;
    double min_distance = 2.0;
    int forest_count = 0;
    double forest_tree_density = 0.08;
    int forest_hull_points = 8;
    double forest_region_fraction = 0.35;  // of the scene extent
    double scale_min = 0.8, scale_max = 1.2;
    int max_attempts = 64;

    // flight
    double altitude = 100.0;
    double front_overlap = 0.8;
    double side_overlap = 0.7;
    std::vector<double> headings_deg = {0.0, 90.0};

    // render
    int render_width = 512;
    int render_height = 512;
    double focal_length = 512.0;

    // reconstruction
    NoiseParams noise;
    std::string provenance = "photogrammetric_sim";  // or "depth_fused"
    int fuse_stride = 2;

    // annotation
    std::string transfer_method = "knn";  // "knn", "projection", or "none"
    TransferParams transfer;
    bool projection_depth_check = false;

    // evaluation
    int eval_n_classes = kNumClasses;
    std::map<uint8_t, uint8_t> eval_class_map;

    uint64_t seed = 42;
    int threads = 4;

    nlohmann::json to_json() const;
    static PipelineConfig from_json(const nlohmann::json& doc);
    static PipelineConfig load(const std::string& path);
    void save(const std::string& path) const;
    void validate() const;

    CameraIntrinsics intrinsics() const {
        return {render_width, render_height, focal_length, render_width / 2.0,
                render_height / 2.0};
    }
};

// The four dataset presets. Neighbors differ only in the documented toggles.
PipelineConfig preset(const std::string& name);

struct StageError : std::runtime_error {
    StageError(const std::string& stage, const std::string& cause)
        : std::runtime_error("stage '" + stage + "' failed: " + cause), stage(stage) {}
    std::string stage;
};

// Stage entry points; each reads its inputs from and writes its outputs to
// config.output_dir. Chaining all six equals run_pipeline bit for bit.
void stage_generate_scene(const PipelineConfig& config);
void stage_plan_flight(const PipelineConfig& config);
void stage_render(const PipelineConfig& config);
void stage_reconstruct(const PipelineConfig& config);
void stage_annotate(const PipelineConfig& config);
void stage_evaluate(const PipelineConfig& config);

// All stages in order plus the manifest.
void run_pipeline(const PipelineConfig& config);

// FNV-1a 64 over a file's bytes, hex-encoded; used for manifest checksums.
std::string file_checksum(const std::string& path);

// Artifact file names inside output_dir.
namespace artifact {
inline constexpr const char* kSceneMesh = "scene.ply";
inline constexpr const char* kCrowns = "crowns.json";
inline constexpr const char* kPlacements = "placements.csv";
inline constexpr const char* kPoses = "poses.csv";
inline constexpr const char* kFramesDir = "frames";
inline constexpr const char* kGtCloud = "gt_cloud.ply";
inline constexpr const char* kPhotoCloud = "photo_cloud.ply";
inline constexpr const char* kAnnotatedCloud = "annotated.ply";
inline constexpr const char* kMetricsCsv = "metrics.csv";
inline constexpr const char* kMetricsJson = "metrics.json";
inline constexpr const char* kManifest = "manifest.json";
}  // namespace artifact

}  // namespace citysynth
