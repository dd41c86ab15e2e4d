#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "citysynth/geometry.hpp"

namespace citysynth {

enum class CloudProvenance : uint8_t { kDepthFused = 0, kPhotogrammetricSim = 1 };

const char* provenance_name(CloudProvenance p);

// Points with a working label and the source-surface class, which no
// downstream operation may alter.
struct LabeledPointCloud {
    std::vector<Vec3> points;
    std::vector<uint8_t> label;
    std::vector<uint8_t> true_label;
    CloudProvenance provenance = CloudProvenance::kDepthFused;
    uint64_t seed = 0;
    std::string param_digest;  // free-form parameter record for the header

    size_t size() const { return points.size(); }
    void validate() const;
};

// Binary little-endian PLY: float x,y,z plus uchar label and true_label.
// The header comment records seed and parameter digest. `ascii` switches to
// the debug variant.
void write_cloud_ply(const LabeledPointCloud& cloud, const std::string& path, bool ascii = false);
LabeledPointCloud read_cloud_ply(const std::string& path);

}  // namespace citysynth
