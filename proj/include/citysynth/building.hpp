#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "citysynth/footprint.hpp"
#include "citysynth/heightfield.hpp"
#include "citysynth/mesh.hpp"

namespace citysynth {

enum class RoofStyle { kFlat, kFlatParapet, kGable, kHip };

const char* roof_style_name(RoofStyle s);

struct BuildingParams {
    double height_min = 3.0;
    double height_max = 30.0;
    double floor_height = 3.0;
    double tile_width = 2.5;
    double window_inset = 0.0;  // 0 disables facade relief
    std::map<RoofStyle, double> roof_weights = {
        {RoofStyle::kFlat, 1.0},
        {RoofStyle::kFlatParapet, 1.0},
        {RoofStyle::kGable, 1.0},
        {RoofStyle::kHip, 1.0},
    };
    double parapet_height = 1.0;
    double pitch_min_deg = 20.0;
    double pitch_max_deg = 40.0;
    double roof_element_density = 0.0;  // boxes per m^2 of cap
    uint64_t seed = 0;

    void validate() const;
};

// Requested gable/hip on a footprint that fails the rectangularity gate.
// Callers fall back to a flat roof.
struct StyleNotApplicable : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// footprint area / oriented-bounding-box area, in (0, 1].
double rectangularity(const Footprint& fp);

// Uniform in [height_min, height_max] then snapped up to a whole number of
// floors; keyed by (seed, footprint id). Per-feature height overrides win.
std::vector<double> assign_heights(const std::vector<Footprint>& footprints,
                                   const BuildingParams& params, uint64_t seed);

// Walls from z = 0 up to `height`, facade split into floors and tiles with
// recessed window/door cells when window_inset > 0. All triangles class
// building. object_id tags every triangle.
SceneMesh extrude_building(const Footprint& fp, double height, const BuildingParams& params,
                           uint32_t object_id);

SceneMesh generate_roof(const Footprint& fp, double eave_height, RoofStyle style,
                        const BuildingParams& params, uint64_t seed, uint32_t object_id);

// assign_heights -> extrude -> roof for every footprint, merged in id order.
// Gable/hip draws that fail the rectangularity gate fall back to flat. When
// a terrain is given, each building is lifted to the elevation at its
// footprint centroid.
SceneMesh generate_building_set(const std::vector<Footprint>& footprints,
                                const BuildingParams& params, uint64_t seed,
                                const Heightfield* terrain = nullptr);

// Exposed for tests and tools: the facade split of one wall.
struct FacadeLayout {
    int floors = 0;
    int tiles = 0;
};
FacadeLayout facade_layout(double wall_length, double height, const BuildingParams& params);

// Seeded roof style draw for a given footprint id (also used by tests).
RoofStyle draw_roof_style(const BuildingParams& params, uint64_t seed, int footprint_id);

}  // namespace citysynth
