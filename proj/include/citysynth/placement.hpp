#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "citysynth/footprint.hpp"
#include "citysynth/heightfield.hpp"
#include "citysynth/mesh.hpp"

namespace citysynth {

struct Placement {
    uint32_t object_id = 0;
    uint8_t sem_class = kClutter;
    Vec3 position;
    double yaw = 0.0;     // radians
    double scale = 1.0;
    Vec3 up{0, 0, 1};
};

struct PlacementConstraints {
    double min_distance = 0.0;  // global, meters (2D)
    // Optional per-class-pair override, keyed with the smaller class first.
    std::map<std::pair<uint8_t, uint8_t>, double> pair_min_distance;
    std::vector<Footprint> exclusion_polygons;
    Aabb2 region;
    int max_attempts = 64;  // consecutive rejections before giving up on a sample
    uint64_t seed = 0;

    double min_distance_for(uint8_t a, uint8_t b) const {
        auto key = a <= b ? std::make_pair(a, b) : std::make_pair(b, a);
        auto it = pair_min_distance.find(key);
        return it != pair_min_distance.end() ? it->second : min_distance;
    }
};

struct PlacementResult {
    std::vector<Placement> placements;
    bool saturated = false;  // dart throwing gave up before reaching count
};

// Dart throwing inside constraints.region: uniform candidates, rejected when
// inside an exclusion polygon or within min-distance of any accepted or
// pre-existing placement. Positions are z-snapped to the terrain.
PlacementResult place_random(uint8_t sem_class, int count,
                             std::pair<double, double> scale_range,
                             const PlacementConstraints& constraints, const Heightfield& terrain,
                             const std::vector<Placement>& existing = {},
                             uint32_t first_object_id = 1000);

struct Forest {
    std::vector<Vec2> boundary;  // convex hull polygon
    std::vector<Placement> trees;
};

// Random convex boundary (hull of hull_point_count samples) filled with
// trees at the given density. Spacing uses the constraints' tree-tree
// min distance.
Forest generate_forest(const Aabb2& region, double tree_density, int hull_point_count,
                       const PlacementConstraints& constraints, const Heightfield& terrain,
                       uint64_t seed, const std::vector<Placement>& existing = {},
                       uint32_t first_object_id = 1000);

// Placements at arc-length multiples of `spacing` along each road, offset
// perpendicular by uniform jitter in [-lateral_jitter, lateral_jitter].
// Exclusion and min-distance rules match place_random.
PlacementResult place_along_roads(uint8_t sem_class, const std::vector<std::vector<Vec2>>& roads,
                                  double spacing, double lateral_jitter,
                                  const PlacementConstraints& constraints,
                                  const Heightfield& terrain,
                                  const std::vector<Placement>& existing = {},
                                  uint32_t first_object_id = 1000);

// Vehicles take the terrain normal as up; everything else stays plumb.
Placement orient_to_terrain(Placement placement, const Heightfield& terrain);

}  // namespace citysynth
