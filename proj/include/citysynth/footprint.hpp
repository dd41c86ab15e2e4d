#pragma once

#include <optional>
#include <string>
#include <vector>

#include "citysynth/geometry.hpp"

namespace citysynth {

// Building outline. Ring is counter-clockwise, closed implicitly.
struct Footprint {
    int id = 0;
    std::vector<Vec2> ring;
    std::optional<double> height_override;  // per-feature "height" property

    double area() const { return polygon_signed_area(ring); }
    bool contains(const Vec2& p) const { return point_in_polygon(p, ring); }
};

// GeoJSON subset: FeatureCollection of Polygon features, outer ring only,
// coordinates in scene meters. Rings are normalized to counter-clockwise.
std::vector<Footprint> parse_footprints(const std::string& text);

// Same subset with LineString features.
std::vector<std::vector<Vec2>> parse_roads(const std::string& text);

}  // namespace citysynth
