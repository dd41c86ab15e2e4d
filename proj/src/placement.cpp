#include "citysynth/placement.hpp"

#include <cmath>
#include <stdexcept>

#include "citysynth/rng.hpp"

namespace citysynth {

namespace {

bool inside_exclusion(const Vec2& p, const PlacementConstraints& c) {
    for (const Footprint& fp : c.exclusion_polygons) {
        if (fp.contains(p)) return true;
    }
    return false;
}

bool violates_min_distance(const Vec2& p, uint8_t cls, const std::vector<Placement>& accepted,
                           const std::vector<Placement>& existing,
                           const PlacementConstraints& c) {
    auto check = [&](const Placement& other) {
        double d = c.min_distance_for(cls, other.sem_class);
        return d > 0 && (p - other.position.xy()).norm() < d;
    };
    for (const Placement& pl : accepted) {
        if (check(pl)) return true;
    }
    for (const Placement& pl : existing) {
        if (check(pl)) return true;
    }
    return false;
}

}  // namespace

PlacementResult place_random(uint8_t sem_class, int count, std::pair<double, double> scale_range,
                             const PlacementConstraints& constraints, const Heightfield& terrain,
                             const std::vector<Placement>& existing, uint32_t first_object_id) {
    Aabb2 te = terrain.extent();
    const Aabb2& r = constraints.region;
    if (r.lo.x < te.lo.x || r.lo.y < te.lo.y || r.hi.x > te.hi.x || r.hi.y > te.hi.y) {
        throw std::invalid_argument("placement region lies outside the terrain extent");
    }
    if (constraints.max_attempts < 1) throw std::invalid_argument("max_attempts must be >= 1");

    PlacementResult result;
    Rng rng(hash_label(constraints.seed, "place-random"), sem_class);
    for (int n = 0; n < count; ++n) {
        bool accepted = false;
        for (int attempt = 0; attempt < constraints.max_attempts; ++attempt) {
            Vec2 p{rng.uniform(r.lo.x, r.hi.x), rng.uniform(r.lo.y, r.hi.y)};
            if (inside_exclusion(p, constraints)) continue;
            if (violates_min_distance(p, sem_class, result.placements, existing, constraints)) {
                continue;
            }
            Placement pl;
            pl.object_id = first_object_id + static_cast<uint32_t>(result.placements.size());
            pl.sem_class = sem_class;
            pl.position = {p.x, p.y, terrain.sample(p)};
            pl.yaw = rng.uniform(0, 2 * M_PI);
            pl.scale = rng.uniform(scale_range.first, scale_range.second);
            result.placements.push_back(pl);
            accepted = true;
            break;
        }
        if (!accepted) {
            result.saturated = true;
            break;
        }
    }
    return result;
}

Forest generate_forest(const Aabb2& region, double tree_density, int hull_point_count,
                       const PlacementConstraints& constraints, const Heightfield& terrain,
                       uint64_t seed, const std::vector<Placement>& existing,
                       uint32_t first_object_id) {
    if (tree_density <= 0) throw std::invalid_argument("tree_density must be positive");
    if (hull_point_count < 3) throw std::invalid_argument("hull_point_count must be >= 3");

    Rng rng(hash_label(seed, "forest"));
    Forest forest;
    for (int attempt = 0;; ++attempt) {
        std::vector<Vec2> pts;
        pts.reserve(hull_point_count);
        for (int i = 0; i < hull_point_count; ++i) {
            pts.push_back({rng.uniform(region.lo.x, region.hi.x),
                           rng.uniform(region.lo.y, region.hi.y)});
        }
        forest.boundary = convex_hull(pts);
        if (!forest.boundary.empty()) break;
        if (attempt + 1 >= constraints.max_attempts) {
            throw std::runtime_error("forest boundary degenerate after max_attempts retries");
        }
    }

    double area = polygon_signed_area(forest.boundary);
    int count = static_cast<int>(std::llround(tree_density * area));
    Aabb2 bb;
    for (const Vec2& p : forest.boundary) bb.expand(p);

    double min_d = constraints.min_distance_for(kTree, kTree);
    for (int n = 0; n < count; ++n) {
        for (int attempt = 0; attempt < constraints.max_attempts; ++attempt) {
            Vec2 p{rng.uniform(bb.lo.x, bb.hi.x), rng.uniform(bb.lo.y, bb.hi.y)};
            if (!point_in_polygon(p, forest.boundary)) continue;
            if (inside_exclusion(p, constraints)) continue;
            bool conflict = false;
            for (const Placement& t : forest.trees) {
                if ((p - t.position.xy()).norm() < min_d) {
                    conflict = true;
                    break;
                }
            }
            if (!conflict) {
                for (const Placement& t : existing) {
                    double d = constraints.min_distance_for(kTree, t.sem_class);
                    if (d > 0 && (p - t.position.xy()).norm() < d) {
                        conflict = true;
                        break;
                    }
                }
            }
            if (conflict) continue;
            Placement pl;
            pl.object_id = first_object_id + static_cast<uint32_t>(forest.trees.size());
            pl.sem_class = kTree;
            pl.position = {p.x, p.y, terrain.contains(p) ? terrain.sample(p) : 0.0};
            pl.yaw = rng.uniform(0, 2 * M_PI);
            pl.scale = rng.uniform(0.8, 1.2);
            forest.trees.push_back(pl);
            break;
        }
    }
    return forest;
}

PlacementResult place_along_roads(uint8_t sem_class, const std::vector<std::vector<Vec2>>& roads,
                                  double spacing, double lateral_jitter,
                                  const PlacementConstraints& constraints,
                                  const Heightfield& terrain,
                                  const std::vector<Placement>& existing,
                                  uint32_t first_object_id) {
    if (spacing <= 0) throw std::invalid_argument("road spacing must be positive");
    PlacementResult result;
    Rng rng(hash_label(constraints.seed, "place-roads"), sem_class);
    Aabb2 te = terrain.extent();

    for (const auto& road : roads) {
        if (road.size() < 2) continue;  // skipped with warning at the CLI layer
        double total = 0;
        for (size_t i = 0; i + 1 < road.size(); ++i) total += (road[i + 1] - road[i]).norm();

        for (double s = 0; s <= total + 1e-9; s += spacing) {
            // Walk the polyline to arc length s.
            double remaining = std::min(s, total);
            Vec2 pos = road[0], dir{1, 0};
            for (size_t i = 0; i + 1 < road.size(); ++i) {
                double seg = (road[i + 1] - road[i]).norm();
                if (remaining <= seg || i + 2 == road.size()) {
                    dir = (road[i + 1] - road[i]).normalized();
                    pos = road[i] + dir * std::min(remaining, seg);
                    break;
                }
                remaining -= seg;
            }
            double offset = lateral_jitter > 0 ? rng.uniform(-lateral_jitter, lateral_jitter) : 0.0;
            Vec2 p = pos + dir.perp() * offset;
            if (!te.contains(p)) continue;
            if (inside_exclusion(p, constraints)) continue;
            if (violates_min_distance(p, sem_class, result.placements, existing, constraints)) {
                continue;
            }
            Placement pl;
            pl.object_id = first_object_id + static_cast<uint32_t>(result.placements.size());
            pl.sem_class = sem_class;
            pl.position = {p.x, p.y, terrain.sample(p)};
            pl.yaw = std::atan2(dir.y, dir.x);
            pl.scale = 1.0;
            result.placements.push_back(pl);
        }
    }
    return result;
}

Placement orient_to_terrain(Placement placement, const Heightfield& terrain) {
    Vec2 p = placement.position.xy();
    if (!terrain.contains(p)) return placement;
    placement.position.z = terrain.sample(p);
    placement.up = placement.sem_class == kVehicle ? terrain.normal_at(p) : Vec3{0, 0, 1};
    return placement;
}

}  // namespace citysynth
