#include "citysynth/building.hpp"

#include <algorithm>
#include <cmath>

#include "citysynth/rng.hpp"

namespace citysynth {

const char* roof_style_name(RoofStyle s) {
    switch (s) {
        case RoofStyle::kFlat: return "flat";
        case RoofStyle::kFlatParapet: return "flat_parapet";
        case RoofStyle::kGable: return "gable";
        case RoofStyle::kHip: return "hip";
    }
    return "?";
}

void BuildingParams::validate() const {
    if (height_min <= 0 || height_min > height_max) {
        throw std::invalid_argument("building height range must satisfy 0 < min <= max");
    }
    if (floor_height <= 0) throw std::invalid_argument("floor_height must be positive");
    if (tile_width <= 0) throw std::invalid_argument("tile_width must be positive");
    if (window_inset < 0) throw std::invalid_argument("window_inset must be >= 0");
    double total = 0;
    for (const auto& [style, w] : roof_weights) {
        if (w < 0) throw std::invalid_argument("roof style weights must be >= 0");
        total += w;
    }
    if (total <= 0) throw std::invalid_argument("roof style weights must not all be zero");
    if (pitch_min_deg <= 0 || pitch_max_deg > 60 || pitch_min_deg > pitch_max_deg) {
        throw std::invalid_argument("roof pitch must satisfy 0 < min <= max <= 60 degrees");
    }
}

double rectangularity(const Footprint& fp) {
    Obb2 obb = oriented_bounding_box(fp.ring);
    double box_area = obb.area();
    return box_area > 0 ? fp.area() / box_area : 0.0;
}

std::vector<double> assign_heights(const std::vector<Footprint>& footprints,
                                   const BuildingParams& params, uint64_t seed) {
    params.validate();
    std::vector<double> heights;
    heights.reserve(footprints.size());
    for (const Footprint& fp : footprints) {
        if (fp.height_override) {
            heights.push_back(*fp.height_override);
            continue;
        }
        Rng rng(hash_label(seed, "height"), static_cast<uint64_t>(fp.id));
        double h = rng.uniform(params.height_min, params.height_max);
        // Snap up to a whole number of floors.
        h = std::ceil(h / params.floor_height - 1e-12) * params.floor_height;
        heights.push_back(h);
    }
    return heights;
}

FacadeLayout facade_layout(double wall_length, double height, const BuildingParams& params) {
    FacadeLayout l;
    l.floors = static_cast<int>(std::floor(height / params.floor_height + 1e-12));
    l.tiles = static_cast<int>(std::floor(wall_length / params.tile_width + 1e-12));
    return l;
}

namespace {

// Wall frame helper: emits a quad in the plane spanned by `along` (horizontal)
// and z, optionally pushed inward.
struct WallFrame {
    Vec2 start;   // 2D start of the wall edge
    Vec2 along;   // unit direction start -> end
    Vec2 inward;  // unit normal pointing into the building

    Vec3 at(double u, double z, double depth = 0.0) const {
        Vec2 p = start + along * u + inward * depth;
        return {p.x, p.y, z};
    }
};

void emit_wall_rect(SceneMesh& mesh, const WallFrame& w, double u0, double u1, double z0, double z1,
                    uint32_t obj, double depth = 0.0) {
    if (u1 - u0 <= 1e-12 || z1 - z0 <= 1e-12) return;
    mesh.add_quad(w.at(u0, z0, depth), w.at(u1, z0, depth), w.at(u1, z1, depth), w.at(u0, z1, depth),
                  kBuilding, obj);
}

// Recessed opening: pane pushed in by `inset`, with jamb quads on all four
// sides connecting the facade plane to the pane.
void emit_opening(SceneMesh& mesh, const WallFrame& w, double u0, double u1, double z0, double z1,
                  double inset, uint32_t obj) {
    emit_wall_rect(mesh, w, u0, u1, z0, z1, obj, inset);  // pane
    // jambs
    mesh.add_quad(w.at(u0, z0), w.at(u0, z0, inset), w.at(u0, z1, inset), w.at(u0, z1), kBuilding, obj);
    mesh.add_quad(w.at(u1, z0, inset), w.at(u1, z0), w.at(u1, z1), w.at(u1, z1, inset), kBuilding, obj);
    mesh.add_quad(w.at(u0, z0), w.at(u1, z0), w.at(u1, z0, inset), w.at(u0, z0, inset), kBuilding, obj);
    mesh.add_quad(w.at(u0, z1, inset), w.at(u1, z1, inset), w.at(u1, z1), w.at(u0, z1), kBuilding, obj);
}

void emit_facade(SceneMesh& mesh, const WallFrame& w, double length, double height,
                 const BuildingParams& params, uint32_t obj) {
    FacadeLayout layout = facade_layout(length, height, params);
    if (layout.floors == 0 || layout.tiles == 0) {
        emit_wall_rect(mesh, w, 0, length, 0, height, obj);
        return;
    }
    double grid_w = layout.tiles * params.tile_width;
    double grid_h = layout.floors * params.floor_height;
    double u_off = 0.5 * (length - grid_w);  // center the tile grid on the wall

    // Strips outside the grid stay plain.
    emit_wall_rect(mesh, w, 0, u_off, 0, height, obj);
    emit_wall_rect(mesh, w, u_off + grid_w, length, 0, height, obj);
    emit_wall_rect(mesh, w, u_off, u_off + grid_w, grid_h, height, obj);

    int door_tile = layout.tiles / 2;
    for (int f = 0; f < layout.floors; ++f) {
        double z0 = f * params.floor_height;
        for (int t = 0; t < layout.tiles; ++t) {
            double u0 = u_off + t * params.tile_width;
            double u1 = u0 + params.tile_width;
            double z1 = z0 + params.floor_height;
            bool door = (f == 0 && t == door_tile);
            // Opening rectangle within the cell: 60% width; windows span the
            // middle half of the floor, doors run from the ground up.
            double mw = 0.2 * params.tile_width;
            double ou0 = u0 + mw, ou1 = u1 - mw;
            double oz0 = door ? z0 : z0 + 0.25 * params.floor_height;
            double oz1 = door ? z0 + 0.8 * params.floor_height : z1 - 0.25 * params.floor_height;
            emit_opening(mesh, w, ou0, ou1, oz0, oz1, params.window_inset, obj);
            // Facade frame around the opening.
            emit_wall_rect(mesh, w, u0, ou0, z0, z1, obj);
            emit_wall_rect(mesh, w, ou1, u1, z0, z1, obj);
            emit_wall_rect(mesh, w, ou0, ou1, z0, oz0, obj);
            emit_wall_rect(mesh, w, ou0, ou1, oz1, z1, obj);
        }
    }
}

double pick_pitch(const BuildingParams& params, Rng& rng) {
    return rng.uniform(params.pitch_min_deg, params.pitch_max_deg) * M_PI / 180.0;
}

void emit_roof_elements(SceneMesh& mesh, const Footprint& fp, const Obb2& obb,
                        double (*roof_z)(const Obb2&, const Vec2&, double, double, double),
                        double eave, double apex_rise, double hl, const BuildingParams& params,
                        Rng& rng, uint32_t obj) {
    if (params.roof_element_density <= 0) return;
    int count = static_cast<int>(std::llround(params.roof_element_density * fp.area()));
    for (int n = 0; n < count; ++n) {
        double hw = rng.uniform(0.25, 0.6);  // box half width
        double hh = rng.uniform(0.5, 1.5);   // box height
        Vec2 local{rng.uniform(-(obb.half_long - hw - 0.1), obb.half_long - hw - 0.1),
                   rng.uniform(-(obb.half_short - hw - 0.1), obb.half_short - hw - 0.1)};
        Vec2 p = obb.to_world(local);
        if (!fp.contains(p)) continue;
        double base = roof_z(obb, p, eave, apex_rise, hl);
        // Axis-aligned little box (chimney / vent analogue).
        Vec3 c{p.x, p.y, base};
        Vec3 dx{hw, 0, 0}, dy{0, hw, 0}, dz{0, 0, hh};
        Vec3 v000 = c - dx - dy, v100 = c + dx - dy, v110 = c + dx + dy, v010 = c - dx + dy;
        Vec3 t000 = v000 + dz, t100 = v100 + dz, t110 = v110 + dz, t010 = v010 + dz;
        mesh.add_quad(v000, v100, t100, t000, kBuilding, obj);
        mesh.add_quad(v100, v110, t110, t100, kBuilding, obj);
        mesh.add_quad(v110, v010, t010, t110, kBuilding, obj);
        mesh.add_quad(v010, v000, t000, t010, kBuilding, obj);
        mesh.add_quad(t000, t100, t110, t010, kBuilding, obj);
    }
}

double flat_roof_z(const Obb2&, const Vec2&, double eave, double, double) { return eave; }

double gable_roof_z(const Obb2& obb, const Vec2& p, double eave, double apex_rise, double) {
    Vec2 local = obb.to_local(p);
    double t = 1.0 - std::abs(local.y) / obb.half_short;
    return eave + apex_rise * std::max(0.0, t);
}

double hip_roof_z(const Obb2& obb, const Vec2& p, double eave, double apex_rise, double ridge_half) {
    Vec2 local = obb.to_local(p);
    double across = 1.0 - std::abs(local.y) / obb.half_short;
    double along = std::abs(local.x) <= ridge_half
                       ? 1.0
                       : 1.0 - (std::abs(local.x) - ridge_half) / obb.half_short;
    return eave + apex_rise * std::max(0.0, std::min(across, along));
}

}  // namespace

SceneMesh extrude_building(const Footprint& fp, double height, const BuildingParams& params,
                           uint32_t object_id) {
    if (fp.ring.size() < 3 || fp.area() <= 0) {
        throw std::invalid_argument("degenerate footprint " + std::to_string(fp.id));
    }
    if (height <= 0) throw std::invalid_argument("building height must be positive");

    SceneMesh mesh;
    size_t n = fp.ring.size();
    for (size_t e = 0; e < n; ++e) {
        Vec2 a = fp.ring[e], b = fp.ring[(e + 1) % n];
        Vec2 dir = (b - a).normalized();
        WallFrame w;
        w.start = a;
        w.along = dir;
        w.inward = dir.perp();  // CCW ring: left of the edge is inside
        double len = (b - a).norm();
        if (params.window_inset <= 0) {
            emit_wall_rect(mesh, w, 0, len, 0, height, object_id);
        } else {
            emit_facade(mesh, w, len, height, params, object_id);
        }
    }
    return mesh;
}

RoofStyle draw_roof_style(const BuildingParams& params, uint64_t seed, int footprint_id) {
    Rng rng(hash_label(seed, "roof-style"), static_cast<uint64_t>(footprint_id));
    double total = 0;
    for (const auto& [style, w] : params.roof_weights) total += w;
    double r = rng.uniform(0, total);
    double acc = 0;
    RoofStyle last = RoofStyle::kFlat;
    for (const auto& [style, w] : params.roof_weights) {
        if (w <= 0) continue;
        acc += w;
        last = style;
        if (r < acc) return style;
    }
    return last;
}

SceneMesh generate_roof(const Footprint& fp, double eave_height, RoofStyle style,
                        const BuildingParams& params, uint64_t seed, uint32_t object_id) {
    if (fp.ring.size() < 3 || fp.area() <= 0) {
        throw std::invalid_argument("degenerate footprint " + std::to_string(fp.id));
    }
    SceneMesh mesh;
    Rng rng(hash_label(seed, "roof-geom"), static_cast<uint64_t>(fp.id));
    Obb2 obb = oriented_bounding_box(fp.ring);

    if (style == RoofStyle::kFlat || style == RoofStyle::kFlatParapet) {
        auto tris = triangulate_polygon(fp.ring);
        for (const auto& t : tris) {
            mesh.add_triangle({fp.ring[t[0]].x, fp.ring[t[0]].y, eave_height},
                              {fp.ring[t[1]].x, fp.ring[t[1]].y, eave_height},
                              {fp.ring[t[2]].x, fp.ring[t[2]].y, eave_height}, kBuilding, object_id);
        }
        if (style == RoofStyle::kFlatParapet) {
            size_t n = fp.ring.size();
            for (size_t e = 0; e < n; ++e) {
                Vec2 a = fp.ring[e], b = fp.ring[(e + 1) % n];
                mesh.add_quad({a.x, a.y, eave_height}, {b.x, b.y, eave_height},
                              {b.x, b.y, eave_height + params.parapet_height},
                              {a.x, a.y, eave_height + params.parapet_height}, kBuilding, object_id);
            }
        }
        emit_roof_elements(mesh, fp, obb, flat_roof_z, eave_height, 0, 0, params, rng, object_id);
        return mesh;
    }

    if (rectangularity(fp) < 0.95) {
        throw StyleNotApplicable(std::string(roof_style_name(style)) +
                                 " roof needs a near-rectangular footprint (id " +
                                 std::to_string(fp.id) + ")");
    }

    double pitch = pick_pitch(params, rng);
    double apex_rise = obb.half_short * std::tan(pitch);
    double apex = eave_height + apex_rise;
    double hl = obb.half_long, hs = obb.half_short;

    auto corner = [&](double u, double v, double z) {
        Vec2 p = obb.to_world({u, v});
        return Vec3{p.x, p.y, z};
    };

    if (style == RoofStyle::kGable) {
        Vec3 r0 = corner(-hl, 0, apex), r1 = corner(hl, 0, apex);
        Vec3 c00 = corner(-hl, -hs, eave_height), c10 = corner(hl, -hs, eave_height);
        Vec3 c01 = corner(-hl, hs, eave_height), c11 = corner(hl, hs, eave_height);
        mesh.add_quad(c00, c10, r1, r0, kBuilding, object_id);
        mesh.add_quad(c11, c01, r0, r1, kBuilding, object_id);
        // Vertical gable ends.
        mesh.add_triangle(c10, c11, r1, kBuilding, object_id);
        mesh.add_triangle(c01, c00, r0, kBuilding, object_id);
        emit_roof_elements(mesh, fp, obb, gable_roof_z, eave_height, apex_rise, hl, params, rng,
                           object_id);
        return mesh;
    }

    // Hip: ridge pulled in by (short/2)/tan(45 deg) = short/2 at each end.
    double ridge_half = std::max(0.0, hl - hs);
    Vec3 r0 = corner(-ridge_half, 0, apex), r1 = corner(ridge_half, 0, apex);
    Vec3 c00 = corner(-hl, -hs, eave_height), c10 = corner(hl, -hs, eave_height);
    Vec3 c01 = corner(-hl, hs, eave_height), c11 = corner(hl, hs, eave_height);
    if (ridge_half > 1e-9) {
        mesh.add_quad(c00, c10, r1, r0, kBuilding, object_id);
        mesh.add_quad(c11, c01, r0, r1, kBuilding, object_id);
    } else {
        // Square plan: the ridge collapses to a point and the roof is a pyramid.
        mesh.add_triangle(c00, c10, r0, kBuilding, object_id);
        mesh.add_triangle(c11, c01, r0, kBuilding, object_id);
    }
    mesh.add_triangle(c10, c11, r1, kBuilding, object_id);
    mesh.add_triangle(c01, c00, r0, kBuilding, object_id);
    emit_roof_elements(mesh, fp, obb, hip_roof_z, eave_height, apex_rise, ridge_half, params, rng,
                       object_id);
    return mesh;
}

SceneMesh generate_building_set(const std::vector<Footprint>& footprints,
                                const BuildingParams& params, uint64_t seed,
                                const Heightfield* terrain) {
    params.validate();
    std::vector<double> heights = assign_heights(footprints, params, seed);
    SceneMesh out;
    for (size_t k = 0; k < footprints.size(); ++k) {
        const Footprint& fp = footprints[k];
        uint32_t obj = static_cast<uint32_t>(fp.id) + 1;  // 0 is terrain
        try {
            SceneMesh b = extrude_building(fp, heights[k], params, obj);
            RoofStyle style = draw_roof_style(params, seed, fp.id);
            SceneMesh roof;
            try {
                roof = generate_roof(fp, heights[k], style, params, seed, obj);
            } catch (const StyleNotApplicable&) {
                roof = generate_roof(fp, heights[k], RoofStyle::kFlat, params, seed, obj);
            }
            b.merge(roof);
            if (terrain) {
                Vec2 centroid{0, 0};
                for (const Vec2& p : fp.ring) centroid = centroid + p;
                centroid = centroid * (1.0 / fp.ring.size());
                double base = terrain->contains(centroid) ? terrain->sample(centroid) : 0.0;
                for (Vec3& v : b.vertices) v.z += base;
            }
            out.merge(b);
        } catch (const StyleNotApplicable&) {
            throw;
        } catch (const std::exception& e) {
            throw std::runtime_error("building generation failed for footprint " +
                                     std::to_string(fp.id) + ": " + e.what());
        }
    }
    return out;
}

}  // namespace citysynth
