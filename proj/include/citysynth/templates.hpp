#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "citysynth/mesh.hpp"
#include "citysynth/placement.hpp"

namespace citysynth {

// Axis-aligned ellipsoid bounding a tree crown, in the template's local
// frame (x/y semiaxes equal, so yaw never breaks the alignment).
struct CrownEllipsoid {
    uint32_t object_id = 0;  // filled in at instancing time
    Vec3 center;
    Vec3 semiaxes;

    // Scaled radius: < 1 inside, 1 on the surface.
    double scaled_radius(const Vec3& p) const {
        Vec3 d = p - center;
        double rx = d.x / semiaxes.x, ry = d.y / semiaxes.y, rz = d.z / semiaxes.z;
        return std::sqrt(rx * rx + ry * ry + rz * rz);
    }
};

// One instanceable object: geometry in a local frame with the base at z = 0.
struct ObjectTemplate {
    SceneMesh mesh;
    std::optional<CrownEllipsoid> crown;
};

struct TemplateLibrary {
    std::map<uint8_t, std::vector<ObjectTemplate>> variants;

    const ObjectTemplate& pick(uint8_t sem_class, uint32_t object_id) const;
};

// Procedural stand-ins: trees with leaf-disk crowns (so rays penetrate the
// crown), a conifer variant, a beveled-box vehicle, and pole/box/cylinder
// street clutter.
TemplateLibrary make_default_library(uint64_t seed);

// Leaf-disk tree used directly by tests: trunk cylinder plus `leaf_count`
// disks scattered inside the crown ellipsoid.
ObjectTemplate make_leaf_disk_tree(uint64_t seed, int leaf_count = 120);

struct AssembledScene {
    SceneMesh mesh;
    std::vector<CrownEllipsoid> crowns;  // world-frame, one per placed tree
};

// Instances every placement (scale, yaw, up, position), merges with terrain
// and buildings, and carries the per-instance crown ellipsoids along for the
// reconstruction simulator.
AssembledScene assemble_scene(const SceneMesh& terrain_mesh, const SceneMesh& building_mesh,
                              const std::vector<Placement>& placements,
                              const TemplateLibrary& library);

}  // namespace citysynth
