#include "citysynth/templates.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "citysynth/rng.hpp"

namespace citysynth {

namespace {

void add_box(SceneMesh& mesh, const Vec3& center, const Vec3& half, uint8_t cls, uint32_t obj) {
    Vec3 dx{half.x, 0, 0}, dy{0, half.y, 0}, dz{0, 0, half.z};
    Vec3 c = center;
    Vec3 v000 = c - dx - dy - dz, v100 = c + dx - dy - dz;
    Vec3 v110 = c + dx + dy - dz, v010 = c - dx + dy - dz;
    Vec3 v001 = c - dx - dy + dz, v101 = c + dx - dy + dz;
    Vec3 v111 = c + dx + dy + dz, v011 = c - dx + dy + dz;
    mesh.add_quad(v000, v100, v101, v001, cls, obj);
    mesh.add_quad(v100, v110, v111, v101, cls, obj);
    mesh.add_quad(v110, v010, v011, v111, cls, obj);
    mesh.add_quad(v010, v000, v001, v011, cls, obj);
    mesh.add_quad(v001, v101, v111, v011, cls, obj);
    mesh.add_quad(v010, v110, v100, v000, cls, obj);
}

void add_cylinder(SceneMesh& mesh, const Vec3& base, double radius, double height, int sides,
                  uint8_t cls, uint32_t obj) {
    for (int i = 0; i < sides; ++i) {
        double a0 = 2 * M_PI * i / sides, a1 = 2 * M_PI * (i + 1) / sides;
        Vec3 b0{base.x + radius * std::cos(a0), base.y + radius * std::sin(a0), base.z};
        Vec3 b1{base.x + radius * std::cos(a1), base.y + radius * std::sin(a1), base.z};
        Vec3 t0 = b0 + Vec3{0, 0, height}, t1 = b1 + Vec3{0, 0, height};
        mesh.add_quad(b0, b1, t1, t0, cls, obj);
        mesh.add_triangle({base.x, base.y, base.z + height}, t0, t1, cls, obj);
    }
}

// A leaf "disk": small flat hexagon with a random orientation.
void add_leaf_disk(SceneMesh& mesh, const Vec3& center, double radius, Rng& rng, uint8_t cls,
                   uint32_t obj) {
    double theta = rng.uniform(0, 2 * M_PI);
    double phi = std::acos(rng.uniform(-1.0, 1.0));
    Vec3 n{std::sin(phi) * std::cos(theta), std::sin(phi) * std::sin(theta), std::cos(phi)};
    Mat3 frame = Mat3::rotation_z_to(n);
    Vec3 u = frame.col[0], v = frame.col[1];
    Vec3 first = center + u * radius;
    for (int i = 1; i + 1 < 6; ++i) {
        double a0 = 2 * M_PI * i / 6, a1 = 2 * M_PI * (i + 1) / 6;
        Vec3 p0 = center + (u * std::cos(a0) + v * std::sin(a0)) * radius;
        Vec3 p1 = center + (u * std::cos(a1) + v * std::sin(a1)) * radius;
        mesh.add_triangle(first, p0, p1, cls, obj);
    }
}

}  // namespace

ObjectTemplate make_leaf_disk_tree(uint64_t seed, int leaf_count) {
    ObjectTemplate tpl;
    Rng rng(hash_label(seed, "tree"));
    CrownEllipsoid crown;
    crown.center = {0, 0, 4.0};
    crown.semiaxes = {1.6, 1.6, 2.0};
    add_cylinder(tpl.mesh, {0, 0, 0}, 0.15, crown.center.z - crown.semiaxes.z * 0.5, 8, kTree, 0);
    double leaf_r = 0.3;
    // Shrink the center distribution so whole disks stay inside the crown.
    double margin = 1.0 - leaf_r / std::min({crown.semiaxes.x, crown.semiaxes.y,
                                             crown.semiaxes.z});
    for (int i = 0; i < leaf_count; ++i) {
        // Rejection sample the ellipsoid interior, biased nowhere.
        Vec3 p;
        do {
            p = {rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
        } while (p.dot(p) > 1.0);
        p = p * margin;
        Vec3 c = crown.center + Vec3{p.x * crown.semiaxes.x, p.y * crown.semiaxes.y,
                                     p.z * crown.semiaxes.z};
        add_leaf_disk(tpl.mesh, c, leaf_r, rng, kTree, 0);
    }
    tpl.crown = crown;
    return tpl;
}

namespace {

ObjectTemplate make_conifer(uint64_t seed) {
    ObjectTemplate tpl;
    Rng rng(hash_label(seed, "conifer"));
    CrownEllipsoid crown;
    crown.center = {0, 0, 4.5};
    crown.semiaxes = {1.3, 1.3, 2.7};
    add_cylinder(tpl.mesh, {0, 0, 0}, 0.12, 2.0, 8, kTree, 0);
    // Cone of disks: radius shrinks toward the top. Centers are clamped into
    // the crown ellipsoid with a disk-radius margin so every vertex stays inside.
    double disk_r = 0.28;
    double margin = 1.0 - disk_r / std::min({crown.semiaxes.x, crown.semiaxes.y,
                                             crown.semiaxes.z});
    for (int i = 0; i < 100; ++i) {
        double t = rng.uniform(0.0, 1.0);
        double rmax = crown.semiaxes.x * (1.0 - 0.85 * t);
        double r = rmax * std::sqrt(rng.uniform(0.0, 1.0));
        double a = rng.uniform(0, 2 * M_PI);
        Vec3 p{r * std::cos(a) / crown.semiaxes.x, r * std::sin(a) / crown.semiaxes.y,
               2.0 * t - 1.0};
        double n = std::sqrt(p.dot(p));
        if (n > margin) p = p * (margin / n);
        Vec3 c = crown.center + Vec3{p.x * crown.semiaxes.x, p.y * crown.semiaxes.y,
                                     p.z * crown.semiaxes.z};
        add_leaf_disk(tpl.mesh, c, disk_r, rng, kTree, 0);
    }
    tpl.crown = crown;
    return tpl;
}

ObjectTemplate make_vehicle() {
    ObjectTemplate tpl;
    add_box(tpl.mesh, {0, 0, 0.7}, {2.25, 0.9, 0.7}, kVehicle, 0);
    add_box(tpl.mesh, {-0.3, 0, 1.7}, {1.1, 0.8, 0.3}, kVehicle, 0);
    return tpl;
}

ObjectTemplate make_pole() {
    ObjectTemplate tpl;
    add_cylinder(tpl.mesh, {0, 0, 0}, 0.08, 4.0, 6, kClutter, 0);
    add_box(tpl.mesh, {0.4, 0, 4.0}, {0.5, 0.05, 0.3}, kClutter, 0);  // sign head
    return tpl;
}

ObjectTemplate make_bench() {
    ObjectTemplate tpl;
    add_box(tpl.mesh, {0, 0, 0.45}, {0.9, 0.3, 0.45}, kClutter, 0);
    return tpl;
}

ObjectTemplate make_bin() {
    ObjectTemplate tpl;
    add_cylinder(tpl.mesh, {0, 0, 0}, 0.3, 1.0, 8, kClutter, 0);
    return tpl;
}

}  // namespace

TemplateLibrary make_default_library(uint64_t seed) {
    TemplateLibrary lib;
    lib.variants[kTree].push_back(make_leaf_disk_tree(seed));
    lib.variants[kTree].push_back(make_conifer(seed));
    lib.variants[kVehicle].push_back(make_vehicle());
    lib.variants[kClutter].push_back(make_pole());
    lib.variants[kClutter].push_back(make_bench());
    lib.variants[kClutter].push_back(make_bin());
    return lib;
}

const ObjectTemplate& TemplateLibrary::pick(uint8_t sem_class, uint32_t object_id) const {
    auto it = variants.find(sem_class);
    if (it == variants.end() || it->second.empty()) {
        throw std::runtime_error(std::string("no template for class ") + class_name(sem_class));
    }
    return it->second[mix64(object_id) % it->second.size()];
}

AssembledScene assemble_scene(const SceneMesh& terrain_mesh, const SceneMesh& building_mesh,
                              const std::vector<Placement>& placements,
                              const TemplateLibrary& library) {
    AssembledScene out;
    out.mesh = terrain_mesh;
    out.mesh.merge(building_mesh);
    for (const Placement& pl : placements) {
        const ObjectTemplate& tpl = library.pick(pl.sem_class, pl.object_id);
        SceneMesh instance = tpl.mesh;
        for (uint32_t& obj : instance.tri_object) obj = pl.object_id;
        instance.transform(pl.scale, pl.yaw, pl.up, pl.position);
        out.mesh.merge(instance);
        if (tpl.crown) {
            CrownEllipsoid crown = *tpl.crown;
            crown.object_id = pl.object_id;
            crown.center = crown.center * pl.scale + pl.position;
            crown.semiaxes = crown.semiaxes * pl.scale;
            out.crowns.push_back(crown);
        }
    }
    return out;
}

}  // namespace citysynth
