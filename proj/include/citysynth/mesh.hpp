#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "citysynth/geometry.hpp"

namespace citysynth {

// Semantic class table. 255 is the reserved miss/ignore id.
enum SemClass : uint8_t {
    kGround = 0,
    kBuilding = 1,
    kTree = 2,
    kVehicle = 3,
    kClutter = 4,
};
inline constexpr uint8_t kMissId = 255;
inline constexpr int kNumClasses = 5;

const char* class_name(uint8_t id);

// Triangle soup with per-triangle semantic class and object id. The single
// geometry currency of the pipeline.
struct SceneMesh {
    std::vector<Vec3> vertices;
    std::vector<std::array<uint32_t, 3>> triangles;
    std::vector<uint8_t> tri_class;
    std::vector<uint32_t> tri_object;

    size_t triangle_count() const { return triangles.size(); }
    bool empty() const { return triangles.empty(); }

    void add_triangle(const Vec3& a, const Vec3& b, const Vec3& c, uint8_t cls, uint32_t obj);
    void add_quad(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d, uint8_t cls,
                  uint32_t obj);

    // Appends another mesh, preserving its classes and object ids.
    void merge(const SceneMesh& other);

    Vec3 tri_vertex(size_t t, int corner) const { return vertices[triangles[t][corner]]; }
    double tri_area(size_t t) const;
    Vec3 tri_normal(size_t t) const;
    Aabb3 bounds() const;

    void transform(double scale, double yaw, const Vec3& up, const Vec3& position);

    void validate() const;  // throws on invariant violations
};

// Binary-little-endian PLY with per-face class/object properties.
void write_mesh_ply(const SceneMesh& mesh, const std::string& path);
SceneMesh read_mesh_ply(const std::string& path);

}  // namespace citysynth
