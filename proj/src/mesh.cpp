#include "citysynth/mesh.hpp"

#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace citysynth {

const char* class_name(uint8_t id) {
    switch (id) {
        case kGround: return "ground";
        case kBuilding: return "building";
        case kTree: return "tree";
        case kVehicle: return "vehicle";
        case kClutter: return "clutter";
        case kMissId: return "unresolved";
        default: return "unknown";
    }
}

void SceneMesh::add_triangle(const Vec3& a, const Vec3& b, const Vec3& c, uint8_t cls,
                             uint32_t obj) {
    uint32_t base = static_cast<uint32_t>(vertices.size());
    vertices.push_back(a);
    vertices.push_back(b);
    vertices.push_back(c);
    triangles.push_back({base, base + 1, base + 2});
    tri_class.push_back(cls);
    tri_object.push_back(obj);
}

void SceneMesh::add_quad(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d, uint8_t cls,
                         uint32_t obj) {
    add_triangle(a, b, c, cls, obj);
    add_triangle(a, c, d, cls, obj);
}

void SceneMesh::merge(const SceneMesh& other) {
    uint32_t base = static_cast<uint32_t>(vertices.size());
    vertices.insert(vertices.end(), other.vertices.begin(), other.vertices.end());
    for (const auto& t : other.triangles) {
        triangles.push_back({t[0] + base, t[1] + base, t[2] + base});
    }
    tri_class.insert(tri_class.end(), other.tri_class.begin(), other.tri_class.end());
    tri_object.insert(tri_object.end(), other.tri_object.begin(), other.tri_object.end());
}

double SceneMesh::tri_area(size_t t) const {
    Vec3 a = tri_vertex(t, 0), b = tri_vertex(t, 1), c = tri_vertex(t, 2);
    return 0.5 * (b - a).cross(c - a).norm();
}

Vec3 SceneMesh::tri_normal(size_t t) const {
    Vec3 a = tri_vertex(t, 0), b = tri_vertex(t, 1), c = tri_vertex(t, 2);
    return (b - a).cross(c - a).normalized();
}

Aabb3 SceneMesh::bounds() const {
    Aabb3 b;
    for (const Vec3& v : vertices) b.expand(v);
    return b;
}

void SceneMesh::transform(double scale, double yaw, const Vec3& up, const Vec3& position) {
    Mat3 rot = Mat3::rotation_z_to(up) * Mat3::rotation_z(yaw);
    for (Vec3& v : vertices) v = rot * (v * scale) + position;
}

void SceneMesh::validate() const {
    if (tri_class.size() != triangles.size() || tri_object.size() != triangles.size()) {
        throw std::invalid_argument("mesh attribute arrays out of sync with triangles");
    }
    for (size_t t = 0; t < triangles.size(); ++t) {
        for (int k = 0; k < 3; ++k) {
            if (triangles[t][k] >= vertices.size()) {
                throw std::invalid_argument("mesh triangle index out of range");
            }
        }
        if (tri_area(t) <= 0) throw std::invalid_argument("mesh contains degenerate triangle");
        if (tri_class[t] >= kNumClasses) throw std::invalid_argument("mesh triangle class out of table");
    }
}

void write_mesh_ply(const SceneMesh& mesh, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "ply\nformat binary_little_endian 1.0\n"
        << "element vertex " << mesh.vertices.size() << "\n"
        << "property float x\nproperty float y\nproperty float z\n"
        << "element face " << mesh.triangles.size() << "\n"
        << "property list uchar uint vertex_indices\n"
        << "property uchar class\nproperty uint object\n"
        << "end_header\n";
    for (const Vec3& v : mesh.vertices) {
        float p[3] = {static_cast<float>(v.x), static_cast<float>(v.y), static_cast<float>(v.z)};
        out.write(reinterpret_cast<const char*>(p), sizeof(p));
    }
    for (size_t t = 0; t < mesh.triangles.size(); ++t) {
        uint8_t n = 3;
        out.write(reinterpret_cast<const char*>(&n), 1);
        out.write(reinterpret_cast<const char*>(mesh.triangles[t].data()), 12);
        out.write(reinterpret_cast<const char*>(&mesh.tri_class[t]), 1);
        out.write(reinterpret_cast<const char*>(&mesh.tri_object[t]), 4);
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

SceneMesh read_mesh_ply(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::string line;
    size_t n_vert = 0, n_face = 0;
    if (!std::getline(in, line) || line != "ply") throw std::runtime_error("not a PLY file: " + path);
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string tok;
        ls >> tok;
        if (tok == "element") {
            std::string what;
            size_t count;
            ls >> what >> count;
            if (what == "vertex") n_vert = count;
            else if (what == "face") n_face = count;
        } else if (tok == "end_header") {
            break;
        }
    }
    SceneMesh mesh;
    mesh.vertices.resize(n_vert);
    for (size_t i = 0; i < n_vert; ++i) {
        float p[3];
        in.read(reinterpret_cast<char*>(p), sizeof(p));
        mesh.vertices[i] = {p[0], p[1], p[2]};
    }
    mesh.triangles.resize(n_face);
    mesh.tri_class.resize(n_face);
    mesh.tri_object.resize(n_face);
    for (size_t t = 0; t < n_face; ++t) {
        uint8_t n;
        in.read(reinterpret_cast<char*>(&n), 1);
        if (n != 3) throw std::runtime_error("mesh PLY must contain triangles only: " + path);
        in.read(reinterpret_cast<char*>(mesh.triangles[t].data()), 12);
        in.read(reinterpret_cast<char*>(&mesh.tri_class[t]), 1);
        in.read(reinterpret_cast<char*>(&mesh.tri_object[t]), 4);
    }
    if (!in) throw std::runtime_error("truncated mesh PLY: " + path);
    return mesh;
}

}  // namespace citysynth
