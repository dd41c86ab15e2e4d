#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "citysynth/geometry.hpp"

namespace citysynth {

struct SceneMesh;

// Regular elevation grid. Row 0 is the southern edge (lowest y); the ASCII
// grid format stores the northern row first and the parser flips it.
struct Heightfield {
    int width = 0;   // columns
    int height = 0;  // rows
    double cell_size = 1.0;
    Vec2 origin;  // world position of cell (0, 0)
    std::vector<double> elevations;  // row-major, elevations[j * width + i]

    double at(int i, int j) const { return elevations[static_cast<size_t>(j) * width + i]; }
    double& at(int i, int j) { return elevations[static_cast<size_t>(j) * width + i]; }

    Aabb2 extent() const {
        Aabb2 b;
        b.expand(origin);
        b.expand(origin + Vec2{(width - 1) * cell_size, (height - 1) * cell_size});
        return b;
    }
    bool contains(const Vec2& p) const { return extent().contains(p); }

    // Bilinear elevation sample; p must be inside the extent.
    double sample(const Vec2& p) const;
    // Terrain unit normal from central differences.
    Vec3 normal_at(const Vec2& p) const;

    void validate() const;  // throws std::invalid_argument on broken invariants
};

struct DetailParams {
    double noise_amplitude = 0.0;  // meters
    int noise_octaves = 1;
    double carve_depth = 0.0;  // meters
    double carve_width = 1.0;  // meters
    uint64_t seed = 0;
};

// ASCII-grid (ncols/nrows/xllcorner/yllcorner/cellsize/NODATA_value header).
// NODATA cells are rejected; this pipeline needs complete surfaces.
Heightfield parse_heightfield(const std::string& text);
std::string write_heightfield(const Heightfield& hf);

Heightfield upsample_bilinear(const Heightfield& hf, int factor);

// Octave value noise plus flat-bottomed trenches carved along the polylines.
// |output - input| <= noise_amplitude + carve_depth everywhere.
Heightfield add_detail(const Heightfield& hf, const DetailParams& params,
                       const std::vector<std::vector<Vec2>>& carve_paths);

// Two triangles per cell, all class ground.
SceneMesh heightfield_to_mesh(const Heightfield& hf);

}  // namespace citysynth
