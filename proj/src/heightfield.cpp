#include "citysynth/heightfield.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "citysynth/mesh.hpp"
#include "citysynth/rng.hpp"

namespace citysynth {

double Heightfield::sample(const Vec2& p) const {
    double fx = (p.x - origin.x) / cell_size;
    double fy = (p.y - origin.y) / cell_size;
    fx = std::clamp(fx, 0.0, static_cast<double>(width - 1));
    fy = std::clamp(fy, 0.0, static_cast<double>(height - 1));
    int i0 = std::min(static_cast<int>(fx), width - 2);
    int j0 = std::min(static_cast<int>(fy), height - 2);
    if (width == 1) i0 = 0;
    if (height == 1) j0 = 0;
    double tx = fx - i0, ty = fy - j0;
    double v00 = at(i0, j0);
    double v10 = at(std::min(i0 + 1, width - 1), j0);
    double v01 = at(i0, std::min(j0 + 1, height - 1));
    double v11 = at(std::min(i0 + 1, width - 1), std::min(j0 + 1, height - 1));
    return (1 - tx) * (1 - ty) * v00 + tx * (1 - ty) * v10 + (1 - tx) * ty * v01 + tx * ty * v11;
}

Vec3 Heightfield::normal_at(const Vec2& p) const {
    double h = cell_size;
    auto clamped = [this](Vec2 q) {
        Aabb2 e = extent();
        q.x = std::clamp(q.x, e.lo.x, e.hi.x);
        q.y = std::clamp(q.y, e.lo.y, e.hi.y);
        return q;
    };
    double dzdx = (sample(clamped({p.x + h, p.y})) - sample(clamped({p.x - h, p.y}))) / (2 * h);
    double dzdy = (sample(clamped({p.x, p.y + h})) - sample(clamped({p.x, p.y - h}))) / (2 * h);
    return Vec3{-dzdx, -dzdy, 1.0}.normalized();
}

void Heightfield::validate() const {
    if (width < 2 || height < 2) throw std::invalid_argument("heightfield must be at least 2x2");
    if (cell_size <= 0) throw std::invalid_argument("heightfield cell_size must be positive");
    if (elevations.size() != static_cast<size_t>(width) * height) {
        throw std::invalid_argument("heightfield elevation count does not match dimensions");
    }
    for (double v : elevations) {
        if (!std::isfinite(v)) throw std::invalid_argument("heightfield contains non-finite elevation");
    }
}

namespace {

struct LineReader {
    std::istringstream in;
    int line_no = 0;
    explicit LineReader(const std::string& text) : in(text) {}
    bool next(std::string& line) {
        while (std::getline(in, line)) {
            ++line_no;
            if (line.find_first_not_of(" \t\r\n") != std::string::npos) return true;
        }
        return false;
    }
};

[[noreturn]] void parse_fail(int line, const std::string& what) {
    throw std::runtime_error("heightfield parse error at line " + std::to_string(line) + ": " + what);
}

}  // namespace

Heightfield parse_heightfield(const std::string& text) {
    LineReader reader(text);
    std::string line;

    int ncols = -1, nrows = -1;
    double xll = 0, yll = 0, cellsize = 1, nodata = -9999;
    bool have_nodata = false;
    const char* keys[] = {"ncols", "nrows", "xllcorner", "yllcorner", "cellsize", "NODATA_value"};
    for (const char* key : keys) {
        if (!reader.next(line)) parse_fail(reader.line_no, std::string("missing header line ") + key);
        std::istringstream ls(line);
        std::string k;
        double v;
        if (!(ls >> k >> v)) parse_fail(reader.line_no, "malformed header line");
        if (k != key) parse_fail(reader.line_no, "expected header key '" + std::string(key) + "', got '" + k + "'");
        if (key == std::string("ncols")) ncols = static_cast<int>(v);
        else if (key == std::string("nrows")) nrows = static_cast<int>(v);
        else if (key == std::string("xllcorner")) xll = v;
        else if (key == std::string("yllcorner")) yll = v;
        else if (key == std::string("cellsize")) cellsize = v;
        else { nodata = v; have_nodata = true; }
    }
    if (ncols < 2 || nrows < 2) parse_fail(reader.line_no, "grid must be at least 2x2");
    if (cellsize <= 0) parse_fail(reader.line_no, "cellsize must be positive");

    Heightfield hf;
    hf.width = ncols;
    hf.height = nrows;
    hf.cell_size = cellsize;
    hf.origin = {xll, yll};
    hf.elevations.resize(static_cast<size_t>(ncols) * nrows);

    // North row comes first in the file; store south-up.
    for (int r = 0; r < nrows; ++r) {
        if (!reader.next(line)) parse_fail(reader.line_no, "missing data row");
        std::istringstream ls(line);
        int j = nrows - 1 - r;
        for (int i = 0; i < ncols; ++i) {
            std::string tok;
            if (!(ls >> tok)) parse_fail(reader.line_no, "row has fewer values than ncols");
            try {
                size_t pos = 0;
                double v = std::stod(tok, &pos);
                if (pos != tok.size()) throw std::invalid_argument(tok);
                if (have_nodata && v == nodata) parse_fail(reader.line_no, "NODATA cell not supported");
                if (!std::isfinite(v)) parse_fail(reader.line_no, "non-finite cell value");
                hf.at(i, j) = v;
            } catch (const std::invalid_argument&) {
                parse_fail(reader.line_no, "non-numeric cell '" + tok + "'");
            } catch (const std::out_of_range&) {
                parse_fail(reader.line_no, "cell value out of range '" + tok + "'");
            }
        }
        std::string extra;
        if (ls >> extra) parse_fail(reader.line_no, "row has more values than ncols");
    }
    hf.validate();
    return hf;
}

std::string write_heightfield(const Heightfield& hf) {
    std::ostringstream out;
    out.precision(17);
    out << "ncols " << hf.width << "\n"
        << "nrows " << hf.height << "\n"
        << "xllcorner " << hf.origin.x << "\n"
        << "yllcorner " << hf.origin.y << "\n"
        << "cellsize " << hf.cell_size << "\n"
        << "NODATA_value -9999\n";
    for (int j = hf.height - 1; j >= 0; --j) {
        for (int i = 0; i < hf.width; ++i) {
            if (i) out << ' ';
            out << hf.at(i, j);
        }
        out << "\n";
    }
    return out.str();
}

Heightfield upsample_bilinear(const Heightfield& hf, int factor) {
    hf.validate();
    if (factor < 1) throw std::invalid_argument("upsample factor must be >= 1");
    if (factor == 1) return hf;

    Heightfield out;
    out.width = (hf.width - 1) * factor + 1;
    out.height = (hf.height - 1) * factor + 1;
    out.cell_size = hf.cell_size / factor;
    out.origin = hf.origin;
    out.elevations.resize(static_cast<size_t>(out.width) * out.height);

    for (int j = 0; j < out.height; ++j) {
        int j0 = std::min(j / factor, hf.height - 2);
        double ty = static_cast<double>(j - j0 * factor) / factor;
        for (int i = 0; i < out.width; ++i) {
            int i0 = std::min(i / factor, hf.width - 2);
            double tx = static_cast<double>(i - i0 * factor) / factor;
            if (i % factor == 0 && j % factor == 0) {
                out.at(i, j) = hf.at(i / factor, j / factor);  // preserve nodes exactly
                continue;
            }
            double v = (1 - tx) * (1 - ty) * hf.at(i0, j0) + tx * (1 - ty) * hf.at(i0 + 1, j0) +
                       (1 - tx) * ty * hf.at(i0, j0 + 1) + tx * ty * hf.at(i0 + 1, j0 + 1);
            out.at(i, j) = v;
        }
    }
    return out;
}

namespace {

// Lattice value noise: white noise at nodes spaced 2^octave cells apart,
// bilinear between nodes. Seeded per node so evaluation order never matters.
double value_noise(uint64_t seed, int octave, double ci, double cj) {
    double spacing = static_cast<double>(1 << octave);
    double fx = ci / spacing, fy = cj / spacing;
    auto floor_i = [](double v) { return static_cast<int64_t>(std::floor(v)); };
    int64_t x0 = floor_i(fx), y0 = floor_i(fy);
    double tx = fx - x0, ty = fy - y0;
    auto node = [&](int64_t x, int64_t y) {
        uint64_t h = hash_combine(hash_combine(hash_combine(seed, static_cast<uint64_t>(octave)),
                                               static_cast<uint64_t>(x)),
                                  static_cast<uint64_t>(y));
        return static_cast<double>(mix64(h) >> 11) * 0x1.0p-52 - 1.0;  // [-1, 1)
    };
    return (1 - tx) * (1 - ty) * node(x0, y0) + tx * (1 - ty) * node(x0 + 1, y0) +
           (1 - tx) * ty * node(x0, y0 + 1) + tx * ty * node(x0 + 1, y0 + 1);
}

}  // namespace

Heightfield add_detail(const Heightfield& hf, const DetailParams& params,
                       const std::vector<std::vector<Vec2>>& carve_paths) {
    hf.validate();
    if (params.noise_amplitude < 0) throw std::invalid_argument("noise_amplitude must be >= 0");
    if (params.carve_depth < 0) throw std::invalid_argument("carve_depth must be >= 0");
    if (params.carve_width <= 0) throw std::invalid_argument("carve_width must be positive");
    if (params.noise_octaves < 1) throw std::invalid_argument("noise_octaves must be >= 1");
    for (const auto& path : carve_paths) {
        for (const Vec2& p : path) {
            if (!hf.contains(p)) throw std::invalid_argument("carve path leaves the heightfield extent");
        }
    }

    // Octave weights 1, 1/2, 1/4, ... normalized so the total stays within
    // noise_amplitude.
    double norm = 0.0;
    for (int o = 0; o < params.noise_octaves; ++o) norm += std::pow(0.5, o);

    Heightfield out = hf;
    for (int j = 0; j < hf.height; ++j) {
        for (int i = 0; i < hf.width; ++i) {
            double dz = 0.0;
            if (params.noise_amplitude > 0) {
                double n = 0.0;
                for (int o = 0; o < params.noise_octaves; ++o) {
                    n += std::pow(0.5, o) / norm * value_noise(params.seed, o, i, j);
                }
                dz += params.noise_amplitude * n;
            }
            if (params.carve_depth > 0 && !carve_paths.empty()) {
                Vec2 p = hf.origin + Vec2{i * hf.cell_size, j * hf.cell_size};
                double d = std::numeric_limits<double>::max();
                for (const auto& path : carve_paths) {
                    if (!path.empty()) d = std::min(d, distance_to_polyline(p, path));
                }
                // Flat trench inside carve_width/2, linear falloff to carve_width.
                if (d <= params.carve_width * 0.5) {
                    dz -= params.carve_depth;
                } else if (d < params.carve_width) {
                    double t = (params.carve_width - d) / (params.carve_width * 0.5);
                    dz -= params.carve_depth * t;
                }
            }
            out.at(i, j) = hf.at(i, j) + dz;
        }
    }
    return out;
}

SceneMesh heightfield_to_mesh(const Heightfield& hf) {
    hf.validate();
    SceneMesh mesh;
    mesh.vertices.reserve(static_cast<size_t>(hf.width) * hf.height);
    for (int j = 0; j < hf.height; ++j) {
        for (int i = 0; i < hf.width; ++i) {
            mesh.vertices.push_back(
                {hf.origin.x + i * hf.cell_size, hf.origin.y + j * hf.cell_size, hf.at(i, j)});
        }
    }
    auto vid = [&](int i, int j) { return static_cast<uint32_t>(j * hf.width + i); };
    for (int j = 0; j + 1 < hf.height; ++j) {
        for (int i = 0; i + 1 < hf.width; ++i) {
            mesh.triangles.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)});
            mesh.triangles.push_back({vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)});
            mesh.tri_class.insert(mesh.tri_class.end(), 2, kGround);
            mesh.tri_object.insert(mesh.tri_object.end(), 2, 0);
        }
    }
    return mesh;
}

}  // namespace citysynth
