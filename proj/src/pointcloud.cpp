#include "citysynth/pointcloud.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "citysynth/mesh.hpp"

namespace citysynth {

const char* provenance_name(CloudProvenance p) {
    return p == CloudProvenance::kDepthFused ? "depth_fused" : "photogrammetric_sim";
}

void LabeledPointCloud::validate() const {
    if (label.size() != points.size() || true_label.size() != points.size()) {
        throw std::invalid_argument("point cloud attribute arrays out of sync");
    }
    for (size_t i = 0; i < label.size(); ++i) {
        if (label[i] >= kNumClasses && label[i] != kMissId) {
            throw std::invalid_argument("point label outside the class table");
        }
        if (true_label[i] >= kNumClasses && true_label[i] != kMissId) {
            throw std::invalid_argument("point true_label outside the class table");
        }
    }
}

void write_cloud_ply(const LabeledPointCloud& cloud, const std::string& path, bool ascii) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "ply\nformat " << (ascii ? "ascii" : "binary_little_endian") << " 1.0\n"
        << "comment provenance " << provenance_name(cloud.provenance) << "\n"
        << "comment seed " << cloud.seed << "\n";
    if (!cloud.param_digest.empty()) out << "comment params " << cloud.param_digest << "\n";
    out << "element vertex " << cloud.points.size() << "\n"
        << "property float x\nproperty float y\nproperty float z\n"
        << "property uchar label\nproperty uchar true_label\n"
        << "end_header\n";
    if (ascii) {
        out.precision(9);
        for (size_t i = 0; i < cloud.points.size(); ++i) {
            const Vec3& p = cloud.points[i];
            out << static_cast<float>(p.x) << ' ' << static_cast<float>(p.y) << ' '
                << static_cast<float>(p.z) << ' ' << int(cloud.label[i]) << ' '
                << int(cloud.true_label[i]) << "\n";
        }
    } else {
        for (size_t i = 0; i < cloud.points.size(); ++i) {
            const Vec3& p = cloud.points[i];
            float xyz[3] = {static_cast<float>(p.x), static_cast<float>(p.y),
                            static_cast<float>(p.z)};
            out.write(reinterpret_cast<const char*>(xyz), sizeof(xyz));
            out.write(reinterpret_cast<const char*>(&cloud.label[i]), 1);
            out.write(reinterpret_cast<const char*>(&cloud.true_label[i]), 1);
        }
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

LabeledPointCloud read_cloud_ply(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::string line;
    if (!std::getline(in, line) || line != "ply") throw std::runtime_error("not a PLY file: " + path);

    LabeledPointCloud cloud;
    bool ascii = false;
    size_t n = 0;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string tok;
        ls >> tok;
        if (tok == "format") {
            std::string fmt;
            ls >> fmt;
            if (fmt == "ascii") ascii = true;
            else if (fmt != "binary_little_endian") {
                throw std::runtime_error("unsupported PLY format in " + path);
            }
        } else if (tok == "comment") {
            std::string key;
            ls >> key;
            if (key == "provenance") {
                std::string v;
                ls >> v;
                cloud.provenance = v == "photogrammetric_sim" ? CloudProvenance::kPhotogrammetricSim
                                                              : CloudProvenance::kDepthFused;
            } else if (key == "seed") {
                ls >> cloud.seed;
            } else if (key == "params") {
                std::getline(ls, cloud.param_digest);
                if (!cloud.param_digest.empty() && cloud.param_digest[0] == ' ') {
                    cloud.param_digest.erase(0, 1);
                }
            }
        } else if (tok == "element") {
            std::string what;
            ls >> what >> n;
            if (what != "vertex") throw std::runtime_error("unexpected PLY element in " + path);
        } else if (tok == "end_header") {
            break;
        }
    }
    cloud.points.resize(n);
    cloud.label.resize(n);
    cloud.true_label.resize(n);
    if (ascii) {
        for (size_t i = 0; i < n; ++i) {
            float x, y, z;
            int l, tl;
            in >> x >> y >> z >> l >> tl;
            cloud.points[i] = {x, y, z};
            cloud.label[i] = static_cast<uint8_t>(l);
            cloud.true_label[i] = static_cast<uint8_t>(tl);
        }
    } else {
        for (size_t i = 0; i < n; ++i) {
            float xyz[3];
            in.read(reinterpret_cast<char*>(xyz), sizeof(xyz));
            in.read(reinterpret_cast<char*>(&cloud.label[i]), 1);
            in.read(reinterpret_cast<char*>(&cloud.true_label[i]), 1);
            cloud.points[i] = {xyz[0], xyz[1], xyz[2]};
        }
    }
    if (!in) throw std::runtime_error("truncated PLY: " + path);
    return cloud;
}

}  // namespace citysynth
