#include "citysynth/camera.hpp"

#include <cmath>
#include <sstream>

namespace citysynth {

namespace {

struct Quat {
    double w = 1, x = 0, y = 0, z = 0;
};

Quat mat_to_quat(const Mat3& m) {
    // m.col[c] are basis columns; element (r, c).
    double m00 = m.col[0].x, m01 = m.col[1].x, m02 = m.col[2].x;
    double m10 = m.col[0].y, m11 = m.col[1].y, m12 = m.col[2].y;
    double m20 = m.col[0].z, m21 = m.col[1].z, m22 = m.col[2].z;
    Quat q;
    double tr = m00 + m11 + m22;
    if (tr > 0) {
        double s = std::sqrt(tr + 1.0) * 2;
        q.w = 0.25 * s;
        q.x = (m21 - m12) / s;
        q.y = (m02 - m20) / s;
        q.z = (m10 - m01) / s;
    } else if (m00 > m11 && m00 > m22) {
        double s = std::sqrt(1.0 + m00 - m11 - m22) * 2;
        q.w = (m21 - m12) / s;
        q.x = 0.25 * s;
        q.y = (m01 + m10) / s;
        q.z = (m02 + m20) / s;
    } else if (m11 > m22) {
        double s = std::sqrt(1.0 + m11 - m00 - m22) * 2;
        q.w = (m02 - m20) / s;
        q.x = (m01 + m10) / s;
        q.y = 0.25 * s;
        q.z = (m12 + m21) / s;
    } else {
        double s = std::sqrt(1.0 + m22 - m00 - m11) * 2;
        q.w = (m10 - m01) / s;
        q.x = (m02 + m20) / s;
        q.y = (m12 + m21) / s;
        q.z = 0.25 * s;
    }
    return q;
}

Mat3 quat_to_mat(const Quat& q) {
    Mat3 m;
    double w = q.w, x = q.x, y = q.y, z = q.z;
    m.col[0] = {1 - 2 * (y * y + z * z), 2 * (x * y + w * z), 2 * (x * z - w * y)};
    m.col[1] = {2 * (x * y - w * z), 1 - 2 * (x * x + z * z), 2 * (y * z + w * x)};
    m.col[2] = {2 * (x * z + w * y), 2 * (y * z - w * x), 1 - 2 * (x * x + y * y)};
    return m;
}

}  // namespace

std::string poses_to_csv(const std::vector<CameraPose>& poses) {
    std::ostringstream out;
    out.precision(17);
    out << "index,x,y,z,qw,qx,qy,qz\n";
    for (size_t i = 0; i < poses.size(); ++i) {
        Quat q = mat_to_quat(poses[i].orientation);
        const Vec3& p = poses[i].position;
        out << i << ',' << p.x << ',' << p.y << ',' << p.z << ',' << q.w << ',' << q.x << ','
            << q.y << ',' << q.z << "\n";
    }
    return out.str();
}

std::vector<CameraPose> poses_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);  // header
    std::vector<CameraPose> poses;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string tok;
        double v[8];
        for (int i = 0; i < 8; ++i) {
            if (!std::getline(ls, tok, ',')) throw std::runtime_error("malformed pose CSV row");
            v[i] = std::stod(tok);
        }
        CameraPose pose;
        pose.position = {v[1], v[2], v[3]};
        pose.orientation = quat_to_mat({v[4], v[5], v[6], v[7]});
        poses.push_back(pose);
    }
    return poses;
}

}  // namespace citysynth
