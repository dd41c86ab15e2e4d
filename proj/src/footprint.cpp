#include "citysynth/footprint.hpp"

#include <algorithm>
#include <stdexcept>

#include <json.hpp>

namespace citysynth {

namespace {

using nlohmann::json;

json parse_collection(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(std::string("GeoJSON parse error: ") + e.what());
    }
    if (doc.value("type", "") != "FeatureCollection" || !doc.contains("features")) {
        throw std::runtime_error("GeoJSON document must be a FeatureCollection");
    }
    return doc;
}

std::vector<Vec2> read_coords(const json& arr, size_t feature_idx) {
    std::vector<Vec2> pts;
    for (const auto& c : arr) {
        if (!c.is_array() || c.size() < 2) {
            throw std::runtime_error("bad coordinate at feature " + std::to_string(feature_idx));
        }
        pts.push_back({c[0].get<double>(), c[1].get<double>()});
    }
    return pts;
}

}  // namespace

std::vector<Footprint> parse_footprints(const std::string& text) {
    json doc = parse_collection(text);
    std::vector<Footprint> out;
    size_t idx = 0;
    for (const auto& feature : doc["features"]) {
        const auto& geom = feature.at("geometry");
        std::string type = geom.value("type", "");
        if (type != "Polygon") {
            throw std::runtime_error("unsupported geometry at feature " + std::to_string(idx));
        }
        const auto& rings = geom.at("coordinates");
        if (rings.empty()) {
            throw std::runtime_error("empty polygon at feature " + std::to_string(idx));
        }
        std::vector<Vec2> ring = read_coords(rings[0], idx);
        // GeoJSON rings repeat the first vertex; our rings close implicitly.
        if (ring.size() >= 2 && ring.front().x == ring.back().x && ring.front().y == ring.back().y) {
            ring.pop_back();
        }
        if (ring.size() < 3) {
            throw std::runtime_error("polygon with fewer than 3 vertices at feature " +
                                     std::to_string(idx));
        }
        if (!polygon_is_simple(ring)) {
            throw std::runtime_error("self-intersecting ring at feature " + std::to_string(idx));
        }
        double area = polygon_signed_area(ring);
        if (area == 0) {
            throw std::runtime_error("zero-area polygon at feature " + std::to_string(idx));
        }
        if (area < 0) std::reverse(ring.begin(), ring.end());

        Footprint fp;
        fp.id = static_cast<int>(idx);
        fp.ring = std::move(ring);
        if (feature.contains("properties") && feature["properties"].is_object() &&
            feature["properties"].contains("height")) {
            fp.height_override = feature["properties"]["height"].get<double>();
        }
        out.push_back(std::move(fp));
        ++idx;
    }
    return out;
}

std::vector<std::vector<Vec2>> parse_roads(const std::string& text) {
    json doc = parse_collection(text);
    std::vector<std::vector<Vec2>> out;
    size_t idx = 0;
    for (const auto& feature : doc["features"]) {
        const auto& geom = feature.at("geometry");
        std::string type = geom.value("type", "");
        if (type != "LineString") {
            throw std::runtime_error("unsupported geometry at feature " + std::to_string(idx));
        }
        std::vector<Vec2> path = read_coords(geom.at("coordinates"), idx);
        if (path.size() < 2) {
            throw std::runtime_error("LineString with fewer than 2 vertices at feature " +
                                     std::to_string(idx));
        }
        out.push_back(std::move(path));
        ++idx;
    }
    return out;
}

}  // namespace citysynth
