#include "citysynth/pipeline.hpp"

#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include "citysynth/metrics.hpp"
#include "citysynth/rng.hpp"
#include "citysynth/templates.hpp"

namespace citysynth {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::string out_path(const PipelineConfig& c, const char* name) {
    return (fs::path(c.output_dir) / name).string();
}

}  // namespace

json PipelineConfig::to_json() const {
    json roof_w;
    for (const auto& [style, w] : buildings.roof_weights) roof_w[roof_style_name(style)] = w;
    json class_map = json::object();
    for (const auto& [from, to] : eval_class_map) class_map[std::to_string(from)] = to;
    return json{
        {"paths",
         {{"dsm", dsm_path},
          {"footprints", footprints_path},
          {"roads", roads_path},
          {"output_dir", output_dir}}},
        {"terrain",
         {{"upsample_factor", upsample_factor},
          {"detail_enabled", detail_enabled},
          {"noise_amplitude", detail.noise_amplitude},
          {"noise_octaves", detail.noise_octaves},
          {"carve_depth", detail.carve_depth},
          {"carve_width", detail.carve_width}}},
        {"buildings",
         {{"height_min", buildings.height_min},
          {"height_max", buildings.height_max},
          {"floor_height", buildings.floor_height},
          {"tile_width", buildings.tile_width},
          {"window_inset", buildings.window_inset},
          {"roof_weights", roof_w},
          {"parapet_height", buildings.parapet_height},
          {"pitch_min_deg", buildings.pitch_min_deg},
          {"pitch_max_deg", buildings.pitch_max_deg},
          {"roof_element_density", buildings.roof_element_density}}},
        {"placement",
         {{"mode", placement_mode},
          {"tree_count", tree_count},
          {"vehicle_count", vehicle_count},
          {"clutter_count", clutter_count},
          {"clutter_spacing", clutter_spacing},
          {"clutter_jitter", clutter_jitter},
          {"min_distance", min_distance},
          {"forest_count", forest_count},
          {"forest_tree_density", forest_tree_density},
          {"forest_hull_points", forest_hull_points},
          {"forest_region_fraction", forest_region_fraction},
          {"scale_min", scale_min},
          {"scale_max", scale_max},
          {"max_attempts", max_attempts}}},
        {"flight",
         {{"altitude", altitude},
          {"front_overlap", front_overlap},
          {"side_overlap", side_overlap},
          {"headings_deg", headings_deg}}},
        {"render",
         {{"width", render_width}, {"height", render_height}, {"focal_length", focal_length}}},
        {"reconstruction",
         {{"provenance", provenance},
          {"fuse_stride", fuse_stride},
          {"sigma0", noise.sigma0},
          {"depth_coeff", noise.depth_coeff},
          {"outlier_fraction", noise.outlier_fraction},
          {"outlier_max_offset", noise.outlier_max_offset},
          {"min_views", noise.min_views},
          {"surface_density", noise.surface_density},
          {"crown_as_hull", noise.crown_as_hull}}},
        {"annotation",
         {{"method", transfer_method},
          {"k", transfer.k},
          {"max_radius", transfer.max_radius},
          {"projection_depth_check", projection_depth_check}}},
        {"evaluation", {{"n_classes", eval_n_classes}, {"class_map", class_map}}},
        {"seed", seed},
        {"threads", threads},
    };
}

PipelineConfig PipelineConfig::from_json(const json& doc) {
    PipelineConfig c;
    const json& paths = doc.at("paths");
    c.dsm_path = paths.value("dsm", "");
    c.footprints_path = paths.value("footprints", "");
    c.roads_path = paths.value("roads", "");
    c.output_dir = paths.value("output_dir", "");

    const json& t = doc.at("terrain");
    c.upsample_factor = t.value("upsample_factor", c.upsample_factor);
    c.detail_enabled = t.value("detail_enabled", c.detail_enabled);
    c.detail.noise_amplitude = t.value("noise_amplitude", c.detail.noise_amplitude);
    c.detail.noise_octaves = t.value("noise_octaves", c.detail.noise_octaves);
    c.detail.carve_depth = t.value("carve_depth", c.detail.carve_depth);
    c.detail.carve_width = t.value("carve_width", c.detail.carve_width);

    const json& b = doc.at("buildings");
    c.buildings.height_min = b.value("height_min", c.buildings.height_min);
    c.buildings.height_max = b.value("height_max", c.buildings.height_max);
    c.buildings.floor_height = b.value("floor_height", c.buildings.floor_height);
    c.buildings.tile_width = b.value("tile_width", c.buildings.tile_width);
    c.buildings.window_inset = b.value("window_inset", c.buildings.window_inset);
    c.buildings.parapet_height = b.value("parapet_height", c.buildings.parapet_height);
    c.buildings.pitch_min_deg = b.value("pitch_min_deg", c.buildings.pitch_min_deg);
    c.buildings.pitch_max_deg = b.value("pitch_max_deg", c.buildings.pitch_max_deg);
    c.buildings.roof_element_density = b.value("roof_element_density", c.buildings.roof_element_density);
    if (b.contains("roof_weights")) {
        c.buildings.roof_weights.clear();
        const RoofStyle styles[] = {RoofStyle::kFlat, RoofStyle::kFlatParapet, RoofStyle::kGable,
                                    RoofStyle::kHip};
        for (RoofStyle s : styles) {
            c.buildings.roof_weights[s] = b["roof_weights"].value(roof_style_name(s), 0.0);
        }
    }

    const json& p = doc.at("placement");
    c.placement_mode = p.value("mode", c.placement_mode);
    c.tree_count = p.value("tree_count", c.tree_count);
    c.vehicle_count = p.value("vehicle_count", c.vehicle_count);
    c.clutter_count = p.value("clutter_count", c.clutter_count);
    c.clutter_spacing = p.value("clutter_spacing", c.clutter_spacing);
    c.clutter_jitter = p.value("clutter_jitter", c.clutter_jitter);
    c.min_distance = p.value("min_distance", c.min_distance);
    c.forest_count = p.value("forest_count", c.forest_count);
    c.forest_tree_density = p.value("forest_tree_density", c.forest_tree_density);
    c.forest_hull_points = p.value("forest_hull_points", c.forest_hull_points);
    c.forest_region_fraction = p.value("forest_region_fraction", c.forest_region_fraction);
    c.scale_min = p.value("scale_min", c.scale_min);
    c.scale_max = p.value("scale_max", c.scale_max);
    c.max_attempts = p.value("max_attempts", c.max_attempts);

    const json& f = doc.at("flight");
    c.altitude = f.value("altitude", c.altitude);
    c.front_overlap = f.value("front_overlap", c.front_overlap);
    c.side_overlap = f.value("side_overlap", c.side_overlap);
    if (f.contains("headings_deg")) c.headings_deg = f["headings_deg"].get<std::vector<double>>();

    const json& r = doc.at("render");
    c.render_width = r.value("width", c.render_width);
    c.render_height = r.value("height", c.render_height);
    c.focal_length = r.value("focal_length", c.focal_length);

    const json& n = doc.at("reconstruction");
    c.provenance = n.value("provenance", c.provenance);
    c.fuse_stride = n.value("fuse_stride", c.fuse_stride);
    c.noise.sigma0 = n.value("sigma0", c.noise.sigma0);
    c.noise.depth_coeff = n.value("depth_coeff", c.noise.depth_coeff);
    c.noise.outlier_fraction = n.value("outlier_fraction", c.noise.outlier_fraction);
    c.noise.outlier_max_offset = n.value("outlier_max_offset", c.noise.outlier_max_offset);
    c.noise.min_views = n.value("min_views", c.noise.min_views);
    c.noise.surface_density = n.value("surface_density", c.noise.surface_density);
    c.noise.crown_as_hull = n.value("crown_as_hull", c.noise.crown_as_hull);

    const json& a = doc.at("annotation");
    c.transfer_method = a.value("method", c.transfer_method);
    c.transfer.k = a.value("k", c.transfer.k);
    c.transfer.max_radius = a.value("max_radius", c.transfer.max_radius);
    c.projection_depth_check = a.value("projection_depth_check", c.projection_depth_check);

    const json& e = doc.at("evaluation");
    c.eval_n_classes = e.value("n_classes", c.eval_n_classes);
    if (e.contains("class_map")) {
        for (auto it = e["class_map"].begin(); it != e["class_map"].end(); ++it) {
            c.eval_class_map[static_cast<uint8_t>(std::stoi(it.key()))] =
                it.value().get<uint8_t>();
        }
    }

    c.seed = doc.value("seed", c.seed);
    c.threads = doc.value("threads", c.threads);
    return c;
}

PipelineConfig PipelineConfig::load(const std::string& path) {
    json doc;
    try {
        doc = json::parse(read_file(path));
    } catch (const json::parse_error& e) {
        throw std::runtime_error("config parse error in " + path + ": " + e.what());
    }
    PipelineConfig c = from_json(doc);
    return c;
}

void PipelineConfig::save(const std::string& path) const {
    write_file(path, to_json().dump(2) + "\n");
}

void PipelineConfig::validate() const {
    if (dsm_path.empty() || !fs::exists(dsm_path)) {
        throw std::runtime_error("DSM file not found: '" + dsm_path + "'");
    }
    if (footprints_path.empty() || !fs::exists(footprints_path)) {
        throw std::runtime_error("footprints file not found: '" + footprints_path + "'");
    }
    if (!roads_path.empty() && !fs::exists(roads_path)) {
        throw std::runtime_error("roads file not found: '" + roads_path + "'");
    }
    if (output_dir.empty()) throw std::runtime_error("output_dir not set");
    if (upsample_factor < 1) throw std::runtime_error("upsample_factor must be >= 1");
    buildings.validate();
    noise.validate();
    transfer.validate();
    intrinsics().validate();
    if (provenance != "photogrammetric_sim" && provenance != "depth_fused") {
        throw std::runtime_error("unknown provenance '" + provenance + "'");
    }
    if (transfer_method != "knn" && transfer_method != "projection" && transfer_method != "none") {
        throw std::runtime_error("unknown annotation method '" + transfer_method + "'");
    }
    if (placement_mode != "road_aligned" && placement_mode != "random") {
        throw std::runtime_error("unknown placement mode '" + placement_mode + "'");
    }
}

PipelineConfig preset(const std::string& name) {
    PipelineConfig c;
    c.dsm_path = "data/sample_dsm.asc";
    c.footprints_path = "data/sample_footprints.geojson";
    c.roads_path = "data/sample_roads.geojson";
    c.output_dir = "out/" + name;

    if (name == "set1") {
        // Smooth unmodified DSM, basic buildings, road-aligned clutter.
        c.upsample_factor = 1;
        c.detail_enabled = false;
        c.buildings.window_inset = 0.0;
        c.buildings.roof_element_density = 0.0;
        c.placement_mode = "road_aligned";
        c.forest_count = 0;
        c.vehicle_count = 0;
        c.provenance = "photogrammetric_sim";
        c.transfer_method = "knn";
        return c;
    }
    if (name == "set2") {
        // set1 plus terrain detail and forest/vehicle scenes.
        c = preset("set1");
        c.output_dir = "out/set2";
        c.upsample_factor = 4;
        c.detail_enabled = true;
        c.detail.noise_amplitude = 0.15;
        c.detail.noise_octaves = 3;
        c.detail.carve_depth = 0.3;
        c.detail.carve_width = 1.2;
        c.forest_count = 1;
        c.vehicle_count = 8;
        return c;
    }
    if (name == "set3") {
        // Detailed terrain, complex facades, random placement, cloud taken
        // straight from the depth maps.
        c = preset("set2");
        c.output_dir = "out/set3";
        c.buildings.window_inset = 0.3;
        c.buildings.roof_element_density = 0.02;
        c.placement_mode = "random";
        c.provenance = "depth_fused";
        c.transfer_method = "none";
        return c;
    }
    if (name == "set4") {
        // set3 with the simulated photogrammetric cloud and knn labeling.
        c = preset("set3");
        c.output_dir = "out/set4";
        c.provenance = "photogrammetric_sim";
        c.transfer_method = "knn";
        return c;
    }
    throw std::runtime_error("unknown preset '" + name + "' (expected set1..set4)");
}

namespace {

Heightfield load_terrain(const PipelineConfig& c) {
    Heightfield hf = parse_heightfield(read_file(c.dsm_path));
    hf = upsample_bilinear(hf, c.upsample_factor);
    if (c.detail_enabled) {
        DetailParams d = c.detail;
        d.seed = hash_label(c.seed, "terrain-detail");
        std::vector<std::vector<Vec2>> carve;
        if (!c.roads_path.empty()) {
            Aabb2 e = hf.extent();
            for (auto& road : parse_roads(read_file(c.roads_path))) {
                for (Vec2& p : road) {
                    p.x = std::clamp(p.x, e.lo.x, e.hi.x);
                    p.y = std::clamp(p.y, e.lo.y, e.hi.y);
                }
                carve.push_back(std::move(road));
            }
        }
        hf = add_detail(hf, d, carve);
    }
    return hf;
}

std::string placements_to_csv(const std::vector<Placement>& placements) {
    std::ostringstream out;
    out.precision(17);
    out << "id,class,x,y,z,yaw,scale\n";
    for (const Placement& p : placements) {
        out << p.object_id << ',' << int(p.sem_class) << ',' << p.position.x << ',' << p.position.y
            << ',' << p.position.z << ',' << p.yaw << ',' << p.scale << "\n";
    }
    return out.str();
}

json crowns_to_json(const std::vector<CrownEllipsoid>& crowns) {
    json arr = json::array();
    for (const CrownEllipsoid& c : crowns) {
        arr.push_back({{"object_id", c.object_id},
                       {"center", {c.center.x, c.center.y, c.center.z}},
                       {"semiaxes", {c.semiaxes.x, c.semiaxes.y, c.semiaxes.z}}});
    }
    return arr;
}

std::vector<CrownEllipsoid> crowns_from_json(const json& arr) {
    std::vector<CrownEllipsoid> crowns;
    for (const auto& j : arr) {
        CrownEllipsoid c;
        c.object_id = j.at("object_id").get<uint32_t>();
        c.center = {j["center"][0], j["center"][1], j["center"][2]};
        c.semiaxes = {j["semiaxes"][0], j["semiaxes"][1], j["semiaxes"][2]};
        crowns.push_back(c);
    }
    return crowns;
}

std::string frame_path(const PipelineConfig& c, const char* kind, size_t index,
                       const char* ext) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%s_%05zu.%s", kind, index, ext);
    return (fs::path(c.output_dir) / artifact::kFramesDir / buf).string();
}

std::vector<RenderedFrame> load_frames(const PipelineConfig& c) {
    std::vector<CameraPose> poses = poses_from_csv(read_file(out_path(c, artifact::kPoses)));
    std::vector<RenderedFrame> frames;
    frames.reserve(poses.size());
    for (size_t i = 0; i < poses.size(); ++i) {
        RenderedFrame f;
        f.depth = read_pfm(frame_path(c, "depth", i, "pfm"));
        f.labels = read_pgm(frame_path(c, "label", i, "pgm"));
        f.pose = poses[i];
        frames.push_back(std::move(f));
    }
    return frames;
}

}  // namespace

void stage_generate_scene(const PipelineConfig& c) {
    try {
        c.validate();
        fs::create_directories(c.output_dir);
        Heightfield hf = load_terrain(c);
        SceneMesh terrain = heightfield_to_mesh(hf);

        std::vector<Footprint> footprints = parse_footprints(read_file(c.footprints_path));
        SceneMesh buildings =
            generate_building_set(footprints, c.buildings, hash_label(c.seed, "buildings"), &hf);

        PlacementConstraints constraints;
        constraints.min_distance = c.min_distance;
        constraints.exclusion_polygons = footprints;
        constraints.region = hf.extent();
        constraints.max_attempts = c.max_attempts;
        constraints.seed = hash_label(c.seed, "placement");

        std::vector<Placement> placements;
        uint32_t next_id = 1000;
        auto append = [&](std::vector<Placement> batch) {
            for (Placement& p : batch) {
                p.object_id = next_id++;
                placements.push_back(p);
            }
        };

        if (c.forest_count > 0) {
            Aabb2 extent = hf.extent();
            Vec2 size = extent.extent() * c.forest_region_fraction;
            for (int fi = 0; fi < c.forest_count; ++fi) {
                // Forest regions tile along the x axis.
                Aabb2 region;
                Vec2 lo{extent.lo.x + fi * size.x, extent.lo.y};
                region.expand(lo);
                region.expand({std::min(lo.x + size.x, extent.hi.x), lo.y + size.y});
                PlacementConstraints fc = constraints;
                fc.pair_min_distance[{kTree, kTree}] = std::min(c.min_distance, 1.5);
                Forest forest =
                    generate_forest(region, c.forest_tree_density, c.forest_hull_points, fc, hf,
                                    hash_label(c.seed, "forest-" + std::to_string(fi)), placements);
                append(forest.trees);
            }
        }
        append(place_random(kTree, c.tree_count, {c.scale_min, c.scale_max}, constraints, hf,
                            placements)
                   .placements);
        if (c.vehicle_count > 0) {
            append(place_random(kVehicle, c.vehicle_count, {1.0, 1.0}, constraints, hf, placements)
                       .placements);
        }
        if (c.clutter_count > 0) {
            if (c.placement_mode == "road_aligned" && !c.roads_path.empty()) {
                auto roads = parse_roads(read_file(c.roads_path));
                append(place_along_roads(kClutter, roads, c.clutter_spacing, c.clutter_jitter,
                                         constraints, hf, placements)
                           .placements);
            } else {
                append(place_random(kClutter, c.clutter_count, {0.9, 1.1}, constraints, hf,
                                    placements)
                           .placements);
            }
        }
        for (Placement& p : placements) p = orient_to_terrain(p, hf);

        TemplateLibrary library = make_default_library(hash_label(c.seed, "templates"));
        AssembledScene scene = assemble_scene(terrain, buildings, placements, library);
        scene.mesh.validate();

        write_mesh_ply(scene.mesh, out_path(c, artifact::kSceneMesh));
        write_file(out_path(c, artifact::kCrowns), crowns_to_json(scene.crowns).dump(2) + "\n");
        write_file(out_path(c, artifact::kPlacements), placements_to_csv(placements));
    } catch (const StageError&) {
        throw;
    } catch (const std::exception& e) {
        throw StageError("generate-scene", e.what());
    }
}

void stage_plan_flight(const PipelineConfig& c) {
    try {
        Heightfield hf = parse_heightfield(read_file(c.dsm_path));
        double mean_elev =
            std::accumulate(hf.elevations.begin(), hf.elevations.end(), 0.0) / hf.elevations.size();
        FlightParams params;
        params.aoi = hf.extent();
        params.altitude = c.altitude;
        params.front_overlap = c.front_overlap;
        params.side_overlap = c.side_overlap;
        params.headings_deg = c.headings_deg;
        std::vector<CameraPose> poses = plan_crosshatch(params, c.intrinsics());
        for (CameraPose& p : poses) p.position.z += mean_elev;  // altitude above mean terrain
        fs::create_directories(c.output_dir);
        write_file(out_path(c, artifact::kPoses), poses_to_csv(poses));
    } catch (const std::exception& e) {
        throw StageError("plan-flight", e.what());
    }
}

void stage_render(const PipelineConfig& c) {
    try {
        SceneMesh scene = read_mesh_ply(out_path(c, artifact::kSceneMesh));
        std::vector<CameraPose> poses = poses_from_csv(read_file(out_path(c, artifact::kPoses)));
        Bvh bvh(scene);
        fs::create_directories(fs::path(c.output_dir) / artifact::kFramesDir);
        CameraIntrinsics k = c.intrinsics();
        for (size_t i = 0; i < poses.size(); ++i) {
            auto [depth, labels] = render_frame(bvh, poses[i], k, c.threads);
            write_pfm(depth, frame_path(c, "depth", i, "pfm"));
            write_pgm(labels, frame_path(c, "label", i, "pgm"));
        }
    } catch (const std::exception& e) {
        throw StageError("render", e.what());
    }
}

void stage_reconstruct(const PipelineConfig& c) {
    try {
        std::vector<RenderedFrame> frames = load_frames(c);
        CameraIntrinsics k = c.intrinsics();

        LabeledPointCloud gt = fuse_depth_frames(frames, k, c.fuse_stride);
        gt.seed = c.seed;
        write_cloud_ply(gt, out_path(c, artifact::kGtCloud));

        SceneMesh scene = read_mesh_ply(out_path(c, artifact::kSceneMesh));
        auto crowns = crowns_from_json(
            json::parse(read_file(out_path(c, artifact::kCrowns))));
        Bvh bvh(scene);
        NoiseParams noise = c.noise;
        noise.seed = hash_label(c.seed, "reconstruction");
        std::vector<CameraPose> poses;
        for (const RenderedFrame& f : frames) poses.push_back(f.pose);
        LabeledPointCloud photo =
            simulate_photogrammetric_cloud(bvh, k, poses, noise, crowns, c.threads);
        write_cloud_ply(photo, out_path(c, artifact::kPhotoCloud));
    } catch (const std::exception& e) {
        throw StageError("reconstruct", e.what());
    }
}

void stage_annotate(const PipelineConfig& c) {
    try {
        const char* target_name = c.provenance == "photogrammetric_sim" ? artifact::kPhotoCloud
                                                                        : artifact::kGtCloud;
        LabeledPointCloud target = read_cloud_ply(out_path(c, target_name));
        if (c.transfer_method == "knn") {
            LabeledPointCloud source = read_cloud_ply(out_path(c, artifact::kGtCloud));
            target.label = annotate_by_knn(target, source, c.transfer, c.threads);
        } else if (c.transfer_method == "projection") {
            std::vector<RenderedFrame> frames = load_frames(c);
            target.label =
                annotate_by_projection(target, frames, c.intrinsics(), c.projection_depth_check);
        }
        write_cloud_ply(target, out_path(c, artifact::kAnnotatedCloud));
    } catch (const std::exception& e) {
        throw StageError("annotate", e.what());
    }
}

void stage_evaluate(const PipelineConfig& c) {
    try {
        LabeledPointCloud annotated = read_cloud_ply(out_path(c, artifact::kAnnotatedCloud));
        ConfusionMatrix cm =
            confusion(annotated.label, annotated.true_label, c.eval_n_classes, c.eval_class_map);
        MetricsReport report = aggregate(per_class(cm));
        write_file(out_path(c, artifact::kMetricsCsv), render_report(report, ReportFormat::kCsv));
        write_file(out_path(c, artifact::kMetricsJson), render_report(report, ReportFormat::kJson));
    } catch (const std::exception& e) {
        throw StageError("evaluate", e.what());
    }
}

std::string file_checksum(const std::string& path) {
    std::string data = read_file(path);
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char b : data) {
        h ^= b;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void run_pipeline(const PipelineConfig& c) {
    c.validate();
    fs::create_directories(c.output_dir);
    json manifest;
    manifest["version"] = 1;
    manifest["seed"] = c.seed;
    manifest["config"] = c.to_json();
    manifest["artifacts"] = json::object();
    manifest["complete"] = false;

    auto record = [&](const char* key, const std::string& path) {
        manifest["artifacts"][key] = {{"path", fs::relative(path, c.output_dir).string()},
                                      {"checksum", file_checksum(path)}};
    };
    auto flush_manifest = [&]() {
        write_file(out_path(c, artifact::kManifest), manifest.dump(2) + "\n");
    };

    try {
        stage_generate_scene(c);
        record("scene_mesh", out_path(c, artifact::kSceneMesh));
        record("crowns", out_path(c, artifact::kCrowns));
        record("placements", out_path(c, artifact::kPlacements));
        stage_plan_flight(c);
        record("poses", out_path(c, artifact::kPoses));
        stage_render(c);
        {
            // One combined checksum over all frames, in index order.
            std::vector<CameraPose> poses =
                poses_from_csv(read_file(out_path(c, artifact::kPoses)));
            uint64_t h = 0xcbf29ce484222325ULL;
            for (size_t i = 0; i < poses.size(); ++i) {
                for (const std::string& p :
                     {frame_path(c, "depth", i, "pfm"), frame_path(c, "label", i, "pgm")}) {
                    std::string sum = file_checksum(p);
                    for (char ch : sum) {
                        h ^= static_cast<unsigned char>(ch);
                        h *= 0x100000001b3ULL;
                    }
                }
            }
            char buf[17];
            std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
            manifest["artifacts"]["frames"] = {{"path", artifact::kFramesDir},
                                               {"count", poses.size()},
                                               {"checksum", buf}};
        }
        stage_reconstruct(c);
        record("gt_cloud", out_path(c, artifact::kGtCloud));
        record("photogrammetric_cloud", out_path(c, artifact::kPhotoCloud));
        stage_annotate(c);
        record("annotated_cloud", out_path(c, artifact::kAnnotatedCloud));
        stage_evaluate(c);
        record("metrics_report", out_path(c, artifact::kMetricsCsv));
    } catch (const StageError& e) {
        manifest["failed_stage"] = e.stage;
        manifest["error"] = e.what();
        flush_manifest();
        throw;
    }
    manifest["complete"] = true;
    flush_manifest();
}

}  // namespace citysynth
