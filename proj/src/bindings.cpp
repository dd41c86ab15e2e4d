#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "citysynth/building.hpp"
#include "citysynth/bvh.hpp"
#include "citysynth/flightplan.hpp"
#include "citysynth/heightfield.hpp"
#include "citysynth/kdtree.hpp"
#include "citysynth/metrics.hpp"
#include "citysynth/pipeline.hpp"
#include "citysynth/pointcloud.hpp"
#include "citysynth/reconsim.hpp"
#include "citysynth/templates.hpp"
#include "citysynth/transfer.hpp"

namespace py = pybind11;
using namespace citysynth;

namespace {

std::vector<std::tuple<double, double, double>> cloud_points(const LabeledPointCloud& c) {
    std::vector<std::tuple<double, double, double>> out;
    out.reserve(c.points.size());
    for (const Vec3& p : c.points) out.emplace_back(p.x, p.y, p.z);
    return out;
}

}  // namespace

PYBIND11_MODULE(_citysynth, m) {
    m.doc() = "procedural semantic scenes, simulated UAV capture, labeled point clouds";

    py::class_<Vec3>(m, "Vec3")
        .def(py::init<>())
        .def(py::init([](double x, double y, double z) { return Vec3{x, y, z}; }))
        .def_readwrite("x", &Vec3::x)
        .def_readwrite("y", &Vec3::y)
        .def_readwrite("z", &Vec3::z)
        .def("__repr__", [](const Vec3& v) {
            return "Vec3(" + std::to_string(v.x) + ", " + std::to_string(v.y) + ", " +
                   std::to_string(v.z) + ")";
        });

    py::class_<Heightfield>(m, "Heightfield")
        .def_readonly("width", &Heightfield::width)
        .def_readonly("height", &Heightfield::height)
        .def_readonly("cell_size", &Heightfield::cell_size)
        .def("sample", [](const Heightfield& hf, double x, double y) {
            return hf.sample({x, y});
        })
        .def("at", [](const Heightfield& hf, int i, int j) { return hf.at(i, j); });
    m.def("parse_heightfield", &parse_heightfield, py::arg("text"));
    m.def("upsample_bilinear", &upsample_bilinear, py::arg("heightfield"), py::arg("factor"));

    py::class_<SceneMesh>(m, "SceneMesh")
        .def_property_readonly("vertex_count",
                               [](const SceneMesh& mesh) { return mesh.vertices.size(); })
        .def_property_readonly("triangle_count",
                               [](const SceneMesh& mesh) { return mesh.triangles.size(); })
        .def("triangle_class",
             [](const SceneMesh& mesh, size_t i) { return mesh.tri_class.at(i); })
        .def("validate", &SceneMesh::validate);
    m.def("heightfield_to_mesh", &heightfield_to_mesh, py::arg("heightfield"));
    m.def("read_mesh_ply", &read_mesh_ply, py::arg("path"));
    m.def("write_mesh_ply", &write_mesh_ply, py::arg("mesh"), py::arg("path"));

    m.def("parse_footprints", [](const std::string& text) {
        std::vector<std::vector<std::pair<double, double>>> rings;
        for (const Footprint& fp : parse_footprints(text)) {
            std::vector<std::pair<double, double>> ring;
            for (const Vec2& p : fp.ring) ring.emplace_back(p.x, p.y);
            rings.push_back(std::move(ring));
        }
        return rings;
    });

    py::class_<LabeledPointCloud>(m, "LabeledPointCloud")
        .def_property_readonly("size", &LabeledPointCloud::size)
        .def_readonly("label", &LabeledPointCloud::label)
        .def_readonly("true_label", &LabeledPointCloud::true_label)
        .def_readonly("seed", &LabeledPointCloud::seed)
        .def_property_readonly("points", &cloud_points);
    m.def("read_cloud_ply", &read_cloud_ply, py::arg("path"));

    py::class_<CameraIntrinsics>(m, "CameraIntrinsics")
        .def(py::init([](int w, int h, double f, double cx, double cy) {
                 return CameraIntrinsics{w, h, f, cx, cy};
             }),
             py::arg("width"), py::arg("height"), py::arg("focal_length"), py::arg("cx"),
             py::arg("cy"))
        .def_readonly("image_width", &CameraIntrinsics::image_width)
        .def_readonly("image_height", &CameraIntrinsics::image_height);

    py::class_<ClassMetrics>(m, "ClassMetrics")
        .def_readonly("name", &ClassMetrics::name)
        .def_readonly("precision", &ClassMetrics::precision)
        .def_readonly("recall", &ClassMetrics::recall)
        .def_readonly("f1", &ClassMetrics::f1)
        .def_readonly("iou", &ClassMetrics::iou)
        .def_readonly("support", &ClassMetrics::support);
    py::class_<MetricsReport>(m, "MetricsReport")
        .def_readonly("rows", &MetricsReport::rows)
        .def_readonly("macro_avg", &MetricsReport::macro_avg)
        .def_readonly("weighted_avg", &MetricsReport::weighted_avg);
    m.def(
        "evaluate_labels",
        [](const std::vector<uint8_t>& pred, const std::vector<uint8_t>& gt, int n_classes) {
            return aggregate(per_class(confusion(pred, gt, n_classes, {})));
        },
        py::arg("pred"), py::arg("gt"), py::arg("n_classes") = int(kNumClasses));
    m.def("parse_report_csv", &parse_report_csv, py::arg("text"));

    py::class_<PipelineConfig>(m, "PipelineConfig")
        .def(py::init<>())
        .def_readwrite("output_dir", &PipelineConfig::output_dir)
        .def_readwrite("dsm_path", &PipelineConfig::dsm_path)
        .def_readwrite("footprints_path", &PipelineConfig::footprints_path)
        .def_readwrite("roads_path", &PipelineConfig::roads_path)
        .def_readwrite("seed", &PipelineConfig::seed)
        .def_readwrite("threads", &PipelineConfig::threads)
        .def_readwrite("tree_count", &PipelineConfig::tree_count)
        .def_readwrite("clutter_count", &PipelineConfig::clutter_count)
        .def_readwrite("altitude", &PipelineConfig::altitude)
        .def_readwrite("render_width", &PipelineConfig::render_width)
        .def_readwrite("render_height", &PipelineConfig::render_height)
        .def_readwrite("focal_length", &PipelineConfig::focal_length)
        .def_readwrite("transfer_method", &PipelineConfig::transfer_method)
        .def_readwrite("provenance", &PipelineConfig::provenance)
        .def_readwrite("upsample_factor", &PipelineConfig::upsample_factor)
        .def_readwrite("detail_enabled", &PipelineConfig::detail_enabled)
        .def("validate", &PipelineConfig::validate)
        .def("save", &PipelineConfig::save, py::arg("path"))
        .def_static("load", &PipelineConfig::load, py::arg("path"))
        .def("to_json_str", [](const PipelineConfig& c) { return c.to_json().dump(2); });
    m.def("preset", &preset, py::arg("name"));

    m.def("run_pipeline", &run_pipeline, py::arg("config"),
          py::call_guard<py::gil_scoped_release>());
    m.def("stage_generate_scene", &stage_generate_scene, py::arg("config"),
          py::call_guard<py::gil_scoped_release>());
    m.def("stage_plan_flight", &stage_plan_flight, py::arg("config"));
    m.def("stage_render", &stage_render, py::arg("config"),
          py::call_guard<py::gil_scoped_release>());
    m.def("stage_reconstruct", &stage_reconstruct, py::arg("config"),
          py::call_guard<py::gil_scoped_release>());
    m.def("stage_annotate", &stage_annotate, py::arg("config"),
          py::call_guard<py::gil_scoped_release>());
    m.def("stage_evaluate", &stage_evaluate, py::arg("config"));
    m.def("file_checksum", &file_checksum, py::arg("path"));

    m.attr("GROUND") = int(kGround);
    m.attr("BUILDING") = int(kBuilding);
    m.attr("TREE") = int(kTree);
    m.attr("VEHICLE") = int(kVehicle);
    m.attr("CLUTTER") = int(kClutter);
    m.attr("MISS_ID") = int(kMissId);
    m.attr("NUM_CLASSES") = int(kNumClasses);
}
