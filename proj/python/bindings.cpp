#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "ftl/errors.hpp"
#include "ftl/parallel.hpp"
#include "ftl/pipeline.hpp"
#include "ftl/raster.hpp"
#include "ftl/scene.hpp"

namespace py = pybind11;
using nlohmann::json;

namespace {

// Scene from a preset name, a file path, or JSON text.
ftl::Scene scene_from(const std::string& spec) {
  const auto first = spec.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && spec[first] == '{') {
    json j;
    try {
      j = json::parse(spec);
    } catch (const json::exception& e) {
      throw ftl::ConfigError(std::string("invalid scene JSON: ") + e.what());
    }
    return ftl::parse_scene(j);
  }
  return ftl::load_scene(spec);
}

json rows_doc(ftl::Pipeline& p, const std::vector<ftl::MethodRow>& rows) {
  json doc;
  doc["scene"] = p.scene().name;
  doc["delta"] = p.delta();
  doc["eps_per_decade"] = p.per_decade();
  json jr = json::array();
  for (const auto& r : rows) jr.push_back(ftl::to_json(r));
  doc["rows"] = jr;
  doc["agreement"] = ftl::agreement_flags(rows);
  return doc;
}

class PyPipeline {
 public:
  PyPipeline(const std::string& scene, std::optional<double> delta, std::optional<int> eps_per_decade) {
    ftl::PipelineOptions opt;
    opt.delta = delta;
    opt.eps_per_decade = eps_per_decade;
    p_ = std::make_unique<ftl::Pipeline>(scene_from(scene), opt);
  }
  std::string dim() const { return p_->dim_report().dump(); }
  std::string contents(const std::vector<std::string>& methods) {
    const auto& m = methods.empty() ? p_->scene().methods : methods;
    return rows_doc(*p_, p_->contents(m)).dump();
  }
  std::string curvatures(const std::vector<int>& ks) {
    const auto& k = ks.empty() ? p_->scene().curvature_k : ks;
    return rows_doc(*p_, p_->curvatures(k)).dump();
  }
  std::string checks() {
    json doc = json::array();
    for (const auto& r : p_->all_checks()) doc.push_back(ftl::to_json(r));
    return doc.dump();
  }
  std::string tiling() { return p_->tiling_report().dump(); }
  void render(const std::string& dir) { p_->render(dir); }
  void export_samples(const std::string& dir) const { p_->export_samples(dir); }
  double delta() const { return p_->delta(); }

 private:
  std::unique_ptr<ftl::Pipeline> p_;
};

py::array_t<double> distance_transform(py::array_t<bool, py::array::c_style | py::array::forcecast> occ,
                                       double delta) {
  if (occ.ndim() != 1 && occ.ndim() != 2) throw ftl::ConfigError("occupancy array must be 1- or 2-dimensional");
  ftl::GridGeometry geo;
  geo.dim = static_cast<int>(occ.ndim());
  geo.delta = delta;
  geo.ny = occ.ndim() == 2 ? static_cast<int>(occ.shape(0)) : 1;
  geo.nx = static_cast<int>(occ.shape(occ.ndim() - 1));
  ftl::Grid g(geo);
  const bool* src = occ.data();
  for (std::size_t i = 0; i < g.occ.size(); ++i) g.occ[i] = src[i] ? 1 : 0;
  ftl::DistanceField f;
  {
    py::gil_scoped_release release;
    f = ftl::distance_transform(g);
  }
  std::vector<py::ssize_t> shape;
  for (py::ssize_t d = 0; d < occ.ndim(); ++d) shape.push_back(occ.shape(d));
  py::array_t<double> out(shape);
  double* dst = out.mutable_data();
  for (std::size_t i = 0; i < f.sq.size(); ++i) dst[i] = f.value(i);
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Minkowski contents and fractal curvatures of self-similar sets and tilings";

  static py::exception<ftl::ConfigError> config_error(m, "ConfigError", PyExc_ValueError);
  static py::exception<ftl::PreconditionError> precondition_error(m, "PreconditionError", PyExc_RuntimeError);
  static py::exception<ftl::ResolutionError> resolution_error(m, "ResolutionError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ftl::ConfigError& e) {
      py::set_error(config_error, e.what());
    } catch (const ftl::PreconditionError& e) {
      py::set_error(precondition_error, e.what());
    } catch (const ftl::ResolutionError& e) {
      py::set_error(resolution_error, e.what());
    }
  });

  py::class_<PyPipeline>(m, "_Pipeline")
      .def(py::init<const std::string&, std::optional<double>, std::optional<int>>(), py::arg("scene"),
           py::arg("delta") = py::none(), py::arg("eps_per_decade") = py::none())
      .def("dim", &PyPipeline::dim)
      .def("contents", &PyPipeline::contents, py::arg("methods"), py::call_guard<py::gil_scoped_release>())
      .def("curvatures", &PyPipeline::curvatures, py::arg("ks"), py::call_guard<py::gil_scoped_release>())
      .def("checks", &PyPipeline::checks, py::call_guard<py::gil_scoped_release>())
      .def("tiling", &PyPipeline::tiling, py::call_guard<py::gil_scoped_release>())
      .def("render", &PyPipeline::render, py::arg("dir"), py::call_guard<py::gil_scoped_release>())
      .def("export_samples", &PyPipeline::export_samples, py::arg("dir"))
      .def_property_readonly("delta", &PyPipeline::delta);

  m.def("preset_names", &ftl::preset_names);
  m.def("preset_json", [](const std::string& name) { return ftl::preset_json(name).dump(); });
  m.def("content_methods", &ftl::Pipeline::content_methods);
  m.def("distance_transform", &distance_transform, py::arg("occupancy"), py::arg("delta") = 1.0,
        "Exact Euclidean distance from each cell center to the nearest occupied cell center.");
  m.def("set_threads", [](unsigned n) { ftl::set_thread_count(n); }, py::arg("n"));
  m.def("thread_count", &ftl::thread_count);
}
