#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fastkm/bench.hpp"
#include "fastkm/dataset.hpp"
#include "fastkm/error.hpp"
#include "fastkm/two_stage.hpp"

namespace py = pybind11;
using namespace fastkm;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

template <class M>
M to_matrix(const Array& a) {
  if (a.ndim() != 2) throw UsageError("expected a 2-d array");
  const auto rows = static_cast<std::size_t>(a.shape(0));
  const auto cols = static_cast<std::size_t>(a.shape(1));
  return M(rows, cols, std::vector<double>(a.data(), a.data() + a.size()));
}

template <class Tag>
py::array_t<double> to_array(const RowMatrix<Tag>& m) {
  py::array_t<double> out({m.rows(), m.cols()});
  std::copy(m.values().begin(), m.values().end(), out.mutable_data());
  return out;
}

py::array_t<std::int64_t> to_array(const Assignment& labels) {
  py::array_t<std::int64_t> out(labels.size());
  std::copy(labels.begin(), labels.end(), out.mutable_data());
  return out;
}

Assignment to_labels(const py::array_t<std::int64_t, py::array::c_style | py::array::forcecast>& a) {
  if (a.ndim() != 1) throw UsageError("expected a 1-d label array");
  Assignment out(static_cast<std::size_t>(a.size()));
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (a.data()[i] < 0) throw UsageError("negative label");
    out[i] = static_cast<std::size_t>(a.data()[i]);
  }
  return out;
}

py::dict trace_record(const IterationRecord& r) {
  py::dict d;
  d["stage"] = std::string(to_string(r.stage));
  d["iteration"] = r.iteration;
  d["centers"] = to_array(r.centers);
  d["wcss"] = r.wcss;
  d["max_shift"] = r.max_shift;
  return d;
}

}  // namespace

PYBIND11_MODULE(_fastkm, m) {
  m.doc() = "Two-stage k-means core";

  py::register_exception<UsageError>(m, "UsageError", PyExc_ValueError);
  py::register_exception<DataError>(m, "DataError", PyExc_RuntimeError);

  py::class_<ClusterResult>(m, "ClusterResult")
      .def_property_readonly("initial_centers", [](const ClusterResult& r) { return to_array(r.initial_centers); })
      .def_property_readonly("centers", [](const ClusterResult& r) { return to_array(r.centers); })
      .def_property_readonly("labels", [](const ClusterResult& r) { return to_array(r.labels); })
      .def_readonly("wcss", &ClusterResult::wcss)
      .def_readonly("iters", &ClusterResult::iters)
      .def_readonly("converged", &ClusterResult::converged)
      .def_readonly("empty_clusters", &ClusterResult::empty_clusters)
      .def_readonly("distance_computations", &ClusterResult::distance_computations)
      .def_readonly("relabel_distance_computations", &ClusterResult::relabel_distance_computations)
      .def_property_readonly("trace", [](const ClusterResult& r) {
        py::list out;
        for (const auto& rec : r.trace) out.append(trace_record(rec));
        return out;
      });

  py::class_<TwoStageResult>(m, "TwoStageResult")
      .def_readonly("fast", &TwoStageResult::fast)
      .def_readonly("slow", &TwoStageResult::slow)
      .def_property_readonly("sample_indices", [](const TwoStageResult& r) { return to_array(r.sample_indices); })
      .def_readonly("fast_empty_cluster_warning", &TwoStageResult::fast_empty_cluster_warning);

  m.def(
      "generate_blobs",
      [](std::size_t n, std::size_t d, std::size_t k, double spread, double separation, Seed seed,
         const std::string& shape) {
        const Blobs b = generate_blobs({n, d, k, spread, separation, seed, blob_shape_from_string(shape)});
        return py::make_tuple(to_array(b.points), to_array(b.labels), to_array(b.centers));
      },
      py::arg("n") = 1000, py::arg("d") = 2, py::arg("k") = 3, py::arg("spread") = 1.0,
      py::arg("separation") = 10.0, py::arg("seed") = 0, py::arg("shape") = "gaussian",
      "Returns (points, labels, centers).");

  m.def(
      "load_csv", [](const std::string& path, bool header) { return to_array(load_csv(path, header)); },
      py::arg("path"), py::arg("header") = false);
  m.def(
      "save_csv", [](const Array& a, const std::string& path) { save_csv(to_matrix<Dataset>(a), path); },
      py::arg("points"), py::arg("path"));

  m.def(
      "squared_distance",
      [](const std::vector<double>& x, const std::vector<double>& c) { return squared_distance(x, c); },
      py::arg("x"), py::arg("c"));
  m.def(
      "assign_points",
      [](const Array& points, const Array& centers, std::size_t workers) {
        return to_array(assign_points(to_matrix<Dataset>(points), to_matrix<Centers>(centers), {workers}));
      },
      py::arg("points"), py::arg("centers"), py::arg("workers") = 1);
  m.def(
      "wcss",
      [](const Array& points, const Array& centers,
         const py::array_t<std::int64_t, py::array::c_style | py::array::forcecast>& labels) {
        return wcss(to_matrix<Dataset>(points), to_matrix<Centers>(centers), to_labels(labels));
      },
      py::arg("points"), py::arg("centers"), py::arg("labels"));
  m.def(
      "run_lloyd",
      [](const Array& points, const Array& init, double tolerance, std::size_t max_iters, std::size_t workers) {
        const StageParams params{tolerance, max_iters};
        params.validate();
        return run_lloyd(to_matrix<Dataset>(points), to_matrix<Centers>(init), params, Stage::baseline, {workers});
      },
      py::arg("points"), py::arg("init"), py::arg("tolerance") = 1e-6, py::arg("max_iters") = 300,
      py::arg("workers") = 1);
  m.def(
      "run_baseline",
      [](const Array& points, std::size_t k, double tolerance, std::size_t max_iters, Seed seed,
         std::size_t workers) {
        return run_baseline(to_matrix<Dataset>(points), k, {tolerance, max_iters}, seed, {workers});
      },
      py::arg("points"), py::arg("k"), py::arg("tolerance") = 1e-6, py::arg("max_iters") = 300,
      py::arg("seed") = 0, py::arg("workers") = 1);
  m.def(
      "run_two_stage",
      [](const Array& points, std::size_t k, double sample_fraction, double fast_tolerance,
         double slow_tolerance, std::size_t max_iters, Seed seed, std::size_t workers) {
        TwoStageConfig cfg;
        cfg.k = k;
        cfg.sample_fraction = sample_fraction;
        cfg.fast = {fast_tolerance, max_iters};
        cfg.slow = {slow_tolerance, max_iters};
        cfg.seed = seed;
        return run_two_stage(to_matrix<Dataset>(points), cfg, {workers});
      },
      py::arg("points"), py::arg("k"), py::arg("sample_fraction") = 0.1, py::arg("fast_tolerance") = 1e-3,
      py::arg("slow_tolerance") = 1e-6, py::arg("max_iters") = 300, py::arg("seed") = 0,
      py::arg("workers") = 1);

  m.def("predicted_cost", &predicted_cost, py::arg("k"), py::arg("iters"), py::arg("n"));
  m.def("predicted_two_stage_cost", &predicted_two_stage_cost, py::arg("k"), py::arg("fast_iters"),
        py::arg("sample_size"), py::arg("slow_iters"), py::arg("n"));
}
