#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>

#include "odpca/algorithms.hpp"
#include "odpca/datagen.hpp"
#include "odpca/errors.hpp"
#include "odpca/harness.hpp"
#include "odpca/linalg.hpp"
#include "odpca/subspace.hpp"
#include "odpca/tasks.hpp"

namespace py = pybind11;
using namespace odpca;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Matrix to_matrix(const Array& a) {
  if (a.ndim() == 1) {
    Matrix m(1, static_cast<std::size_t>(a.shape(0)));
    std::copy(a.data(), a.data() + a.size(), m.entries().begin());
    return m;
  }
  if (a.ndim() != 2) throw ArgumentError("expected a 2-d array");
  const auto rows = static_cast<std::size_t>(a.shape(0));
  const auto cols = static_cast<std::size_t>(a.shape(1));
  return Matrix(rows, cols, std::vector<double>(a.data(), a.data() + a.size()));
}

Array to_array(const Matrix& m) {
  Array out({m.rows(), m.cols()});
  std::copy(m.entries().begin(), m.entries().end(), out.mutable_data());
  return out;
}

OrthonormalBasis to_basis(const Array& a) {
  Matrix m = to_matrix(a);
  if (a.ndim() == 1) m = m.transpose();
  return OrthonormalBasis(std::move(m));
}

std::vector<Matrix> to_matrices(const std::vector<Array>& arrays) {
  std::vector<Matrix> out;
  out.reserve(arrays.size());
  for (const auto& a : arrays) out.push_back(to_matrix(a));
  return out;
}

std::vector<OrthonormalBasis> to_bases(const std::vector<Array>& arrays) {
  std::vector<OrthonormalBasis> out;
  out.reserve(arrays.size());
  for (const auto& a : arrays) out.push_back(to_basis(a));
  return out;
}

py::tuple eig_tuple(const EigenDecomposition& e) {
  return py::make_tuple(py::array_t<double>(static_cast<py::ssize_t>(e.values.size()), e.values.data()),
                        to_array(e.basis.matrix()));
}

py::dict spectrum_dict(const SpectrumStats& s) {
  py::dict d;
  d["lambda1"] = s.lambda1;
  d["lambdaK"] = s.lambdaK;
  d["lambdaK1"] = s.lambdaK1;
  d["eigengap"] = s.eigengap;
  d["kappa"] = s.kappa;
  d["effective_rank"] = s.effective_rank;
  return d;
}

py::dict report_dict(const RunReport& r) {
  py::list rounds;
  for (const auto& rec : r.rounds) {
    py::dict row;
    row["round"] = rec.round;
    row["error"] = rec.error;
    row["trace"] = rec.trace;
    row["comm_entries"] = rec.comm_entries;
    rounds.append(row);
  }
  py::dict results;
  for (const auto& res : r.results) {
    py::dict row;
    row["final_error"] = res.final_error;
    row["comm_entries"] = res.comm_entries;
    row["basis"] = to_array(res.basis.matrix());
    row["local_ms"] = res.times.local_ms;
    row["aggregate_ms"] = res.times.aggregate_ms;
    row["total_ms"] = res.times.total_ms;
    row["data_digest"] = res.data_digest;
    results[py::str(std::string(to_string(res.algorithm)))] = row;
  }
  py::dict out;
  out["ambient_dim"] = r.ambient_dim;
  out["reference"] = std::string(to_string(r.reference));
  out["rounds"] = rounds;
  out["results"] = results;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Online distributed PCA: estimators, subspace metrics and the streaming simulator";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ArgumentError>(m, "ArgumentError", PyExc_ValueError);
  py::register_exception<RankError>(m, "RankError", base.ptr());
  py::register_exception<ConvergenceError>(m, "ConvergenceError", base.ptr());
  py::register_exception<IdentifiabilityError>(m, "IdentifiabilityError", base.ptr());
  py::register_exception<StateError>(m, "StateError", base.ptr());
  py::register_exception<DegenerateTaskError>(m, "DegenerateTaskError", base.ptr());
  auto ingestion = py::register_exception<IngestionError>(m, "IngestionError", base.ptr());
  py::register_exception<ParseError>(m, "ParseError", ingestion.ptr());

  // linear algebra
  m.def("sym_eig", [](const Array& a) { return eig_tuple(sym_eig(SymmetricMatrix(to_matrix(a)))); },
        py::arg("a"), "Eigenvalues (descending) and eigenvectors (columns) of a symmetric matrix.");
  m.def("top_k_eig", [](const Array& a, std::size_t k) { return eig_tuple(top_k_eig(SymmetricMatrix(to_matrix(a)), k)); },
        py::arg("a"), py::arg("k"));
  m.def("empirical_covariance", [](const Array& x) { return to_array(empirical_covariance(to_matrix(x)).matrix()); },
        py::arg("samples"), "n^-1 X^T X without mean subtraction.");
  m.def("orthonormalize", [](const Array& b) { return to_array(orthonormalize(to_matrix(b)).matrix()); },
        py::arg("b"));

  // subspaces
  m.def("projection_distance", [](const Array& u, const Array& v) {
    return projection_distance(to_basis(u), to_basis(v));
  }, py::arg("u"), py::arg("v"), "Frobenius distance between the orthogonal projectors onto span(u) and span(v).");
  m.def("h_objective", [](const Array& u, const std::vector<Array>& bases) {
    return h_objective(to_basis(u), to_bases(bases));
  }, py::arg("u"), py::arg("bases"));
  m.def("mean_projector", [](const std::vector<Array>& bases) { return to_array(mean_projector(to_bases(bases)).matrix()); },
        py::arg("bases"));
  m.def("spectrum_stats", [](const std::vector<double>& values, std::size_t k) {
    return spectrum_dict(spectrum_stats(values, k));
  }, py::arg("values"), py::arg("k"));

  // synthetic data
  py::class_<SpikedModel>(m, "SpikedModel")
      .def_readonly("ambient_dim", &SpikedModel::ambient_dim)
      .def_readonly("rank", &SpikedModel::rank)
      .def_readonly("eigenvalues", &SpikedModel::eigenvalues)
      .def_property_readonly("ground_truth", [](const SpikedModel& s) { return to_array(s.ground_truth.matrix()); })
      .def_property_readonly("covariance", [](const SpikedModel& s) { return to_array(s.covariance().matrix()); })
      .def("stats", [](const SpikedModel& s) { return spectrum_dict(s.stats()); })
      .def("sample", [](const SpikedModel& s, std::size_t n, std::uint64_t seed, std::uint64_t counter) {
        SeededStream stream(seed, counter);
        return to_array(sample_gaussian(s, n, stream));
      }, py::arg("n"), py::arg("seed"), py::arg("counter") = 0);
  m.def("make_spiked_model", [](std::size_t d, std::size_t k, std::vector<double> spikes, double bulk, std::uint64_t seed) {
    if (spikes.empty()) spikes = default_spikes(k);
    return make_spiked_model(d, k, spikes, bulk, seed);
  }, py::arg("d"), py::arg("k"), py::arg("spikes") = std::vector<double>{}, py::arg("bulk") = 1.0, py::arg("seed") = 0);

  // estimators
  m.def("local_top_k", [](const Array& batch, std::size_t k) { return to_array(local_top_k(to_matrix(batch), k).matrix()); },
        py::arg("batch"), py::arg("k"));
  m.def("aggregate_local", [](const std::vector<Array>& bases, std::size_t k) {
    return to_array(aggregate_local(to_bases(bases), k).matrix());
  }, py::arg("bases"), py::arg("k"));
  m.def("dpca", [](const std::vector<Array>& batches, std::size_t k, std::size_t projection_rank) {
    return to_array(dpca(to_matrices(batches), k, projection_rank == 0 ? k : projection_rank).matrix());
  }, py::arg("batches"), py::arg("k"), py::arg("projection_rank") = 0);
  m.def("full_pca", [](const Array& x, std::size_t k) { return to_array(full_pca(to_matrix(x), k).matrix()); },
        py::arg("samples"), py::arg("k"));
  m.def("baseline_all_eigenvectors", [](const std::vector<Array>& batches, std::size_t k) {
    return to_array(baseline_all_eigenvectors(to_matrices(batches), k).matrix());
  }, py::arg("batches"), py::arg("k"));

  py::class_<OdpcaState>(m, "OdpcaState")
      .def(py::init<std::size_t, std::size_t, std::size_t>(), py::arg("d"), py::arg("k"), py::arg("horizon"))
      .def_property_readonly("round", &OdpcaState::round)
      .def_property_readonly("horizon", &OdpcaState::horizon)
      .def_property_readonly("accumulator", [](const OdpcaState& s) { return to_array(s.accumulator().matrix()); })
      .def("step", [](OdpcaState& s, const std::vector<Array>& batches, std::size_t projection_rank) {
        return to_array(s.step(to_matrices(batches), projection_rank == 0 ? s.rank() : projection_rank).matrix());
      }, py::arg("batches"), py::arg("projection_rank") = 0, "Runs one round; returns the round's aggregated basis.")
      .def("finalize", [](const OdpcaState& s) { return to_array(s.finalize().matrix()); });

  // tasks
  m.def("lowrank_error", [](const Array& x, const Array& u) { return lowrank_error(to_matrix(x), to_basis(u)); },
        py::arg("x"), py::arg("u"));
  m.def("relative_error", &relative_error, py::arg("method_err"), py::arg("baseline_err"));
  m.def("kmeans_lloyd", [](const Array& points, std::size_t k, std::uint64_t seed, std::size_t max_iters) {
    const ClusteringResult r = kmeans_lloyd(to_matrix(points), k, seed, max_iters);
    py::dict d;
    d["centers"] = to_array(r.centers);
    d["assignments"] = r.assignments;
    d["cost"] = r.cost;
    d["iterations"] = r.iterations;
    d["cost_history"] = r.cost_history;
    d["converged"] = r.converged;
    return d;
  }, py::arg("points"), py::arg("k"), py::arg("seed") = 0, py::arg("max_iters") = 300);
  m.def("clustering_cost_ratio", [](const Array& method, const Array& baseline, const Array& x, std::size_t k,
                                    const std::vector<std::uint64_t>& seeds) {
    return clustering_cost_ratio(to_basis(method), to_basis(baseline), to_matrix(x), k, seeds);
  }, py::arg("method_basis"), py::arg("baseline_basis"), py::arg("x"), py::arg("k"), py::arg("seeds"));

  // simulator
  m.def("run_stream", [](std::size_t d, std::size_t k, std::size_t m_nodes, std::size_t n, std::size_t horizon,
                         std::size_t surplus, std::uint64_t seed, const std::string& algorithms,
                         std::vector<double> spikes, double bulk, std::uint64_t model_seed) {
    RunConfig c;
    c.ambient_dim = d;
    c.rank = k;
    c.nodes = m_nodes;
    c.batch_size = n;
    c.horizon = horizon;
    c.surplus = surplus;
    c.seed = seed;
    c.algorithms = parse_algorithms(algorithms);
    SyntheticSource src;
    src.spikes = std::move(spikes);
    src.bulk = bulk;
    src.model_seed = model_seed;
    c.source = src;
    RunReport report;
    {
      py::gil_scoped_release release;
      report = run_stream(c);
    }
    return report_dict(report);
  }, py::arg("d") = 50, py::arg("k") = 5, py::arg("m") = 4, py::arg("n") = 100, py::arg("horizon") = 5,
     py::arg("surplus") = 0, py::arg("seed") = 1, py::arg("algorithms") = "odpca,dpca,full,baseline",
     py::arg("spikes") = std::vector<double>{}, py::arg("bulk") = 1.0, py::arg("model_seed") = 0,
     "Synthetic spiked-model run of the requested estimators on one shared stream.");
}
