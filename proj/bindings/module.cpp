// Python bindings for the transduction engine. The surface mirrors the CLI:
// standardization, synthetic data, the logistic prior, and the end-to-end
// adapt() entry point returning numpy arrays.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>

#include "gtda/errors.hpp"
#include "gtda/pipeline.hpp"
#include "gtda/preprocess.hpp"
#include "gtda/priors.hpp"
#include "gtda/synthetic.hpp"

namespace py = pybind11;

namespace {

gtda::NormalizationMode parse_normalize(const std::string& v) {
  if (v == "zscore") return gtda::NormalizationMode::ZScore;
  if (v == "std") return gtda::NormalizationMode::Std;
  throw gtda::ConfigError("unknown normalize mode '" + v + "' (expected std or zscore)");
}

gtda::Method parse_method(const std::string& v) {
  if (v == "gtg") return gtda::Method::Gtg;
  if (v == "lp") return gtda::Method::Lp;
  if (v == "ls") return gtda::Method::Ls;
  if (v == "hf") return gtda::Method::Hf;
  throw gtda::ConfigError("unknown method '" + v + "' (expected gtg, lp, ls or hf)");
}

gtda::PriorKind parse_prior(const std::string& v) {
  if (v == "none") return gtda::PriorKind::None;
  if (v == "lr") return gtda::PriorKind::Lr;
  throw gtda::ConfigError("unknown prior '" + v + "' (expected none or lr)");
}

}  // namespace

PYBIND11_MODULE(_gtda, m) {
  m.doc() = "Label transduction from a source to a target domain over a "
            "shared similarity graph";

  static py::exception<gtda::Error> engine_error(m, "EngineError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const gtda::Error& e) {
      py::set_error(engine_error, e.what());
    }
  });

  py::class_<gtda::LRModel>(m, "PriorModel")
      .def_readonly("classes", &gtda::LRModel::classes)
      .def_readonly("selected_c", &gtda::LRModel::selected_c)
      .def_readonly("weights", &gtda::LRModel::weights)
      .def_readonly("biases", &gtda::LRModel::biases)
      .def("predict_proba",
           [](const gtda::LRModel& model, const gtda::Matrix& features) {
             return gtda::predict_proba(model, features);
           },
           py::arg("features"));

  m.def(
      "standardize",
      [](const gtda::Matrix& source, const gtda::Matrix& target, const std::string& mode) {
        return gtda::joint_standardize(source, target, parse_normalize(mode));
      },
      py::arg("source"), py::arg("target"), py::arg("mode") = "zscore",
      "Scale both domains with statistics of their union; returns (source, target).");

  m.def(
      "train_prior",
      [](const gtda::Matrix& features, const gtda::LabelVector& labels) {
        return gtda::train_lr(features, labels, {});
      },
      py::arg("features"), py::arg("labels"),
      "Fit the cross-validated logistic-regression prior.");

  m.def(
      "synthetic_shift",
      [](int n_per_class, int classes, int dim, double shift, double noise,
         std::uint64_t seed) {
        gtda::SyntheticConfig cfg;
        cfg.n_per_class = n_per_class;
        cfg.classes = classes;
        cfg.dim = dim;
        cfg.shift = shift;
        cfg.noise = noise;
        cfg.seed = seed;
        gtda::ShiftDataset data = gtda::generate_synthetic_shift(cfg);
        py::dict out;
        out["source"] = data.source;
        out["source_labels"] = data.source_labels;
        out["target"] = data.target;
        out["target_labels"] = data.target_labels;
        return out;
      },
      py::arg("n_per_class") = 50, py::arg("classes") = 3, py::arg("dim") = 10,
      py::arg("shift") = 1.0, py::arg("noise") = 0.0, py::arg("seed") = 0,
      "Deterministic Gaussian-blob dataset with the target domain translated.");

  m.def(
      "adapt",
      [](const gtda::Matrix& source, const gtda::LabelVector& source_labels,
         const gtda::Matrix& target, const std::string& method, const std::string& prior,
         const std::string& normalize, double alpha, double eps, int max_iter,
         int knn_rank) {
        gtda::PipelineOptions opts;
        opts.method = parse_method(method);
        opts.prior = parse_prior(prior);
        opts.normalize = parse_normalize(normalize);
        opts.baseline.alpha = alpha;
        opts.dynamics.eps = eps;
        opts.baseline.eps = eps;
        opts.dynamics.max_iter = max_iter;
        opts.baseline.max_iter = max_iter;
        opts.neighbor_rank = knn_rank;
        gtda::AdaptationOutcome out = gtda::adapt(source, source_labels, target, opts);
        py::dict result;
        result["soft"] = out.soft;
        result["hard"] = out.hard;
        result["classes"] = out.classes;
        result["iterations"] = out.iterations;
        result["tol"] = out.tol;
        result["converged"] = out.converged;
        return result;
      },
      py::arg("source"), py::arg("source_labels"), py::arg("target"),
      py::arg("method") = "gtg", py::arg("prior") = "none",
      py::arg("normalize") = "zscore", py::arg("alpha") = 0.2, py::arg("eps") = 1e-5,
      py::arg("max_iter") = 1000, py::arg("knn_rank") = gtda::kDefaultNeighborRank,
      "Propagate source labels to the target rows; returns soft scores, hard "
      "labels and convergence statistics.");
}
