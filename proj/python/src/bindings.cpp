#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>

#include "sepnmf/baselines.hpp"
#include "sepnmf/error.hpp"
#include "sepnmf/linalg.hpp"
#include "sepnmf/outliers.hpp"
#include "sepnmf/selectors.hpp"
#include "sepnmf/spa.hpp"
#include "sepnmf/synth.hpp"
#include "sepnmf/version.hpp"

namespace py = pybind11;
using namespace sepnmf;

namespace {

using FArray = py::array_t<double, py::array::f_style | py::array::forcecast>;

DenseMatrix to_matrix(const FArray& a) {
  if (a.ndim() != 2) throw InvalidArgument("expected a 2-d array");
  const auto rows = static_cast<std::size_t>(a.shape(0));
  const auto cols = static_cast<std::size_t>(a.shape(1));
  return DenseMatrix(rows, cols, std::vector<double>(a.data(), a.data() + rows * cols));
}

FArray to_array(const DenseMatrix& m) {
  FArray out({m.rows(), m.cols()});
  std::copy(m.data().begin(), m.data().end(), out.mutable_data());
  return out;
}

py::dict result_dict(const ExtractionResult& r) {
  py::dict d;
  d["indices"] = r.indices;
  d["step_scores"] = r.step_scores;
  d["residual_norms"] = r.residual_norms;
  d["step_margins"] = r.step_margins;
  return d;
}

BoundConvention parse_convention(const std::string& s) {
  if (s == "theorem") return BoundConvention::Theorem;
  if (s == "published") return BoundConvention::PublishedTable;
  throw InvalidArgument("convention must be 'theorem' or 'published'");
}

BaselineOptions baseline(std::size_t r, std::uint64_t seed) {
  BaselineOptions o;
  o.r = r;
  o.seed = seed;
  return o;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Separable NMF column extraction";
  m.attr("__version__") = kVersion;

  static py::exception<RankDeficiency> rank_exc(m, "RankDeficiency", PyExc_RuntimeError);
  static py::exception<ConvergenceFailure> conv_exc(m, "ConvergenceFailure", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const RankDeficiency& e) {
      PyErr_SetString(rank_exc.ptr(), e.what());
    } catch (const ConvergenceFailure& e) {
      PyErr_SetString(conv_exc.ptr(), e.what());
    } catch (const InvalidArgument& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    } catch (const Error& e) {
      PyErr_SetString(PyExc_RuntimeError, e.what());
    }
  });

  m.def(
      "extract",
      [](const FArray& a, std::optional<std::size_t> r, const std::string& selector, bool fast,
         bool normalize, std::optional<double> tol) {
        ExtractionOptions o;
        o.target_r = r;
        o.residual_tol = tol;
        o.selector = parse_selector(selector);
        o.variant = fast ? Variant::FastUpdate : Variant::Naive;
        o.l1_normalize = normalize;
        return result_dict(extract(to_matrix(a), o));
      },
      py::arg("m"), py::arg("r") = py::none(), py::arg("selector") = "l2", py::arg("fast") = false,
      py::arg("normalize") = false, py::arg("tol") = py::none(),
      "Greedy column extraction. Indices are 0-based, in extraction order.");

  m.def(
      "theorem_bound",
      [](const FArray& w, const std::string& selector, const std::string& convention) {
        const auto tb =
            theorem_bound(to_matrix(w), parse_selector(selector), parse_convention(convention));
        return py::make_tuple(tb.eps_max, tb.err_factor);
      },
      py::arg("w"), py::arg("selector") = "l2", py::arg("convention") = "theorem",
      "(eps_max, err_factor) for the columns of w.");

  m.def(
      "extract_with_outliers",
      [](const FArray& a, std::size_t r, std::size_t t, const std::string& selector,
         std::optional<double> qp_tol, std::size_t qp_max_iters) {
        OutlierOptions o;
        o.r = r;
        o.t = t;
        o.selector = parse_selector(selector);
        o.qp_tol = qp_tol;
        o.qp_max_iters = qp_max_iters;
        const auto res = extract_with_outliers(to_matrix(a), o);
        py::dict d = result_dict(res.kept);
        d["candidates"] = res.candidates;
        d["scores"] = res.scores;
        d["converged"] = res.solution.converged;
        d["objective"] = res.solution.objective;
        return d;
      },
      py::arg("m"), py::arg("r"), py::arg("t"), py::arg("selector") = "l2",
      py::arg("qp_tol") = py::none(), py::arg("qp_max_iters") = 5000);

  m.def(
      "ppi",
      [](const FArray& a, std::size_t r, std::uint64_t seed, std::size_t n_directions) {
        auto o = baseline(r, seed);
        o.ppi_K = n_directions;
        return result_dict(ppi(to_matrix(a), o));
      },
      py::arg("m"), py::arg("r"), py::arg("seed") = 0, py::arg("n_directions") = 1000);
  m.def(
      "vca",
      [](const FArray& a, std::size_t r, std::uint64_t seed, bool pca) {
        auto o = baseline(r, seed);
        o.vca_use_pca = pca;
        return result_dict(vca(to_matrix(a), o));
      },
      py::arg("m"), py::arg("r"), py::arg("seed") = 0, py::arg("pca") = true);
  m.def(
      "sivm",
      [](const FArray& a, std::size_t r) { return result_dict(sivm(to_matrix(a), baseline(r, 0))); },
      py::arg("m"), py::arg("r"));

  m.def(
      "generate",
      [](int exp_id, double delta, std::uint64_t seed, std::size_t rows, std::size_t r,
         std::optional<std::size_t> n_mix) {
        ExperimentConfig c;
        c.exp_id = exp_id;
        c.delta = delta;
        c.seed = seed;
        c.m = rows;
        c.r = r;
        c.n_mix = n_mix;
        const Instance inst = generate(c);
        py::dict d;
        d["M"] = to_array(inst.M);
        d["W"] = to_array(inst.truth.W);
        d["H"] = to_array(inst.truth.H);
        d["N"] = to_array(inst.truth.N);
        d["pure_column_map"] = inst.truth.pure_column_map;
        return d;
      },
      py::arg("exp_id"), py::arg("delta") = 0.0, py::arg("seed") = 0, py::arg("m") = 200,
      py::arg("r") = 20, py::arg("n_mix") = py::none(),
      "Synthetic instance for experiment 1-4.");

  m.def(
      "singular_values", [](const FArray& a) { return singular_values(to_matrix(a)); },
      py::arg("a"));
  m.def(
      "simplex_project", [](const std::vector<double>& x) { return simplex_project(x); },
      py::arg("x"), "Euclidean projection onto {x >= 0, sum(x) <= 1}.");
}
