#include "jetgeom/conformal.hpp"
#include "jetgeom/curvature.hpp"
#include "jetgeom/gqe.hpp"
#include "jetgeom/verify.hpp"
#include "jetgeom/zoo.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace jetgeom;

namespace {

py::array_t<double> to_array(const TensorValue& t) {
  std::vector<py::ssize_t> shape(std::size_t(t.rank()), t.dim());
  return py::array_t<double>(shape, t.data().data());
}

py::array_t<double> matrix_array(int n, const std::vector<double>& data) {
  return py::array_t<double>(std::vector<py::ssize_t>{n, n}, data.data());
}

py::dict jet_dict(const ScalarJet& j) {
  const py::ssize_t n = j.dim;
  py::dict d;
  d["value"] = j.value;
  d["d1"] = py::array_t<double>(std::vector<py::ssize_t>{n}, j.d1.data());
  d["d2"] = py::array_t<double>(std::vector<py::ssize_t>{n, n}, j.d2.data());
  d["d3"] =
      py::array_t<double>(std::vector<py::ssize_t>{n, n, n}, j.d3.data());
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "chart-based curvature packs, conformal transformation laws and "
            "generalized quasi-Einstein diagnostics";

  py::register_exception<ParseError>(m, "ExprParseError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "ExprDomainError", PyExc_ValueError);
  py::register_exception<OutsideDomainError>(m, "OutsideChartError",
                                             PyExc_ValueError);
  py::register_exception<MetricError>(m, "MetricDefinitenessError",
                                      PyExc_ValueError);
  py::register_exception<SampleError>(m, "SamplingError", PyExc_RuntimeError);

  py::class_<ScalarExpr>(m, "ScalarExpr")
      .def_static("parse", &ScalarExpr::parse, py::arg("src"), py::arg("dim"))
      .def_property_readonly("dim", &ScalarExpr::dim)
      .def("__str__", &ScalarExpr::str)
      .def("__repr__",
           [](const ScalarExpr& e) {
             return "ScalarExpr('" + e.str() + "', dim=" +
                    std::to_string(e.dim()) + ")";
           })
      .def("value",
           [](const ScalarExpr& e, const std::vector<double>& p) {
             return e.value(p);
           },
           py::arg("point"))
      .def("jet",
           [](const ScalarExpr& e, const std::vector<double>& p) {
             return jet_dict(e.jet(p));
           },
           py::arg("point"), "value and partial derivatives to order 3")
      .def("derivative", &ScalarExpr::derivative, py::arg("var"),
           "exact symbolic partial derivative, 0-based coordinate index");

  m.def("list_instances", [] {
    py::list out;
    for (const auto& [key, desc] : instance_catalog())
      out.append(py::make_tuple(key, desc));
    return out;
  });

  m.def(
      "sample_points",
      [](const std::string& key, int count, std::uint64_t seed) {
        ZooInstance z = instance_by_key(key);
        return sample_points(z.metric, count, seed);
      },
      py::arg("instance"), py::arg("count"), py::arg("seed"),
      "deterministic in-domain sample points of a zoo instance");

  m.def(
      "curvature",
      [](const std::string& key, const std::vector<double>& p) {
        ZooInstance z = instance_by_key(key);
        CurvaturePack pk = curvature_pack(z.metric.jet(p));
        py::dict d;
        d["metric"] = matrix_array(pk.n, pk.jet.g);
        d["metric_inverse"] = matrix_array(pk.n, pk.jet.ginv);
        d["christoffel"] = to_array(pk.gamma);
        d["riemann"] = to_array(pk.riemann);
        d["ricci"] = to_array(pk.ricci);
        d["scalar"] = pk.scalar;
        if (pk.n >= 3) {
          d["weyl"] = to_array(pk.weyl);
          d["schouten"] = to_array(pk.schouten);
          d["cotton"] = to_array(pk.cotton);
        }
        if (pk.n >= 4) d["div_weyl"] = to_array(pk.div_weyl);
        return d;
      },
      py::arg("instance"), py::arg("point"),
      "every curvature object of the instance metric at a point");

  m.def(
      "gqe_residual_norm",
      [](const std::string& key, const std::vector<double>& p) {
        ZooInstance z = instance_by_key(key);
        if (!z.gqe)
          throw std::invalid_argument("instance carries no GQE data");
        return tensor_norm(gqe_residual(z.metric, *z.gqe, p), z.metric.at(p));
      },
      py::arg("instance"), py::arg("point"));

  m.def(
      "radial_weyl_norm",
      [](const std::string& key, const std::vector<double>& p) {
        ZooInstance z = instance_by_key(key);
        if (!z.gqe)
          throw std::invalid_argument("instance carries no GQE data");
        return radial_weyl_norm(z.metric, z.gqe->f, p);
      },
      py::arg("instance"), py::arg("point"));

  m.def(
      "fit_mu_lambda",
      [](const std::string& key, const std::vector<double>& p) {
        ZooInstance z = instance_by_key(key);
        if (!z.gqe)
          throw std::invalid_argument("instance carries no GQE data");
        MuLambdaFit fit = fit_mu_lambda(z.metric, z.gqe->f, p);
        py::dict d;
        d["mu"] = fit.mu;
        d["lambda"] = fit.lambda;
        d["mu_determined"] = fit.mu_determined;
        d["residual"] = fit.residual;
        return d;
      },
      py::arg("instance"), py::arg("point"));

  m.def(
      "classify",
      [](const std::string& key, int samples, std::uint64_t seed) {
        ZooInstance z = instance_by_key(key);
        if (!z.gqe)
          throw std::invalid_argument("instance carries no GQE data");
        auto pts = sample_points(z.metric, samples, seed);
        return classify(z.metric, *z.gqe, pts).describe();
      },
      py::arg("instance"), py::arg("samples") = 20, py::arg("seed") = 1);

  m.def(
      "run_json",
      [](const std::string& config_json) {
        auto j = nlohmann::ordered_json::parse(config_json);
        RunConfig config = RunConfig::from_json(j);
        return run(config).to_json(true).dump(2);
      },
      py::arg("config_json"),
      "run verification suites; takes and returns JSON text");
}
