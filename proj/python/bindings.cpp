#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <string>

#include "qconvex/conditions.hpp"
#include "qconvex/convexify.hpp"
#include "qconvex/io.hpp"
#include "qconvex/losses.hpp"
#include "qconvex/oracle.hpp"
#include "qconvex/stencil.hpp"

namespace py = pybind11;
using namespace qconvex;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

ScalarField to_field(const Array& a) {
  if (a.ndim() != 2) throw std::invalid_argument("expected a 2D array");
  const auto h = static_cast<std::size_t>(a.shape(0)), w = static_cast<std::size_t>(a.shape(1));
  return ScalarField(h, w, std::vector<double>(a.data(), a.data() + h * w));
}

Array to_array(const ScalarField& f) {
  Array out({f.height(), f.width()});
  std::copy(f.values().begin(), f.values().end(), out.mutable_data());
  return out;
}

py::dict report(const ViolationReport& r) {
  py::dict d;
  d["magnitude"] = to_array(r.magnitude);
  d["count"] = r.count;
  d["max_violation"] = r.max_violation;
  d["tolerance"] = r.tolerance;
  return d;
}

py::dict trace_result(const ConvexifyResult& r) {
  py::dict d;
  d["field"] = to_array(r.field);
  d["iterations"] = r.trace.iterations;
  d["objective_history"] = r.trace.objective_history;
  d["final_linf_step"] = r.trace.final_linf_step;
  return d;
}

StencilKind parse_stencil(const std::string& name) {
  for (auto k : kAllStencils)
    if (stencil(k).name() == name) return k;
  throw std::invalid_argument("unknown stencil '" + name + "' (Dx, Dy, Dxx, Dyy, Dxy)");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "qconvex native core";

  py::register_exception<IoError>(m, "IoError", PyExc_OSError);
  py::register_exception<EmptySetError>(m, "EmptySetError", PyExc_ValueError);

  py::class_<LossConfig>(m, "LossConfig")
      .def(py::init<>())
      .def_readwrite("radius", &LossConfig::radius)
      .def_readwrite("eps_sigmoid", &LossConfig::eps_sigmoid)
      .def_readwrite("delta", &LossConfig::delta)
      .def_readwrite("eps_g", &LossConfig::eps_g)
      .def_readwrite("border", &LossConfig::border);

  py::class_<ConditionConfig>(m, "ConditionConfig")
      .def(py::init<>())
      .def_readwrite("radius", &ConditionConfig::radius)
      .def_readwrite("tolerance", &ConditionConfig::tolerance)
      .def_readwrite("delta", &ConditionConfig::delta)
      .def_readwrite("border", &ConditionConfig::border)
      .def_readwrite("eps_g", &ConditionConfig::eps_g);

  py::class_<CgpmConfig>(m, "CgpmConfig")
      .def(py::init<>())
      .def_readwrite("eta", &CgpmConfig::eta)
      .def_readwrite("lam", &CgpmConfig::lambda)
      .def_readwrite("t_max", &CgpmConfig::t_max)
      .def_property(
          "loss_kind", [](const CgpmConfig& c) { return std::string(to_string(c.loss_kind)); },
          [](CgpmConfig& c, const std::string& s) { c.loss_kind = parse_loss_kind(s); })
      .def_readwrite("loss", &CgpmConfig::loss)
      .def_readwrite("logit_clamp", &CgpmConfig::logit_clamp)
      .def_readwrite("chain_rule", &CgpmConfig::chain_rule)
      .def_readwrite("early_stop", &CgpmConfig::early_stop);

  m.def("make_offsets", [](double r) {
    std::vector<std::pair<int, int>> out;
    for (const auto& d : make_offsets(r)) out.emplace_back(d.dx, d.dy);
    return out;
  });
  m.def("apply_stencil", [](const std::string& name, const Array& u) {
    return to_array(apply(parse_stencil(name), to_field(u)));
  });
  m.def("apply_adjoint", [](const std::string& name, const Array& v) {
    return to_array(apply_adjoint(parse_stencil(name), to_field(v)));
  });
  m.def("q2_field", [](const Array& u) { return to_array(q2_field(to_field(u))); });
  m.def("curvature_field", [](const Array& u, double eps_g) {
    return to_array(curvature_field(to_field(u), eps_g));
  }, py::arg("u"), py::arg("eps_g") = kDefaultEpsGrad);

  m.def("check_zero_order", [](const Array& u, const ConditionConfig& c) {
    return report(check_zero_order(to_field(u), c));
  }, py::arg("u"), py::arg("cfg") = ConditionConfig{});
  m.def("check_first_order", [](const Array& u, const ConditionConfig& c) {
    return report(check_first_order(to_field(u), c));
  }, py::arg("u"), py::arg("cfg") = ConditionConfig{});
  m.def("check_second_order", [](const Array& u, const ConditionConfig& c) {
    return report(check_second_order(to_field(u), c));
  }, py::arg("u"), py::arg("cfg") = ConditionConfig{});
  m.def("half_disk_ratio", [](const Array& mask, double r) {
    const auto f = to_field(mask);
    return to_array(half_disk_ratio(threshold(f, 0.5), r));
  }, py::arg("mask"), py::arg("radius") = 5.0);

  m.def("loss", [](const std::string& kind, const Array& u, const LossConfig& c) {
    const auto r = loss(parse_loss_kind(kind), to_field(u), c);
    return py::make_tuple(r.value, to_array(r.per_pixel));
  }, py::arg("kind"), py::arg("u"), py::arg("cfg") = LossConfig{});
  m.def("loss_gradient", [](const std::string& kind, const Array& u, const LossConfig& c) {
    return to_array(loss_gradient(parse_loss_kind(kind), to_field(u), c));
  }, py::arg("kind"), py::arg("u"), py::arg("cfg") = LossConfig{});
  m.def("gradient_check", [](const std::string& kind, const Array& u, const LossConfig& c) {
    const auto g = gradient_check(parse_loss_kind(kind), to_field(u), c);
    py::dict d;
    d["max_rel_error"] = g.max_rel_error;
    d["checked"] = g.checked;
    d["excluded"] = g.excluded;
    return d;
  }, py::arg("kind"), py::arg("u"), py::arg("cfg") = LossConfig{});

  m.def("midpoint_convexify", [](const Array& u, double r, std::size_t t_max, double eps) {
    return trace_result(midpoint_convexify(to_field(u), r, t_max, eps));
  }, py::arg("u"), py::arg("radius") = 2.0, py::arg("t_max") = 100000, py::arg("eps") = 1e-12);
  m.def("cgpm", [](const Array& logits, const CgpmConfig& c) {
    return trace_result(cgpm(to_field(logits), c));
  }, py::arg("logits"), py::arg("cfg") = CgpmConfig{});

  m.def("make_shape", [](const std::string& kind, std::size_t size, double sharpness) {
    return to_array(make_shape(default_shape(parse_shape_kind(kind), size, size, sharpness), size, size));
  }, py::arg("kind"), py::arg("size") = 128, py::arg("sharpness") = 1.0);
  m.def("hull_deficit", [](const Array& u, double gamma) {
    const auto h = hull_deficit(to_field(u), gamma);
    py::dict d;
    d["deficit"] = h.deficit;
    d["hull_area"] = h.hull_area;
    d["set_area"] = h.set_area;
    d["perimeter"] = h.perimeter;
    d["slack"] = h.slack();
    return d;
  }, py::arg("u"), py::arg("gamma") = 0.5);
  m.def("brute_force_quasiconcave", [](const Array& u, std::vector<double> gammas, double tol) {
    return report(brute_force_quasiconcave(to_field(u), gammas, tol));
  }, py::arg("u"), py::arg("gammas") = std::vector<double>{0.25, 0.5, 0.75}, py::arg("tol") = 0.0);

  m.def("read_field", [](const std::string& path) { return to_array(read_field(path)); });
  m.def("write_field", [](const std::string& path, const Array& u) { write_field(path, to_field(u)); });
}
