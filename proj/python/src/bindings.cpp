#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>

#include "hpbif/continuation.hpp"
#include "hpbif/dynamics.hpp"
#include "hpbif/errors.hpp"
#include "hpbif/hopf.hpp"
#include "hpbif/model.hpp"
#include "hpbif/stability.hpp"

namespace py = pybind11;
using namespace hpbif;

namespace {

py::list to_list(const Vec4& x) {
  py::list l;
  for (double v : x) l.append(v);
  return l;
}

py::list to_list(const CVec4& x) {
  py::list l;
  for (const auto& v : x) l.append(v);
  return l;
}

State to_state(const std::vector<double>& v) {
  if (v.size() != 4) throw Error(ErrorCategory::InvalidInput, "state needs 4 values");
  return {v[0], v[1], v[2], v[3]};
}

EquilibriumId to_id(const std::string& name) {
  if (name == "A1") return EquilibriumId::A1;
  if (name == "A2") return EquilibriumId::A2;
  if (name == "A3") return EquilibriumId::A3;
  if (name == "A4") return EquilibriumId::A4;
  throw Error(ErrorCategory::InvalidInput, "unknown equilibrium " + name);
}

py::dict report_dict(const HopfReport& r) {
  py::dict d;
  d["lambda"] = r.lambda;
  d["omega0"] = r.omega0;
  d["q"] = to_list(r.q);
  d["p"] = to_list(r.p);
  d["h11"] = to_list(r.h11);
  d["h20"] = to_list(r.h20);
  d["G21"] = r.G21;
  d["l1"] = r.l1;
  d["l1_unit_frequency"] = r.l1_unit_frequency;
  d["transversality"] = r.transversality;
  d["normalization"] = r.normalization_tag;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Hopf bifurcation analysis of the host-parasitoid model";

  PYBIND11_CONSTINIT static py::gil_safe_call_once_and_store<py::object> error_type;
  error_type.call_once_and_store_result([&]() {
    return py::exception<Error>(m, "HpbifError", PyExc_RuntimeError);
  });
  py::register_exception_translator([](std::exception_ptr ptr) {
    try {
      if (ptr) std::rethrow_exception(ptr);
    } catch (const Error& e) {
      const std::string msg =
          std::string(category_name(e.category())) + ": " + e.what();
      py::set_error(error_type.get_stored(), msg.c_str());
    }
  });

  py::class_<ModelParams> params(m, "ModelParams");
  params.def(py::init<>());
  for (std::size_t i = 0; i < ModelParams::field_names.size(); ++i) {
    const std::string name(ModelParams::field_names[i]);
    params.def_property(
        name.c_str(), [i](const ModelParams& p) { return p.field(i); },
        [i](ModelParams& p, double v) { p.field(i) = v; });
  }
  params.def("with_k", &ModelParams::with_k, py::arg("k1"), py::arg("k2"))
      .def("with_c2", &ModelParams::with_c2, py::arg("c2"))
      .def("__repr__", [](const ModelParams& p) {
        std::string s = "ModelParams(";
        for (std::size_t i = 0; i < ModelParams::field_names.size(); ++i) {
          if (i) s += ", ";
          s += std::string(ModelParams::field_names[i]) + "=" +
               std::to_string(p.field(i));
        }
        return s + ")";
      });

  m.def("table_parameters", &table_parameters, py::arg("k1") = 0.00331,
        py::arg("k2") = 0.00100);
  m.def("reference_hopf_point",
        [](const ModelParams& p) { return reference_hopf_point(p); },
        py::arg("base") = table_parameters());

  m.def("reproduction_numbers", [](const ModelParams& p) {
    const auto r = reproduction_numbers(p);
    return py::make_tuple(r.R1, r.R2);
  });
  m.def("k1_max", &k1_max);
  m.def("equilibria", [](const ModelParams& p) {
    py::dict d;
    for (const auto& e : equilibria(p).points)
      d[py::str(std::string(to_string(e.id)))] = to_list(e.x);
    return d;
  });
  m.def("vector_field", [](const ModelParams& p, const std::vector<double>& x) {
    return to_list(vector_field(p, to_state(x)));
  });
  m.def("jacobian", [](const ModelParams& p, const std::vector<double>& x) {
    const Mat4 j = jacobian(p, to_state(x));
    py::list rows;
    for (std::size_t i = 0; i < 4; ++i) {
      py::list r;
      for (std::size_t k = 0; k < 4; ++k) r.append(j(i, k));
      rows.append(r);
    }
    return rows;
  });
  m.def("eigenvalues_at_A4", [](const ModelParams& p) {
    const Spectrum s = eigenvalues(jacobian(p, coexistence_equilibrium(p)));
    return std::vector<cplx>(s.begin(), s.end());
  });
  m.def("classify", [](const ModelParams& p, const std::string& which) {
    const Classification c = classify(p, to_id(which));
    py::dict d;
    d["label"] = c.label();
    d["eigenvalues"] = std::vector<cplx>(c.spectrum.begin(), c.spectrum.end());
    d["diagnostics"] = c.diagnostics;
    if (c.routh) d["delta"] = c.routh->delta;
    return d;
  });
  m.def("delta", [](const ModelParams& p) { return delta_at_A4(p); });

  m.def(
      "lyapunov_l1",
      [](const ModelParams& p, std::optional<std::vector<cplx>> q,
         const std::string& normalization) {
        HopfOptions opt;
        if (normalization == "last-component")
          opt.normalization = Normalization::LastComponentUnit;
        else if (normalization != "unit")
          throw Error(ErrorCategory::InvalidInput,
                      "normalization must be 'unit' or 'last-component'");
        if (q) {
          if (q->size() != 4)
            throw Error(ErrorCategory::InvalidInput, "q needs 4 components");
          opt.q_override = CVec4{(*q)[0], (*q)[1], (*q)[2], (*q)[3]};
        }
        return report_dict(lyapunov_l1(p, opt));
      },
      py::arg("params"), py::arg("q") = py::none(),
      py::arg("normalization") = "unit");
  m.def("classify_hopf", [](const ModelParams& p) {
    return std::string(to_string(classify_hopf(p)));
  });

  m.def(
      "solve_sigma_k2",
      [](double k1, double c2, const ModelParams& base) -> py::object {
        const auto pt = solve_sigma_k2(k1, c2, base);
        if (!pt) return py::none();
        py::dict d;
        d["k1"] = pt->k1;
        d["k2"] = pt->k2;
        d["omega0"] = pt->omega0;
        d["l1_sign"] = pt->l1_sign;
        d["delta_residual"] = pt->delta_residual;
        return std::move(d);
      },
      py::arg("k1"), py::arg("c2") = 100.0, py::arg("base") = table_parameters());
  m.def(
      "trace_sigma",
      [](double c2, std::size_t n, const ModelParams& base) {
        py::list out;
        for (const auto& pt : trace_sigma(c2, n, base))
          out.append(py::make_tuple(pt.k1, pt.k2, pt.omega0, pt.l1_sign));
        return out;
      },
      py::arg("c2") = 100.0, py::arg("n") = 200,
      py::arg("base") = table_parameters());
  m.def(
      "find_tangency",
      [](const ModelParams& base) {
        const auto t = find_tangency(base);
        py::dict d;
        d["c2_star"] = t.c2_star;
        d["k1"] = t.k1;
        d["k2"] = t.k2;
        d["gradient"] = py::make_tuple(t.gradient[0], t.gradient[1]);
        d["second_derivative"] = t.second_derivative;
        d["k1_max"] = t.k1_max;
        return d;
      },
      py::arg("base") = table_parameters());

  m.def(
      "integrate",
      [](const ModelParams& p, const std::vector<double>& x0, double t_end,
         double tol, double dt) {
        const Trajectory tr = integrate(p, to_state(x0), t_end, tol, dt);
        py::list xs;
        for (const auto& x : tr.x) xs.append(to_list(x));
        return py::make_tuple(tr.t, xs);
      },
      py::arg("params"), py::arg("x0"), py::arg("t_end"), py::arg("tol") = 1e-9,
      py::arg("dt") = 0.0);
  m.def(
      "find_periodic_orbit",
      [](const ModelParams& p, std::optional<double> hint) {
        const PeriodicOrbit o = find_periodic_orbit(p, hint);
        py::dict d;
        d["anchor"] = to_list(o.anchor);
        d["period"] = o.period;
        d["multipliers"] = std::vector<cplx>(o.multipliers.begin(), o.multipliers.end());
        d["verdict"] = std::string(to_string(o.verdict));
        d["amplitude"] = o.amplitude;
        d["closure"] = o.closure;
        return d;
      },
      py::arg("params"), py::arg("hint_radius") = py::none());
}
