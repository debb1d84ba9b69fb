#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "experiment_config.hpp"
#include "experiments.hpp"
#include "hlab/errors.hpp"
#include "hlab/hashimoto.hpp"
#include "hlab/heat.hpp"
#include "hlab/initial_data.hpp"
#include "hlab/llg.hpp"
#include "hlab/noise.hpp"
#include "hlab/stochastic.hpp"
#include "hlab/validation.hpp"

namespace py = pybind11;
using namespace hlab;

namespace {

using RealArray = py::array_t<double, py::array::c_style | py::array::forcecast>;
using ComplexArray = py::array_t<Complex, py::array::c_style | py::array::forcecast>;

Vec3Field to_vec3(const RealArray& a) {
  if (a.ndim() != 2 || a.shape(1) != 3) throw PreconditionError("expected an (n, 3) array");
  auto r = a.unchecked<2>();
  Vec3Field v(static_cast<std::size_t>(a.shape(0)));
  for (py::ssize_t j = 0; j < a.shape(0); ++j) v[j] = {r(j, 0), r(j, 1), r(j, 2)};
  return v;
}

Vec3 to_vec(const std::array<double, 3>& a) { return {a[0], a[1], a[2]}; }

ComplexField to_complex(const ComplexArray& a) {
  if (a.ndim() != 1) throw PreconditionError("expected a 1-d complex array");
  return ComplexField(a.data(), a.data() + a.size());
}

RealArray from_vec3(const Vec3Field& v) {
  RealArray out({static_cast<py::ssize_t>(v.size()), py::ssize_t{3}});
  auto w = out.mutable_unchecked<2>();
  for (std::size_t j = 0; j < v.size(); ++j) {
    w(j, 0) = v[j].x;
    w(j, 1) = v[j].y;
    w(j, 2) = v[j].z;
  }
  return out;
}

ComplexArray from_complex(const ComplexField& q) {
  ComplexArray out(static_cast<py::ssize_t>(q.size()));
  std::copy(q.begin(), q.end(), out.mutable_data());
  return out;
}

RealArray from_real(const RealField& f) {
  RealArray out(static_cast<py::ssize_t>(f.size()));
  std::copy(f.begin(), f.end(), out.mutable_data());
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Hasimoto transform, LLG and heat solvers, stochastic LLG and validation checks";
  m.attr("__version__") = HLAB_VERSION;

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);
  py::register_exception<BlowUpError>(m, "BlowUpError", PyExc_RuntimeError);

  py::class_<Grid1D>(m, "Grid")
      .def(py::init([](const std::string& domain, double x_min, double x_max, std::size_t n,
                       std::size_t basepoint) {
             if (domain != "periodic" && domain != "line")
               throw ConfigError("domain must be 'periodic' or 'line'");
             const DomainSpec d = domain == "periodic" ? DomainSpec::periodic(x_max - x_min, x_min)
                                                       : DomainSpec::line(x_min, x_max);
             return make_grid(d, n, basepoint);
           }),
           py::arg("domain"), py::arg("x_min"), py::arg("x_max"), py::arg("n"), py::arg("basepoint") = 0)
      .def_property_readonly("n", &Grid1D::size)
      .def_property_readonly("h", &Grid1D::spacing)
      .def_property_readonly("periodic", &Grid1D::periodic)
      .def_property_readonly("basepoint", &Grid1D::basepoint)
      .def_property_readonly("x", [](const Grid1D& g) { return from_real(g.coordinates()); });

  m.def("great_circle",
        [](const Grid1D& g, double k) { return from_vec3(great_circle(g, k).values()); },
        py::arg("grid"), py::arg("k"));
  m.def("wobbly_loop",
        [](const Grid1D& g, double wobble, double shift) { return from_vec3(wobbly_loop(g, wobble, shift).values()); },
        py::arg("grid"), py::arg("wobble") = 0.4, py::arg("shift") = 0.3);
  m.def("localized_twist",
        [](const Grid1D& g, double amplitude, double width, double center, double twist, double floor) {
          return from_complex(LocalizedTwist{amplitude, width, center, twist, floor}.profile(g));
        },
        py::arg("grid"), py::arg("amplitude") = 1.0, py::arg("width") = 1.0, py::arg("center") = 0.0,
        py::arg("twist") = 0.5, py::arg("floor") = 1e-7);

  m.def("transform",
        [](const RealArray& u, const Grid1D& g, double eps_rel) {
          return from_complex(transform(SphereField(to_vec3(u), 1e-10), g, eps_rel));
        },
        py::arg("u"), py::arg("grid"), py::arg("eps_rel") = kDefaultEpsRel);
  m.def("curvature_torsion",
        [](const RealArray& u, const Grid1D& g, double eps_rel) {
          const CurvatureTorsion ct = curvature_torsion(SphereField(to_vec3(u), 1e-10), g, eps_rel);
          return py::make_tuple(from_real(ct.theta), from_real(ct.eta));
        },
        py::arg("u"), py::arg("grid"), py::arg("eps_rel") = kDefaultEpsRel);
  m.def("reconstruct_frame",
        [](const ComplexArray& q, const Grid1D& g, std::array<double, 3> mv, std::array<double, 3> ev) {
          const FrameField f = reconstruct_frame(to_complex(q), g, to_vec(mv), to_vec(ev));
          return py::make_tuple(from_vec3(f.u), from_vec3(f.e));
        },
        py::arg("q"), py::arg("grid"), py::arg("m"), py::arg("e0"));

  m.def("llg_integrate",
        [](const RealArray& u0, const Grid1D& g, double alpha, double beta, double dt, double t_end,
           std::size_t stride) {
          LLGConfig c;
          c.alpha = alpha;
          c.beta = beta;
          c.dt = dt;
          c.t_end = t_end;
          c.output_stride = stride;
          const LLGTrajectory tr = llg_integrate(SphereField(to_vec3(u0), 1e-10), g, c);
          py::list states;
          for (const auto& s : tr.states) states.append(from_vec3(s.values()));
          return py::make_tuple(tr.times, states);
        },
        py::arg("u0"), py::arg("grid"), py::arg("alpha") = 1.0, py::arg("beta") = 1.0,
        py::arg("dt") = 1e-4, py::arg("t_end") = 0.1, py::arg("output_stride") = 1);

  m.def("heat_integrate",
        [](const ComplexArray& q0, const Grid1D& g, double alpha, double beta, double dt, double t_end,
           std::size_t stride, const std::string& form) {
          HeatConfig c;
          c.alpha = alpha;
          c.beta = beta;
          c.dt = dt;
          c.t_end = t_end;
          c.output_stride = stride;
          if (form != "expanded" && form != "compact") throw ConfigError("form must be 'expanded' or 'compact'");
          c.form = form == "compact" ? HeatForm::compact : HeatForm::expanded;
          const HeatTrajectory tr = heat_integrate(to_complex(q0), g, c);
          py::list states;
          for (const auto& s : tr.states) states.append(from_complex(s));
          return py::make_tuple(tr.times, states);
        },
        py::arg("q0"), py::arg("grid"), py::arg("alpha") = 1.0, py::arg("beta") = 1.0,
        py::arg("dt") = 1e-4, py::arg("t_end") = 0.1, py::arg("output_stride") = 1,
        py::arg("form") = "expanded");

  m.def("run_sllg",
        [](const ComplexArray& q0, const Grid1D& g, std::array<double, 3> mv, std::array<double, 3> ev,
           std::vector<double> coeffs, std::uint64_t seed, double alpha, double beta, double dt,
           double t_end, std::size_t record_stride) {
          SLLGConfig c;
          c.alpha = alpha;
          c.beta = beta;
          c.dt = dt;
          c.t_end = t_end;
          c.record_stride = record_stride;
          const NoiseModel nm(g, std::move(coeffs), derive_seed(seed, seed_tag::sllg_path, 0));
          const SLLGPath p = run_sllg(to_complex(q0), g, to_vec(mv), to_vec(ev), nm, c);
          py::list q, u, e;
          for (std::size_t k = 0; k < p.times.size(); ++k) {
            q.append(from_complex(p.q[k]));
            u.append(from_vec3(p.frames[k].u));
            e.append(from_vec3(p.frames[k].e));
          }
          py::dict out;
          out["times"] = p.times;
          out["q"] = q;
          out["u"] = u;
          out["e"] = e;
          out["max_orthonormality_defect"] = p.max_orthonormality_defect;
          out["steps"] = p.steps;
          return out;
        },
        py::arg("q0"), py::arg("grid"), py::arg("m"), py::arg("e0"), py::arg("coeffs"),
        py::arg("seed") = 1, py::arg("alpha") = 1.0, py::arg("beta") = 1.0, py::arg("dt") = 1e-4,
        py::arg("t_end") = 0.05, py::arg("record_stride") = 0);

  m.def("fit_order", &fit_order, py::arg("h"), py::arg("err"));

  m.def("experiments", [] {
    py::list out;
    for (const auto& e : cli::experiment_catalog()) out.append(py::make_tuple(e.kind, e.module, e.summary));
    return out;
  });
  m.def("run_experiment",
        [](const std::string& experiment, const std::map<std::string, std::string>& settings,
           const std::string& out_dir) {
          std::vector<std::pair<std::string, std::string>> overrides(settings.begin(), settings.end());
          const cli::ExperimentConfig cfg = cli::resolve_config(experiment, {}, overrides, nullptr);
          cli::precheck(cfg);
          std::filesystem::create_directories(out_dir);
          cli::RunResult r;
          {
            py::gil_scoped_release release;
            r = cli::run_experiment(cfg, out_dir);
          }
          return py::make_tuple(r.report.dump(), r.outputs);
        },
        py::arg("experiment"), py::arg("settings"), py::arg("out_dir"));
}
