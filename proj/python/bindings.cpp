#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "newton_measure/app.hpp"
#include "newton_measure/asym.hpp"
#include "newton_measure/errors.hpp"
#include "newton_measure/measure.hpp"
#include "newton_measure/render.hpp"
#include "newton_measure/roots.hpp"

namespace py = pybind11;
using namespace nmeasure;

namespace {

// A problem together with the frame of the coordinates it was given in.
struct PyProblem {
  Problem prob;
  ConformalMapRecord record;
};

PyProblem make(const std::vector<cplx>& p, const std::vector<cplx>& q, cplx c, bool normalized) {
  PyProblem out;
  if (normalized) {
    auto [prob, rec] = normalize(Polynomial(p), Polynomial(q), c);
    out.prob = std::move(prob);
    out.record = rec;
  } else {
    out.prob = make_problem(Polynomial(p), Polynomial(q), c);
  }
  return out;
}

Problem& with_constants(PyProblem& pp) {
  if (!pp.prob.has_sector_constants()) ensure_sector_constants(pp.prob);
  return pp.prob;
}

py::dict orbit_dict(const OrbitResult& r) {
  py::dict d;
  d["verdict"] = to_string(r.verdict);
  d["iterations"] = r.iterations;
  d["final_point"] = r.final_point;
  d["root"] = r.root;
  d["period"] = r.period;
  d["attracting"] = r.attracting;
  return d;
}

MeasureOptions options(const PyProblem& pp, int budget, int threads) {
  MeasureOptions o;
  o.orbit.budget = budget;
  o.frame.alpha = pp.record.alpha;
  o.threads = threads;
  return o;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Newton maps of g(z) = int_0^z p(t) e^{q(t)} dt + c";

  static py::exception<NumericError> numeric_error(m, "NumericError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const NumericError& e) {
      py::set_error(numeric_error, e.what());
    }
  });

  py::class_<PyProblem>(m, "Problem")
      .def(py::init(&make), py::arg("p"), py::arg("q"), py::arg("c"), py::arg("normalize") = true,
           "Coefficients in ascending degree. With normalize=True the problem is conjugated so that q is "
           "monic; alpha then maps user coordinates to problem coordinates.")
      .def_property_readonly("d", [](const PyProblem& pp) { return pp.prob.d; })
      .def_property_readonly("m", [](const PyProblem& pp) { return pp.prob.m; })
      .def_property_readonly("lam", [](const PyProblem& pp) { return pp.prob.lambda_value(); })
      .def_property_readonly("R", [](const PyProblem& pp) { return pp.prob.R; })
      .def_property_readonly("alpha", [](const PyProblem& pp) { return pp.record.alpha; })
      .def_property_readonly("b", [](const PyProblem& pp) { return pp.record.b; })
      .def_property_readonly("c", [](const PyProblem& pp) { return pp.prob.c; })
      .def_property_readonly("p", [](const PyProblem& pp) {
        return std::vector<cplx>(pp.prob.p.coeffs().begin(), pp.prob.p.coeffs().end());
      })
      .def_property_readonly("q", [](const PyProblem& pp) {
        return std::vector<cplx>(pp.prob.q.coeffs().begin(), pp.prob.q.coeffs().end());
      })
      .def("sector_constants",
           [](PyProblem& pp) {
             const Problem& prob = with_constants(pp);
             std::vector<cplx> out;
             for (int j = 1; j <= prob.d; ++j) out.push_back(sector_constant(prob, j));
             return out;
           })
      .def("g", [](const PyProblem& pp, cplx z) { return eval_g(pp.prob, z); }, py::arg("z"))
      .def("f", [](const PyProblem& pp, cplx z) { return eval_f(pp.prob, z); }, py::arg("z"))
      .def("step", [](PyProblem& pp, cplx z) { return step(with_constants(pp), z); }, py::arg("z"))
      .def("phi", [](const PyProblem& pp, int j, cplx w) { return phi(pp.prob, j, w); }, py::arg("j"), py::arg("w"))
      .def("critical_points", [](const PyProblem& pp) { return critical_points(pp.prob); })
      .def(
          "orbit",
          [](PyProblem& pp, cplx z, int budget) {
            OrbitOptions o;
            o.budget = budget;
            return orbit_dict(iterate_orbit(with_constants(pp), z, o));
          },
          py::arg("z"), py::arg("budget") = 200)
      .def(
          "zero_anchor", [](PyProblem& pp, int j, long k) { return v_anchor(with_constants(pp), j, k).v; },
          py::arg("j"), py::arg("k"))
      .def(
          "refine_zero", [](const PyProblem& pp, cplx guess) { return refine_zero(pp.prob, guess); },
          py::arg("guess"));

  m.def("gamma_solve", py::overload_cast<double, double, double>(&gamma_solve), py::arg("mu"), py::arg("alpha"),
        py::arg("y"));

  m.def(
      "density",
      [](PyProblem& pp, cplx center, double r, long n, std::uint64_t seed, int budget, int threads) {
        const DensityReport rep =
            density(with_constants(pp), Shape::disk(center, r), n, seed, options(pp, budget, threads));
        py::dict d;
        d["n"] = rep.n;
        d["fatou"] = rep.fatou;
        d["unresolved"] = rep.unresolved;
        d["density"] = rep.density;
        d["half_width"] = rep.half_width;
        return d;
      },
      py::arg("problem"), py::arg("center"), py::arg("r"), py::arg("n") = 1000, py::arg("seed") = 1,
      py::arg("budget") = 200, py::arg("threads") = 0, "Fatou density of the disk (user coordinates).");

  m.def(
      "render_basins",
      [](PyProblem& pp, cplx lo, cplx hi, int width, int height, int budget, int threads) {
        const ImageBuffer img =
            render_basins(with_constants(pp), lo, hi, width, height, options(pp, budget, threads));
        py::array_t<int> labels({height, width});
        auto view = labels.mutable_unchecked<2>();
        for (int iy = 0; iy < height; ++iy)
          for (int ix = 0; ix < width; ++ix) view(iy, ix) = img.label[img.index(ix, iy)];
        return labels;
      },
      py::arg("problem"), py::arg("lo"), py::arg("hi"), py::arg("width"), py::arg("height"), py::arg("budget") = 200,
      py::arg("threads") = 0,
      "Per-pixel labels, row 0 at the top: root index >= 0, -1 unresolved, -2 pole, -3 escaped, -4 cycle.");

  m.def(
      "run",
      [](const std::string& command, const std::string& config, const std::string& target, int res, int budget,
         std::uint64_t seed, const std::string& out, long samples) {
        RunConfig cfg;
        cfg.command = command;
        cfg.config_path = config;
        cfg.target = target;
        cfg.res = res;
        cfg.budget = budget;
        cfg.seed = seed;
        cfg.out = out;
        cfg.samples = samples;
        std::ostringstream o, e;
        const int code = run(cfg, o, e);
        return py::make_tuple(code, o.str(), e.str());
      },
      py::arg("command"), py::arg("config") = "", py::arg("target") = "", py::arg("res") = 512,
      py::arg("budget") = 200, py::arg("seed") = 1, py::arg("out") = "", py::arg("samples") = 0,
      "Runs a CLI subcommand; returns (exit_code, stdout, stderr).");
}
