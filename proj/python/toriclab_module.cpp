#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "toriclab/asymptotics.hpp"
#include "toriclab/config.hpp"
#include "toriclab/errors.hpp"
#include "toriclab/experiment.hpp"
#include "toriclab/laplace.hpp"
#include "toriclab/polytope.hpp"
#include "toriclab/potential.hpp"
#include "toriclab/rays.hpp"

namespace py = pybind11;
using namespace toriclab;

namespace {

// Rational points cross the boundary as lists of "p/q" strings.
RationalPoint point_arg(const std::vector<std::string>& coords) { return RationalPoint::parse(coords); }

Weight weight_arg(const std::vector<std::int64_t>& coords) { return Weight(coords); }

QuadratureSpec quad_arg(std::size_t resolution, const std::vector<std::pair<double, double>>& box, unsigned threads) {
  QuadratureSpec q;
  q.resolution = resolution;
  q.box = box;
  q.threads = threads;
  return q;
}

py::dict minimizer_dict(const MinimizerReport& r) {
  py::dict d;
  d["u_star"] = r.u_star;
  d["f_min"] = r.f_min;
  d["gradient_norm"] = r.gradient_norm;
  d["hessian_condition"] = r.hessian_condition;
  d["min_eigenvalue"] = r.min_eigenvalue;
  d["iterations"] = r.iterations;
  return d;
}

py::dict fit_dict(const AsymptoticFit& f) {
  py::dict d;
  d["exponent"] = f.exponent;
  d["log_constant"] = f.log_constant;
  d["residual"] = f.residual;
  d["n_first"] = f.n_first;
  d["n_last"] = f.n_last;
  d["samples"] = f.samples;
  return d;
}

py::dict report_dict(const Report& r) {
  py::dict tables;
  for (const auto& t : r.tables) {
    py::dict d;
    d["header"] = t.header;
    d["rows"] = t.rows;
    tables[py::str(t.name)] = d;
  }
  py::dict out;
  out["command"] = r.command;
  out["tables"] = tables;
  out["summary"] = r.summary;
  out["ok"] = r.ok;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Semiclassical section sequences on toric varieties";

  auto validation = py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<RetryAtLargerN>(m, "RetryAtLargerN", validation.ptr());
  auto numeric = py::register_exception<NumericError>(m, "NumericError", PyExc_RuntimeError);
  py::register_exception<NonConvergence>(m, "NonConvergence", numeric.ptr());
  py::register_exception<BoxTooSmall>(m, "BoxTooSmall", numeric.ptr());

  py::class_<FacetPolytope>(m, "FacetPolytope")
      .def(py::init([](std::size_t dim, const std::vector<std::pair<std::vector<std::int64_t>, std::int64_t>>& facets) {
             std::vector<Facet> fs;
             for (const auto& [normal, offset] : facets) fs.push_back({CoWeight(normal), offset});
             return FacetPolytope(dim, std::move(fs));
           }),
           py::arg("dim"), py::arg("facets"), "facets are (normal, offset) pairs of <u, normal> >= -offset")
      .def_static("unit_interval", &FacetPolytope::unit_interval)
      .def_static("unit_simplex", &FacetPolytope::unit_simplex, py::arg("dim"))
      .def_static("unit_cube", &FacetPolytope::unit_cube, py::arg("dim"))
      .def_property_readonly("dim", &FacetPolytope::dim)
      .def_property_readonly("num_facets", &FacetPolytope::num_facets)
      .def_property_readonly("volume", [](const FacetPolytope& p) { return to_string(p.volume()); })
      .def_property_readonly("vertices",
                             [](const FacetPolytope& p) {
                               std::vector<std::vector<std::string>> out;
                               for (const auto& v : p.vertices()) out.push_back(v.to_strings());
                               return out;
                             })
      .def("contains", [](const FacetPolytope& p, const std::vector<std::string>& u) { return p.contains(point_arg(u)); })
      .def("lattice_points",
           [](const FacetPolytope& p, std::int64_t n) {
             std::vector<std::vector<std::int64_t>> out;
             for (const auto& w : p.lattice_points(n)) out.push_back(w.data());
             return out;
           })
      .def("face_of",
           [](const FacetPolytope& p, const std::vector<std::string>& xi) {
             const auto f = p.face_of(point_arg(xi));
             py::dict d;
             d["active"] = f.active;
             d["dim"] = f.dim;
             d["basepoint"] = f.basepoint.to_strings();
             return d;
           })
      .def("kappa", [](const FacetPolytope& p, const std::vector<std::string>& xi) {
        return to_string(p.kappa(point_arg(xi)));
      });

  py::class_<SectionSequence>(m, "SectionSequence")
      .def_static("tame",
                  [](const FacetPolytope& p, const std::vector<std::string>& xi) {
                    return SectionSequence::tame(p, point_arg(xi));
                  })
      .def_static("rounded",
                  [](const FacetPolytope& p, const std::vector<std::string>& xi) {
                    return SectionSequence::rounded(p, point_arg(xi));
                  })
      .def_static("offset",
                  [](const FacetPolytope& p, const std::vector<std::string>& xi,
                     const std::vector<std::vector<std::int64_t>>& offsets) {
                    std::vector<Weight> w;
                    for (const auto& o : offsets) w.emplace_back(o);
                    return SectionSequence::offset(p, point_arg(xi), std::move(w));
                  })
      .def_property_readonly("bound", &SectionSequence::bound)
      .def("alpha", [](const SectionSequence& s, std::int64_t n) { return s.alpha(n).data(); })
      .def("deviation", &SectionSequence::deviation)
      .def("is_tame", [](const SectionSequence& s, std::int64_t n_first, std::int64_t n_last) {
        const auto r = is_tame(s, n_first, n_last);
        py::dict d;
        d["tame"] = r.tame;
        d["witness"] = r.witness ? py::cast(*r.witness) : py::none();
        d["witness_order"] = r.witness_order;
        return d;
      });

  py::class_<MetricPotential>(m, "MetricPotential")
      .def(py::init<const FacetPolytope&>())
      .def(py::init<const FacetPolytope&, const std::vector<double>&>(), py::arg("polytope"), py::arg("weights"))
      .def_property_readonly("dim", &MetricPotential::dim)
      .def("value", &MetricPotential::value)
      .def("moment", &MetricPotential::moment)
      .def("covariance", &MetricPotential::covariance);

  m.def("f_N_eval", [](const MetricPotential& pot, const std::vector<std::int64_t>& alpha, std::int64_t n,
                       const Eigen::VectorXd& u) { return f_N_eval(pot, weight_arg(alpha), n, u); });
  m.def("minimize", [](const MetricPotential& pot, const std::vector<std::string>& xi) {
    return minimizer_dict(minimize(pot, point_arg(xi)));
  });
  m.def("face_minimize", [](const MetricPotential& pot, const std::vector<std::string>& xi) {
    return minimizer_dict(face_minimize(pot, point_arg(xi)));
  });

  const auto quad_args = std::make_tuple(py::arg("resolution") = 128,
                                         py::arg("box") = std::vector<std::pair<double, double>>{},
                                         py::arg("threads") = 1u);
  m.def(
      "log_norm_sq",
      [](const MetricPotential& pot, const std::vector<std::int64_t>& alpha, std::int64_t n, std::size_t resolution,
         const std::vector<std::pair<double, double>>& box, unsigned threads) {
        return log_norm_sq(pot, weight_arg(alpha), n, quad_arg(resolution, box, threads));
      },
      py::arg("potential"), py::arg("alpha"), py::arg("n"), std::get<0>(quad_args), std::get<1>(quad_args),
      std::get<2>(quad_args), "log of the integral of |s_alpha|^2 over the torus orbit, angular factor left out");
  m.def(
      "log_density_point",
      [](const MetricPotential& pot, const std::vector<std::int64_t>& alpha, std::int64_t n, const Eigen::VectorXd& u,
         std::size_t resolution, const std::vector<std::pair<double, double>>& box, unsigned threads) {
        return log_density_point(pot, weight_arg(alpha), n, quad_arg(resolution, box, threads), u);
      },
      py::arg("potential"), py::arg("alpha"), py::arg("n"), py::arg("u"), std::get<0>(quad_args),
      std::get<1>(quad_args), std::get<2>(quad_args));
  m.def(
      "tail_volume",
      [](const MetricPotential& pot, const std::vector<std::int64_t>& alpha, std::int64_t n, double t,
         std::size_t resolution, const std::vector<std::pair<double, double>>& box, unsigned threads) {
        return tail_volume(pot, weight_arg(alpha), n, quad_arg(resolution, box, threads), t);
      },
      py::arg("potential"), py::arg("alpha"), py::arg("n"), py::arg("t"), std::get<0>(quad_args),
      std::get<1>(quad_args), std::get<2>(quad_args));
  m.def(
      "weak_convergence_test",
      [](const MetricPotential& pot, const std::vector<std::int64_t>& alpha, std::int64_t n,
         const std::function<double(const Eigen::VectorXd&)>& fn, std::size_t resolution,
         const std::vector<std::pair<double, double>>& box, unsigned threads) {
        return weak_convergence_test(pot, weight_arg(alpha), n, quad_arg(resolution, box, threads), fn);
      },
      py::arg("potential"), py::arg("alpha"), py::arg("n"), py::arg("fn"), std::get<0>(quad_args),
      std::get<1>(quad_args), std::get<2>(quad_args));
  m.def("fit_power_law", [](const std::vector<std::pair<std::int64_t, double>>& s) { return fit_dict(fit_power_law(s)); });
  m.def("fit_log_law", [](const std::vector<std::pair<std::int64_t, double>>& s) { return fit_dict(fit_log_law(s)); });
  m.def("euclidean_chart_integral", &euclidean_chart_integral, py::arg("a"), py::arg("n"));

  m.def("digamma", &digamma);
  m.def("trigamma", &trigamma);
  m.def("gamma_derivative", &gamma_derivative, py::arg("x"), py::arg("order"));
  m.def("term_transform_exact", &term_transform_exact, py::arg("alpha"), py::arg("j"), py::arg("t"));
  m.def(
      "truncated_transform",
      [](double alpha, int j, double t, double a_cut) {
        const auto r = truncated_transform(alpha, j, t, a_cut);
        py::dict d;
        d["value"] = r.value;
        d["quadrature_error"] = r.quadrature_error;
        d["remainder"] = r.remainder;
        return d;
      },
      py::arg("alpha"), py::arg("j"), py::arg("t"), py::arg("cut"));
  m.def(
      "cut_bound",
      [](double c, int npow, double t) {
        const auto b = cut_bound(c, npow, t);
        py::dict d;
        d["log_bound"] = b.log_bound;
        d["value"] = b.value ? py::cast(*b.value) : py::none();
        return d;
      },
      py::arg("c"), py::arg("npow"), py::arg("t"));
  m.def(
      "curve_limit",
      [](const std::vector<int>& exponents, const std::vector<double>& t_grid, int n, double radius, double scale) {
        RadialFunction sq = [](const std::vector<double>& z) {
          double s = 0;
          for (double v : z) s += v;
          return s;
        };
        const auto r = curve_limit(monomial_curve(exponents), sq, n, t_grid, {radius, scale});
        py::dict d;
        d["constant"] = r.constant;
        d["exponent"] = r.exponent;
        d["residual"] = r.residual;
        d["converged"] = r.converged;
        d["samples"] = r.samples;
        return d;
      },
      py::arg("exponents"), py::arg("t_grid"), py::arg("n") = 1, py::arg("radius") = 1.0, py::arg("scale") = 1.0,
      "limit of t^n F(t) for the monomial curve s -> (s^e_1, ...) and f = |z|^2");

  m.def("parse_config", [](const std::string& text) { return serialize_config(parse_config(text)); },
        "validates an experiment config and returns its normal form");
  m.def(
      "run",
      [](const std::string& command, const std::string& config_text, std::optional<std::size_t> resolution,
         unsigned threads, std::uint64_t seed) {
        RunOptions opt{resolution, threads, seed};
        if (command == "laplace") return report_dict(cmd_laplace(opt));
        if (command == "selftest") return report_dict(cmd_selftest(opt));
        const auto cfg = parse_config(config_text);
        if (command == "sections") return report_dict(cmd_sections(cfg, opt));
        if (command == "ray") return report_dict(cmd_ray(cfg, opt));
        if (command == "norms") return report_dict(cmd_norms(cfg, opt));
        if (command == "tails") return report_dict(cmd_tails(cfg, opt));
        if (command == "weak") return report_dict(cmd_weak(cfg, opt));
        throw ValidationError("unknown command '" + command + "'");
      },
      py::arg("command"), py::arg("config") = "", py::arg("resolution") = std::nullopt, py::arg("threads") = 1u,
      py::arg("seed") = 1u);
}
