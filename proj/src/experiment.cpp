#include "toriclab/experiment.hpp"

#include "toriclab/asymptotics.hpp"
#include "toriclab/errors.hpp"
#include "toriclab/laplace.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

namespace toriclab {

namespace {

std::string fmt(double x) { return format_number(x); }
std::string fmt(std::int64_t x) { return std::to_string(x); }
std::string fmt(std::size_t x) { return std::to_string(x); }

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

// weights and points go into single cells, space separated
std::string cell(const Weight& w) {
  std::vector<std::string> s;
  for (auto c : w.data()) s.push_back(std::to_string(c));
  return join(s, " ");
}

std::string cell(const std::vector<std::size_t>& v) {
  std::vector<std::string> s;
  for (auto c : v) s.push_back(std::to_string(c));
  return join(s, " ");
}

std::string markdown(const Table& t) {
  std::string out = "| " + join(t.header, " | ") + " |\n|";
  for (std::size_t i = 0; i < t.header.size(); ++i) out += "---|";
  out += "\n";
  for (const auto& r : t.rows) out += "| " + join(r, " | ") + " |\n";
  return out;
}

double require_finite(double x, const std::string& what) {
  if (!std::isfinite(x)) throw NumericError(what + " is not finite");
  return x;
}

QuadratureSpec quadrature_for(const ExperimentConfig& cfg, const RunOptions& opt) {
  QuadratureSpec q;
  q.resolution = opt.resolution.value_or(cfg.quadrature.resolution.value_or(128));
  q.box = cfg.quadrature.box;
  q.threads = opt.threads;
  return q;
}

void require_fit_ladder(const ExperimentConfig& cfg) {
  if (cfg.n_list.size() < 5) throw ValidationError("fits need at least 5 values in N_list");
}

std::string header_block(const ExperimentConfig& cfg) {
  std::ostringstream s;
  s << "- polytope: dimension " << cfg.polytope.dim() << ", " << cfg.polytope.num_facets() << " facets\n";
  s << "- ray xi = " << to_string(cfg.ray) << ", face dimension " << cfg.polytope.face_of(cfg.ray).dim
    << ", kappa = " << to_string(cfg.polytope.kappa(cfg.ray)) << "\n";
  s << "- sequence: " << to_string(cfg.sequence.kind) << "\n";
  return s.str();
}

double kappa_of(const ExperimentConfig& cfg) { return to_double(cfg.polytope.kappa(cfg.ray)); }

}  // namespace

std::string format_number(double x) {
  if (x == 0) return "0";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

std::string to_csv(const Table& t) {
  std::string out = join(t.header, ",") + "\n";
  for (const auto& r : t.rows) out += join(r, ",") + "\n";
  return out;
}

void write_report(const Report& r, const std::string& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& t : r.tables) {
    std::ofstream out(std::filesystem::path(dir) / (t.name + ".csv"), std::ios::binary);
    out << to_csv(t);
  }
  std::ofstream md(std::filesystem::path(dir) / (r.command + ".md"), std::ios::binary);
  md << r.summary;
}

Report cmd_sections(const ExperimentConfig& cfg, const RunOptions&) {
  const auto& p = cfg.polytope;
  Report r{"sections", {}, {}, true};
  Table sections{"sections", {"N", "alpha"}, {}};
  for (std::size_t j = 0; j < p.num_facets(); ++j) sections.header.push_back("order_" + std::to_string(j));
  for (auto n : cfg.n_list) {
    for (const auto& a : p.lattice_points(n)) {
      std::vector<std::string> row{fmt(n), cell(a)};
      for (std::size_t j = 0; j < p.num_facets(); ++j) row.push_back(fmt(vanishing_order(p, a, n, j)));
      sections.rows.push_back(std::move(row));
    }
  }
  const auto profile = order_profile(p, cfg.ray);
  Table facets{"profile", {"facet", "normal", "offset", "k"}, {}};
  for (std::size_t j = 0; j < p.num_facets(); ++j) {
    const auto& f = p.facets()[j];
    std::vector<std::string> normal;
    for (auto c : f.normal.data()) normal.push_back(std::to_string(c));
    facets.rows.push_back({fmt(j), join(normal, " "), fmt(f.offset), to_string(profile.k[j])});
  }
  std::ostringstream s;
  s << "# Sections\n\n" << header_block(cfg) << "\n";
  for (auto n : cfg.n_list) s << "- N = " << n << ": " << p.lattice_points(n).size() << " sections\n";
  s << "\n## Vanishing profile along the ray\n\n" << markdown(facets);
  r.summary = s.str();
  r.tables = {std::move(sections), std::move(facets)};
  return r;
}

Report cmd_ray(const ExperimentConfig& cfg, const RunOptions&) {
  const auto seq = make_sequence(cfg);
  Report r{"ray", {}, {}, true};
  Table t{"ray", {"N", "alpha", "deviation"}, {}};
  for (auto n : cfg.n_list) t.rows.push_back({fmt(n), cell(seq.alpha(n)), fmt(seq.deviation(n))});
  const auto tame = is_tame(seq, cfg.n_list.front(), cfg.n_list.back());
  std::ostringstream s;
  s << "# Ray\n\n" << header_block(cfg);
  s << "- deviation bound B = " << seq.bound() << "\n";
  s << "- limiting support (facets with k > 0): " << cell(limiting_support(cfg.polytope, cfg.ray)) << "\n";
  s << "- tame on [" << cfg.n_list.front() << ", " << cfg.n_list.back() << "]: " << (tame.tame ? "yes" : "no");
  if (tame.witness)
    s << " (N = " << tame.witness->first << ", facet " << tame.witness->second << ", order " << tame.witness_order
      << ")";
  s << "\n\n" << markdown(t);
  r.summary = s.str();
  r.tables = {std::move(t)};
  return r;
}

Report cmd_norms(const ExperimentConfig& cfg, const RunOptions& opt) {
  require_fit_ladder(cfg);
  const auto pot = make_potential(cfg);
  const auto seq = make_sequence(cfg);
  const auto quad = quadrature_for(cfg, opt);
  const double kappa = kappa_of(cfg);
  Report r{"norms", {}, {}, true};
  Table t{"norms",
          {"N", "alpha", "log_norm_sq", "f_min", "log_norm_sq_rescaled", "kappa_expected", "tail_margin", "iterations"},
          {}};
  std::vector<std::pair<std::int64_t, double>> samples;
  for (auto n : cfg.n_list) {
    const auto alpha = seq.alpha(n);
    const auto rep = norm_report(pot, alpha, n, quad);
    const auto fm = face_minimize(pot, RationalPoint(alpha) * Rational(1, n));
    const double rescaled = require_finite(rep.log_norm_sq + static_cast<double>(n) * fm.f_min, "rescaled norm");
    samples.emplace_back(n, rescaled);
    t.rows.push_back({fmt(n), cell(alpha), fmt(require_finite(rep.log_norm_sq, "log norm")), fmt(fm.f_min),
                      fmt(rescaled), fmt(kappa), fmt(rep.tail_margin), std::to_string(fm.iterations)});
  }
  const auto fit = fit_power_law(samples);
  Table f{"norms_fit", {"exponent", "expected", "log_constant", "residual"}, {}};
  f.rows.push_back({fmt(fit.exponent), fmt(-kappa), fmt(fit.log_constant), fmt(fit.residual)});
  std::ostringstream s;
  s << "# Norms\n\n" << header_block(cfg) << "- resolution " << quad.resolution << " per axis\n\n";
  s << "log ||s_N||^2 + N f_min regressed on log N:\n\n" << markdown(f) << "\n" << markdown(t);
  r.summary = s.str();
  r.tables = {std::move(t), std::move(f)};
  return r;
}

Report cmd_tails(const ExperimentConfig& cfg, const RunOptions& opt) {
  require_fit_ladder(cfg);
  const auto pot = make_potential(cfg);
  const auto seq = make_sequence(cfg);
  const bool compare = cfg.sequence.kind != SequenceKind::tame;
  const auto tame = make_tame_sequence(cfg);
  const auto quad = quadrature_for(cfg, opt);
  const auto t_grid = cfg.t_grid.empty() ? std::vector<double>{1e-3, 1e-2, 1e-1, 1.0} : cfg.t_grid;
  const double kappa = kappa_of(cfg);
  Report r{"tails", {}, {}, true};
  Table t{"tails", {"N", "t", "D"}, {}};
  if (compare) t.header.insert(t.header.end(), {"D_tame", "holds"});
  std::vector<std::vector<std::pair<std::int64_t, double>>> per_t(t_grid.size());
  std::size_t violations = 0;
  for (auto n : cfg.n_list) {
    for (std::size_t k = 0; k < t_grid.size(); ++k) {
      std::vector<std::string> row{fmt(n), fmt(t_grid[k])};
      double d = 0;
      if (compare) {
        const auto c = compare_tame(pot, seq, tame, n, quad, t_grid[k]);
        d = c.d_sequence;
        row.insert(row.end(), {fmt(d), fmt(c.d_tame), c.holds ? "yes" : "no"});
        if (!c.holds) ++violations;
      } else {
        d = tail_volume(pot, seq, n, quad, t_grid[k]);
        row.push_back(fmt(d));
      }
      if (d > 0) per_t[k].emplace_back(n, std::log(d));
      t.rows.push_back(std::move(row));
    }
  }
  Table f{"tails_fit", {"t", "slope", "expected", "residual", "samples"}, {}};
  for (std::size_t k = 0; k < t_grid.size(); ++k) {
    if (per_t[k].size() < 5) continue;
    const auto fit = fit_log_law(per_t[k]);
    f.rows.push_back({fmt(t_grid[k]), fmt(fit.exponent), fmt(kappa), fmt(fit.residual), fmt(fit.samples)});
  }
  std::ostringstream s;
  s << "# Tails\n\n" << header_block(cfg) << "- resolution " << quad.resolution << " per axis\n";
  if (compare) s << "- comparison with the tame rule: " << violations << " violations of D_N(t) <= D'_N(t)\n";
  s << "\nlog D_N(t) regressed on log(log N / N):\n\n" << markdown(f) << "\n" << markdown(t);
  r.summary = s.str();
  r.tables = {std::move(t), std::move(f)};
  return r;
}

Report cmd_weak(const ExperimentConfig& cfg, const RunOptions& opt) {
  const auto pot = make_potential(cfg);
  const auto seq = make_sequence(cfg);
  const auto quad = quadrature_for(cfg, opt);
  const auto xi = cfg.ray.to_doubles();
  const auto m = cfg.polytope.dim();
  struct Probe {
    std::string name;
    MomentTestFunction fn;
    double target;
  };
  std::vector<Probe> probes;
  for (std::size_t i = 0; i < m; ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    probes.push_back({"p" + std::to_string(i), [k](const Eigen::VectorXd& p) { return p[k]; }, xi[i]});
    probes.push_back({"p" + std::to_string(i) + "^2", [k](const Eigen::VectorXd& p) { return p[k] * p[k]; },
                      xi[i] * xi[i]});
  }
  probes.push_back({"|p-xi|^2",
                    [xi](const Eigen::VectorXd& p) {
                      double s = 0;
                      for (Eigen::Index i = 0; i < p.size(); ++i)
                        s += (p[i] - xi[static_cast<std::size_t>(i)]) * (p[i] - xi[static_cast<std::size_t>(i)]);
                      return s;
                    },
                    0.0});
  Report r{"weak", {}, {}, true};
  Table t{"weak", {"N", "test", "value", "limit", "deviation"}, {}};
  for (auto n : cfg.n_list) {
    for (const auto& probe : probes) {
      const double v = require_finite(weak_convergence_test(pot, seq, n, quad, probe.fn), "weak test value");
      t.rows.push_back({fmt(n), probe.name, fmt(v), fmt(probe.target), fmt(std::abs(v - probe.target))});
    }
  }
  std::ostringstream s;
  s << "# Weak convergence\n\n" << header_block(cfg) << "\n" << markdown(t);
  r.summary = s.str();
  r.tables = {std::move(t)};
  return r;
}

Report cmd_laplace(const RunOptions&) {
  Report r{"laplace", {}, {}, true};
  Table tr{"laplace_transforms", {"alpha", "j", "t", "exact", "truncated", "remainder", "agrees"}, {}};
  for (double a : {0.0, 0.5, 1.0}) {
    for (int j : {0, 1, 2}) {
      for (double t : {10.0, 50.0, 200.0}) {
        const double exact = term_transform_exact(a, j, t);
        const auto cut = truncated_transform(a, j, t, 3.0);
        const bool ok = std::abs(exact - cut.value) <= cut.remainder + cut.quadrature_error + 1e-15;
        r.ok = r.ok && ok;
        tr.rows.push_back({fmt(a), std::to_string(j), fmt(t), fmt(exact), fmt(cut.value), fmt(cut.remainder),
                           ok ? "yes" : "no"});
      }
    }
  }
  Table cb{"laplace_cut", {"npow", "t", "integral", "bound", "holds"}, {}};
  for (int npow : {0, 2, 5}) {
    for (double t : {10.0, 100.0}) {
      const auto c = cut_check([npow](double s) { return std::pow(s, npow); }, 1.0, npow, t, 2.0);
      r.ok = r.ok && c.holds;
      cb.rows.push_back({std::to_string(npow), fmt(t), fmt(c.integral), fmt(c.bound.log_bound), c.holds ? "yes" : "no"});
    }
  }
  cb.header[3] = "log_bound";
  RadialFunction sq = [](const std::vector<double>& z) {
    double s = 0;
    for (double v : z) s += v;
    return s;
  };
  const std::vector<double> grid{200, 300, 450, 650, 1000};
  Table cl{"laplace_curves", {"curve", "constant", "expected", "exponent", "residual", "tF_at_last_t"}, {}};
  const RadialCurve line = monomial_curve({1});
  const RadialCurve cusp = monomial_curve({2, 3});
  for (const auto& [name, curve, want] :
       {std::tuple{"line", line, std::numbers::pi}, std::tuple{"cusp", cusp, 2 * std::numbers::pi}}) {
    const auto lim = curve_limit(curve, sq, 1, grid);
    r.ok = r.ok && lim.converged;
    cl.rows.push_back({name, fmt(lim.constant), fmt(want), fmt(lim.exponent), fmt(lim.residual),
                       fmt(lim.samples.back().second)});
  }
  std::ostringstream s;
  s << "# Laplace oracle\n\n## Term transforms, cut at A = 3\n\n"
    << markdown(tr) << "\n## Cut bounds for s^n on (0, 2]\n\n"
    << markdown(cb) << "\n## Curve limits of t F(t)\n\n"
    << markdown(cl);
  r.summary = s.str();
  r.tables = {std::move(tr), std::move(cb), std::move(cl)};
  return r;
}

Fault parse_fault(const std::string& s) {
  if (s.empty() || s == "none") return Fault::none;
  if (s == "zero-weight") return Fault::zero_weight;
  if (s == "perturbed-hessian") return Fault::perturbed_hessian;
  throw ValidationError("unknown fault '" + s + "' (none, zero-weight, perturbed-hessian)");
}

Report cmd_selftest(const RunOptions& opt, Fault fault) {
  Report r{"selftest", {}, {}, true};
  Table t{"selftest", {"check", "status", "detail"}, {}};
  auto record = [&](const std::string& name, bool ok, const std::string& detail) {
    r.ok = r.ok && ok;
    t.rows.push_back({name, ok ? "pass" : "FAIL", detail});
  };
  auto lbeta = [](double a, double b) { return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b); };

  if (fault == Fault::zero_weight) {
    // surfaces as the construction error
    MetricPotential broken(FacetPolytope::unit_interval(), std::vector<double>{0.0, 1.0});
    (void)broken;
  }

  {
    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> unif(-3, 3);
    double worst = 0;
    for (const auto& p : {FacetPolytope::unit_simplex(2), FacetPolytope::unit_cube(2), FacetPolytope::unit_cube(3)}) {
      const MetricPotential pot(p);
      const auto m = static_cast<Eigen::Index>(p.dim());
      for (int trial = 0; trial < 100; ++trial) {
        Eigen::VectorXd u(m);
        for (Eigen::Index i = 0; i < m; ++i) u[i] = unif(rng);
        auto jet = pot.jet(u);
        if (fault == Fault::perturbed_hessian) jet.hessian(0, 0) += 1e-3;
        const double h = 1e-5;
        for (Eigen::Index i = 0; i < m; ++i) {
          Eigen::VectorXd e = Eigen::VectorXd::Zero(m);
          e[i] = h;
          const double dg = (pot.value(u + e) - pot.value(u - e)) / (2 * h);
          const Eigen::VectorXd dh = (pot.moment(u + e) - pot.moment(u - e)) / (2 * h);
          worst = std::max(worst, std::abs(dg - jet.gradient[i]));
          worst = std::max(worst, (dh - jet.hessian.col(i)).cwiseAbs().maxCoeff());
        }
      }
    }
    record("gradient and Hessian against central differences", worst <= 1e-5, "max error " + fmt(worst));
  }

  {
    const MetricPotential pot(FacetPolytope::unit_interval());
    QuadratureSpec q;
    q.resolution = 128;
    q.threads = opt.threads;
    double worst = 0;
    for (auto [n, a] : {std::pair<std::int64_t, std::int64_t>{2, 1}, {9, 0}, {20, 10}}) {
      const double got = log_norm_sq(pot, Weight{a}, n, q);
      worst = std::max(worst, std::abs(std::expm1(got - lbeta(double(a + 1), double(n - a + 1)))));
    }
    record("P^1 norms against the Beta integral", worst <= 1e-8, "max relative error " + fmt(worst));
    const double defect = std::abs(normalization_defect(pot, Weight{25}, 50, q));
    record("probability normalization", defect <= 1e-8, "defect " + fmt(defect));
  }

  {
    double worst = 0;
    for (const auto& [p, vol] : {std::pair{FacetPolytope::unit_interval(), 1.0},
                                 std::pair{FacetPolytope::unit_simplex(2), 0.5}, std::pair{FacetPolytope::unit_cube(2), 1.0}}) {
      const MetricPotential pot(p);
      QuadratureSpec q;
      q.resolution = 256;
      q.threads = opt.threads;
      q.box.assign(p.dim(), {-60.0, 60.0});
      const double v = std::exp(log_integrate(q, [&](const Eigen::VectorXd& u) { return log_volume_density(pot, u); }));
      worst = std::max(worst, std::abs(v - vol));
    }
    record("moment-image volume equals Vol(P)", worst <= 1e-8, "max error " + fmt(worst));
  }

  {
    const MetricPotential pot(FacetPolytope::unit_simplex(2));
    const auto xi = RationalPoint::parse({"1/3", "1/4"});
    const auto ref = minimize(pot, xi);
    std::mt19937_64 rng(opt.seed + 1);
    std::uniform_real_distribution<double> unif(-10, 10);
    double worst = 0;
    for (int trial = 0; trial < 20; ++trial) {
      const Eigen::VectorXd start = Eigen::VectorXd::NullaryExpr(2, [&]() { return unif(rng); });
      worst = std::max(worst, (minimize(pot, xi, start).u_star - ref.u_star).cwiseAbs().maxCoeff());
    }
    record("Newton from random starts", worst <= 1e-8, "max spread " + fmt(worst));
  }

  {
    double worst = 0;
    for (double a : {0.0, 0.5, 1.0, 2.5})
      for (double s : {0.5, 3.0, 40.0})
        worst = std::max(worst, std::abs(term_transform_exact(a, 0, s) / (std::tgamma(a + 1) * std::pow(s, -(a + 1))) - 1));
    record("transform at j = 0 equals Gamma(a+1) t^-(a+1)", worst <= 1e-12, "max relative error " + fmt(worst));
    bool ok = true;
    for (double a : {0.0, 0.5, 1.0})
      for (int j : {0, 1, 2}) {
        const auto c = truncated_transform(a, j, 50, 1);
        ok = ok && std::abs(c.value - term_transform_exact(a, j, 50)) <= c.remainder + c.quadrature_error + 1e-15;
      }
    record("truncated transform within its certified remainder", ok, "t = 50, A = 1");
  }

  std::ostringstream s;
  s << "# Self test\n\n" << (r.ok ? "All checks passed." : "Some checks FAILED.") << "\n\n" << markdown(t);
  r.summary = s.str();
  r.tables = {std::move(t)};
  return r;
}

}  // namespace toriclab
