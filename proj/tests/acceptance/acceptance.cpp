// Acceptance suite: one line per criterion.
//
// Criterion 5 is known to fail (the offset rule on P^1 has a larger tail
// than the tame rule for large t); it is reported as FAIL and does not
// change the exit status unless it unexpectedly passes. Criterion 9 lists
// what is out of reach numerically.

#include "toriclab/asymptotics.hpp"
#include "toriclab/errors.hpp"
#include "toriclab/laplace.hpp"
#include "toriclab/potential.hpp"
#include "toriclab/rays.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>

using namespace toriclab;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Config {
  std::string name;
  FacetPolytope p;
  RationalPoint xi;
};

RationalPoint rp(std::initializer_list<const char*> c) { return RationalPoint::parse({c.begin(), c.end()}); }

std::vector<Config> fit_configs(bool with_simplex_interior) {
  std::vector<Config> out{{"interval interior", FacetPolytope::unit_interval(), rp({"1/2"})},
                          {"interval vertex", FacetPolytope::unit_interval(), rp({"0"})},
                          {"simplex edge", FacetPolytope::unit_simplex(2), rp({"1/2", "0"})}};
  if (with_simplex_interior) out.push_back({"simplex interior", FacetPolytope::unit_simplex(2), rp({"1/3", "1/3"})});
  return out;
}

QuadratureSpec res(std::size_t r) {
  QuadratureSpec q;
  q.resolution = r;
  return q;
}

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

double log_beta(double a, double b) { return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b); }

Outcome golden_norms() {
  const MetricPotential pot(FacetPolytope::unit_interval());
  double worst = 0;
  for (auto [n, a] : {std::pair<std::int64_t, std::int64_t>{2, 1}, {9, 0}, {20, 10}}) {
    const double got = log_norm_sq(pot, Weight{a}, n, res(128));
    worst = std::max(worst, std::abs(std::expm1(got - log_beta(double(a + 1), double(n - a + 1)))));
  }
  double chart = 0;
  for (std::int64_t n = 3; n <= 10; ++n) {
    const double nn = static_cast<double>(n);
    chart = std::max(chart, std::abs(euclidean_chart_integral(0, n) * 2 * (nn - 1) - 1));
    chart = std::max(chart, std::abs(euclidean_chart_integral(1, n) * 2 * (nn - 1) * (nn - 2) - 1));
  }
  return {worst <= 1e-8 && chart <= 1e-8, "Beta rel err " + num(worst) + ", chart integrals rel err " + num(chart)};
}

Outcome norm_exponents() {
  const std::vector<std::int64_t> ladder{50, 100, 200, 400, 800};
  std::ostringstream s;
  bool ok = true;
  const std::vector<double> tolerance{0.05, 0.02, 0.05, 0.05};
  const auto configs = fit_configs(true);
  for (std::size_t c = 0; c < configs.size(); ++c) {
    const auto& cfg = configs[c];
    const MetricPotential pot(cfg.p);
    const auto seq = SectionSequence::tame(cfg.p, cfg.xi);
    std::vector<std::pair<std::int64_t, double>> samples;
    for (auto n : ladder) {
      const auto alpha = seq.alpha(n);
      const double fmin = face_minimize(pot, RationalPoint(alpha) * Rational(1, n)).f_min;
      samples.emplace_back(n, log_norm_sq(pot, alpha, n, res(256)) + static_cast<double>(n) * fmin);
    }
    const double want = -to_double(cfg.p.kappa(cfg.xi));
    const double got = fit_power_law(samples).exponent;
    ok = ok && std::abs(got - want) <= tolerance[c];
    s << cfg.name << " " << num(got) << " (want " << num(want) << "); ";
  }
  return {ok, s.str()};
}

Outcome tail_law() {
  const std::vector<std::int64_t> ladder{25, 50, 100, 200, 400, 800};
  std::ostringstream s;
  bool ok = true;
  for (const auto& cfg : fit_configs(false)) {
    const MetricPotential pot(cfg.p);
    const auto seq = SectionSequence::tame(cfg.p, cfg.xi);
    std::vector<std::pair<std::int64_t, double>> samples;
    for (auto n : ladder) samples.emplace_back(n, std::log(tail_volume(pot, seq, n, res(128), 1.0)));
    const double want = to_double(cfg.p.kappa(cfg.xi));
    const double got = fit_log_law(samples).exponent;
    ok = ok && std::abs(got - want) <= 0.15;
    s << cfg.name << " " << num(got) << " (want " << num(want) << "); ";
  }
  return {ok, s.str()};
}

Outcome dirac_convergence() {
  const std::vector<std::int64_t> ladder{25, 50, 100, 200, 400, 800};
  bool ok = true;
  double worst_last = 0;
  std::string broken;
  for (const auto& cfg : fit_configs(false)) {
    const MetricPotential pot(cfg.p);
    const auto seq = SectionSequence::tame(cfg.p, cfg.xi);
    const auto xi = cfg.xi.to_doubles();
    std::vector<std::pair<std::string, std::pair<MomentTestFunction, double>>> probes;
    for (std::size_t i = 0; i < xi.size(); ++i) {
      const auto k = static_cast<Eigen::Index>(i);
      probes.push_back({"p", {[k](const Eigen::VectorXd& p) { return p[k]; }, xi[i]}});
      probes.push_back({"p^2", {[k](const Eigen::VectorXd& p) { return p[k] * p[k]; }, xi[i] * xi[i]}});
      probes.push_back({"(p-xi)^2", {[k, x = xi[i]](const Eigen::VectorXd& p) { return (p[k] - x) * (p[k] - x); }, 0.0}});
    }
    for (const auto& [name, probe] : probes) {
      double last = std::numeric_limits<double>::infinity();
      for (auto n : ladder) {
        const double gap = std::abs(weak_convergence_test(pot, seq, n, res(128), probe.first) - probe.second);
        // gaps that vanish by symmetry only carry rounding noise
        if (!(gap < last) && gap > 1e-12) {
          ok = false;
          broken = cfg.name + " " + name;
        }
        last = gap;
      }
      worst_last = std::max(worst_last, last);
    }
  }
  ok = ok && worst_last < 0.02;
  const MetricPotential pot(FacetPolytope::unit_interval());
  double exact = 0;
  for (std::int64_t n : {25, 100, 400, 800}) {
    const double v = weak_convergence_test(pot, Weight{0}, n, res(256), [](const Eigen::VectorXd& p) { return p[0]; });
    exact = std::max(exact, std::abs(v * static_cast<double>(n + 2) - 1));
  }
  ok = ok && exact <= 1e-8;
  return {ok, "largest gap at N=800 " + num(worst_last) + ", vertex 1/(N+2) rel err " + num(exact) +
                  (broken.empty() ? "" : ", not monotone: " + broken)};
}

Outcome tame_comparison() {
  const auto p = FacetPolytope::unit_interval();
  const MetricPotential pot(p);
  const auto xi = rp({"0"});
  const auto tame = SectionSequence::tame(p, xi);
  std::ostringstream s;
  bool ok = true;
  for (const auto& [name, seq] : {std::pair{"offset", SectionSequence::offset(p, xi, {Weight{1}})},
                                  std::pair{"alternating", SectionSequence::offset(p, xi, {Weight{1}, Weight{0}})}}) {
    std::size_t total = 0, bad = 0;
    double worst = 0;
    for (std::int64_t n : {25, 50, 100, 200, 400}) {
      for (double t : tail_grid(pot, seq.alpha(n), n, res(128), 8)) {
        const auto c = compare_tame(pot, seq, tame, n, res(128), t, 1e-8);
        ++total;
        if (!c.holds) {
          ++bad;
          worst = std::max(worst, c.d_sequence - c.d_tame);
        }
      }
    }
    ok = ok && bad == 0;
    s << name << ": " << bad << "/" << total << " grid points violate, largest excess " << num(worst) << "; ";
  }
  return {ok, s.str()};
}

Outcome localization() {
  bool ok = true;
  double margin = std::numeric_limits<double>::infinity();
  for (const auto& cfg : fit_configs(true)) {
    const MetricPotential pot(cfg.p);
    const auto seq = SectionSequence::tame(cfg.p, cfg.xi);
    for (std::int64_t n : {50, 100, 200, 400, 800}) {
      const auto r = localization_check(pot, seq, n, 0.01, 10, 0.5);
      ok = ok && r.ok;
      margin = std::min(margin, r.min_outside);
    }
  }
  return {ok, "smallest f_N - f_min outside the neighbourhood " + num(margin)};
}

Outcome property_suite() {
  std::ostringstream s;
  bool ok = true;
  double vol = 0;
  for (const auto& [p, want] : {std::pair{FacetPolytope::unit_interval(), 1.0}, std::pair{FacetPolytope::unit_simplex(2), 0.5},
                                std::pair{FacetPolytope::unit_cube(2), 1.0}}) {
    const MetricPotential pot(p);
    auto q = res(256);
    q.box.assign(p.dim(), {-60.0, 60.0});
    vol = std::max(vol, std::abs(std::exp(log_integrate(q, [&](const Eigen::VectorXd& u) { return log_volume_density(pot, u); })) - want));
  }
  ok = ok && vol <= 1e-8;
  s << "volume " << num(vol);

  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> unif(-3, 3);
  double fd = 0;
  for (const auto& p : {FacetPolytope::unit_simplex(2), FacetPolytope::unit_cube(2), FacetPolytope::unit_cube(3)}) {
    const MetricPotential pot(p);
    const auto m = static_cast<Eigen::Index>(p.dim());
    for (int trial = 0; trial < 100; ++trial) {
      const Eigen::VectorXd u = Eigen::VectorXd::NullaryExpr(m, [&]() { return unif(rng); });
      const auto jet = pot.jet(u);
      for (Eigen::Index i = 0; i < m; ++i) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(m);
        e[i] = 1e-5;
        fd = std::max(fd, std::abs((pot.value(u + e) - pot.value(u - e)) / 2e-5 - jet.gradient[i]));
        fd = std::max(fd, ((pot.moment(u + e) - pot.moment(u - e)) / 2e-5 - jet.hessian.col(i)).cwiseAbs().maxCoeff());
      }
    }
  }
  ok = ok && fd <= 1e-5;
  s << ", finite differences " << num(fd);

  double spread = 0;
  std::uniform_real_distribution<double> wide(-10, 10);
  for (const auto& [p, xi] : {std::pair{FacetPolytope::unit_simplex(2), rp({"1/3", "1/4"})},
                              std::pair{FacetPolytope::unit_cube(2), rp({"1/3", "2/3"})}}) {
    const MetricPotential pot(p);
    const auto ref = minimize(pot, xi).u_star;
    for (int trial = 0; trial < 20; ++trial) {
      const Eigen::VectorXd start = Eigen::VectorXd::NullaryExpr(2, [&]() { return wide(rng); });
      spread = std::max(spread, (minimize(pot, xi, start).u_star - ref).cwiseAbs().maxCoeff());
    }
  }
  ok = ok && spread <= 1e-8;
  s << ", Newton spread " << num(spread);

  double defect = 0;
  const MetricPotential interval(FacetPolytope::unit_interval());
  const MetricPotential simplex(FacetPolytope::unit_simplex(2));
  defect = std::max(defect, std::abs(normalization_defect(interval, Weight{25}, 50, res(128))));
  defect = std::max(defect, std::abs(normalization_defect(interval, Weight{0}, 50, res(128))));
  defect = std::max(defect, std::abs(normalization_defect(simplex, Weight{50, 0}, 100, res(128))));
  ok = ok && defect <= 1e-8;
  s << ", normalization " << num(defect);

  double refine = 0;
  for (const auto& cfg : fit_configs(true)) {
    const MetricPotential pot(cfg.p);
    const auto alpha = SectionSequence::tame(cfg.p, cfg.xi).alpha(200);
    refine = std::max(refine, std::abs(log_norm_sq(pot, alpha, 200, res(128)) - log_norm_sq(pot, alpha, 200, res(256))));
  }
  ok = ok && refine <= 1e-6;
  s << ", refinement " << num(refine);
  return {ok, s.str()};
}

Outcome laplace_oracle() {
  bool ok = true;
  std::ostringstream s;
  std::size_t agree = 0, total = 0;
  for (double a : {0.0, 0.5, 1.0})
    for (int j : {0, 1, 2})
      for (double t : {10.0, 50.0, 200.0}) {
        const auto cut = truncated_transform(a, j, t, 3.0);
        ++total;
        if (std::abs(cut.value - term_transform_exact(a, j, t)) <= cut.remainder + cut.quadrature_error + 1e-15) ++agree;
      }
  ok = ok && agree == total;
  s << "transforms " << agree << "/" << total;

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> uc(0.1, 5), uw(0.5, 40), ut(1, 300);
  std::uniform_int_distribution<int> un(0, 6);
  std::size_t dominated = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const double c = uc(rng), w = uw(rng), t = ut(rng);
    const int npow = un(rng);
    auto phi = [&](double x) { return c * std::pow(x, npow) * (1 + std::sin(w * x) * std::sin(w * x)) / 2; };
    if (cut_check(phi, c, npow, t, 2.0).holds) ++dominated;
  }
  ok = ok && dominated == 100;
  s << ", cut bound " << dominated << "/100";

  double poly = 0;
  for (double a : {0.0, 0.5, 1.0})
    for (int j : {1, 2}) {
      const int rows = j + 3;
      Eigen::MatrixXd v(rows, j + 1);
      Eigen::VectorXd y(rows);
      for (int i = 0; i < rows; ++i) {
        const double t = 2.0 + 7.0 * i;
        for (int k = 0; k <= j; ++k) v(i, k) = std::pow(std::log(t), k);
        y[i] = std::pow(t, a + 1) * (j % 2 ? -1 : 1) * term_transform_exact(a, j, t);
      }
      const Eigen::VectorXd coef = v.colPivHouseholderQr().solve(y);
      poly = std::max(poly, (v * coef - y).cwiseAbs().maxCoeff());
      poly = std::max(poly, std::abs(coef[j] / std::tgamma(a + 1) - 1));
    }
  ok = ok && poly <= 1e-9;
  s << ", log-polynomial " << num(poly);

  RadialFunction sq = [](const std::vector<double>& z) { return z[0] + (z.size() > 1 ? z[1] : 0.0); };
  const std::vector<double> grid{200, 300, 450, 650, 1000};
  const auto line = curve_limit(monomial_curve({1}), sq, 1, grid);
  const auto cusp = curve_limit(monomial_curve({2, 3}), sq, 1, grid);
  const double pi = std::numbers::pi;
  const double line_err = std::abs(line.constant / pi - 1);
  const double cusp_err = std::abs(cusp.constant / (2 * pi) - 1);
  ok = ok && line_err <= 0.01 && cusp_err <= 0.01 && std::abs(line.exponent + 1) <= 0.03 &&
       std::abs(cusp.exponent + 1) <= 0.03;
  s << ", line " << num(line.constant) << " cusp " << num(cusp.constant) << " (raw tF(1000) "
    << num(cusp.samples.back().second) << ")";
  return {ok, s.str()};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* title;
    std::function<Outcome()> run;
    double budget_s;
  };
  const std::vector<Criterion> criteria{
      {1, "P^1 golden norms", golden_norms, 1},
      {2, "norm-law exponents", norm_exponents, 120},
      {3, "tail-law slopes", tail_law, 600},
      {4, "Dirac convergence", dirac_convergence, 600},
      {5, "tame comparison", tame_comparison, 600},
      {6, "localization", localization, 600},
      {7, "property suite", property_suite, 600},
      {8, "Laplace oracle", laplace_oracle, 30},
  };
  const std::set<int> known_infeasible{5};
  bool all_ok = true;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs <= c.budget_s;
    const bool pass = o.pass && in_time;
    std::string note;
    if (!in_time) note = " [over time budget " + num(c.budget_s) + " s]";
    if (known_infeasible.count(c.id)) {
      note += pass ? " [expected to fail; investigate]" : " [known infeasible, see decisions ledger]";
      if (pass) all_ok = false;
    } else if (!pass) {
      all_ok = false;
    }
    std::printf("criterion %d %s  %s: %s (%.2f s)%s\n", c.id, pass ? "PASS" : "FAIL", c.title, o.detail.c_str(), secs,
                note.c_str());
    std::fflush(stdout);
  }
  std::printf(
      "criterion 9 EXCLUDED  not testable at desk scale: the deformation-retract topology, sharpness of the exponents "
      "present in the expansion, and the universal scaled distribution\n");
  return all_ok ? 0 : 1;
}
