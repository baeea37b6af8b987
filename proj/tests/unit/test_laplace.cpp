#include <doctest.h>

#include "toriclab/errors.hpp"
#include "toriclab/laplace.hpp"

#include <Eigen/Dense>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/trigamma.hpp>

#include <cmath>
#include <numbers>
#include <random>

using namespace toriclab;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEuler = std::numbers::egamma;

// ∫_0^∞ e^{-ts} s^a (log s)^j ds by double-exponential quadrature
double exp_sinh_transform(double a, int j, double t) {
  boost::math::quadrature::exp_sinh<double> integrator;
  auto fn = [&](double s) {
    if (s <= 0) return 0.0;
    return std::exp(-t * s) * std::pow(s, a) * std::pow(std::log(s), j);
  };
  return integrator.integrate(fn, 0.0, std::numeric_limits<double>::infinity(), 1e-13);
}

double squared_norm(const std::vector<double>& sq) {
  double s = 0;
  for (double v : sq) s += v;
  return s;
}

}  // namespace

TEST_CASE("digamma and trigamma against boost") {
  for (double x : {1e-3, 0.1, 0.5, 1.0, 1.5, 2.75, 9.99, 10.0, 37.0, 1e4}) {
    CHECK(digamma(x) == doctest::Approx(boost::math::digamma(x)).epsilon(1e-13));
    CHECK(trigamma(x) == doctest::Approx(boost::math::trigamma(x)).epsilon(1e-13));
  }
  CHECK_THROWS_AS(digamma(0), ValidationError);
  CHECK_THROWS_AS(trigamma(-1), ValidationError);
}

TEST_CASE("gamma_derivative") {
  CHECK(gamma_derivative(1, 0) == doctest::Approx(1.0));
  CHECK(gamma_derivative(1, 1) == doctest::Approx(-kEuler).epsilon(1e-13));
  CHECK(gamma_derivative(0.5, 0) == doctest::Approx(std::sqrt(kPi)).epsilon(1e-14));
  // Gamma''(1) = gamma^2 + pi^2/6
  CHECK(gamma_derivative(1, 2) == doctest::Approx(kEuler * kEuler + kPi * kPi / 6).epsilon(1e-13));
  // central differences of lgamma
  for (double x : {0.7, 1.3, 4.2}) {
    const double h = 1e-5;
    const double dlog = (std::lgamma(x + h) - std::lgamma(x - h)) / (2 * h);
    CHECK(gamma_derivative(x, 1) / gamma_derivative(x, 0) == doctest::Approx(dlog).epsilon(1e-9));
  }
  CHECK_THROWS_AS(gamma_derivative(0, 0), ValidationError);
  CHECK_THROWS_AS(gamma_derivative(1, 3), ValidationError);
}

TEST_CASE("term_transform_exact") {
  CHECK(term_transform_exact(0, 0, 2) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(term_transform_exact(1, 0, 3) == doctest::Approx(1.0 / 9).epsilon(1e-15));
  const double e = std::numbers::e;
  CHECK(term_transform_exact(0, 1, e) == doctest::Approx(-(kEuler + 1) / e).epsilon(1e-13));
  CHECK(std::abs(term_transform_exact(0, 1, e) - exp_sinh_transform(0, 1, e)) < 1e-8);
  for (double a : {0.0, 0.5, 1.0, 2.5}) {
    for (double t : {0.3, 2.0, 50.0}) {
      CHECK(term_transform_exact(a, 0, t) == doctest::Approx(std::tgamma(a + 1) * std::pow(t, -(a + 1))).epsilon(1e-12));
      for (int j : {1, 2}) {
        CHECK(term_transform_exact(a, j, t) == doctest::Approx(exp_sinh_transform(a, j, t)).epsilon(1e-9));
      }
    }
  }
  CHECK_THROWS_AS(term_transform_exact(-1, 0, 1), ValidationError);
  CHECK_THROWS_AS(term_transform_exact(0, 3, 1), ValidationError);
  CHECK_THROWS_AS(term_transform_exact(0, 0, 0), ValidationError);
}

TEST_CASE("log-polynomial structure of the transform") {
  // t^(a+1) (-1)^j T(a, j, t) is a degree j polynomial in log t with leading
  // coefficient Gamma(a+1)
  for (double a : {0.0, 0.5, 1.0}) {
    for (int j : {1, 2}) {
      const int samples = j + 3;
      Eigen::MatrixXd v(samples, j + 1);
      Eigen::VectorXd y(samples);
      for (int i = 0; i < samples; ++i) {
        const double t = 2.0 + 7.0 * i;
        const double l = std::log(t);
        for (int k = 0; k <= j; ++k) v(i, k) = std::pow(l, k);
        y[i] = std::pow(t, a + 1) * (j % 2 ? -1 : 1) * term_transform_exact(a, j, t);
      }
      const Eigen::VectorXd c = v.colPivHouseholderQr().solve(y);
      CHECK((v * c - y).cwiseAbs().maxCoeff() < 1e-10);
      CHECK(c[j] == doctest::Approx(std::tgamma(a + 1)).epsilon(1e-10));
    }
  }
}

TEST_CASE("truncated_transform") {
  const auto r = truncated_transform(0.5, 1, 50, 1);
  CHECK(std::abs(r.value - term_transform_exact(0.5, 1, 50)) <= r.remainder + r.quadrature_error + 1e-15);
  // (1 - e^{-tA}) / t
  for (double a_cut : {0.1, 0.5, 2.0}) {
    const auto z = truncated_transform(0, 0, 10, a_cut);
    CHECK(z.value == doctest::Approx(-std::expm1(-10 * a_cut) / 10).epsilon(1e-12));
    CHECK(z.remainder == doctest::Approx(std::exp(-10 * a_cut) / 10).epsilon(1e-12));
  }
  for (double a : {0.0, 0.5, 1.0}) {
    for (int j : {0, 1, 2}) {
      double last = std::numeric_limits<double>::infinity();
      for (double a_cut : {0.2, 0.4, 0.8, 1.6}) {
        const auto q = truncated_transform(a, j, 200, a_cut);
        CHECK(q.remainder <= last);
        last = q.remainder;
        const double gap = std::abs(q.value - term_transform_exact(a, j, 200));
        CHECK(gap <= q.remainder + q.quadrature_error + 1e-15);
      }
    }
  }
  CHECK_THROWS_AS(truncated_transform(0, 0, 1, 0.5), ValidationError);
}

TEST_CASE("expansion_eval") {
  CHECK(expansion_eval({}, 5, 3).value == 0.0);
  // φ(s) = s^{1/2} on (0, 1]
  const double t = 200;
  const double f = truncated_transform(0.5, 0, t, 1).value;
  const auto lead = expansion_eval({{0.5, 0, 0, 1.0}}, t, 1);
  CHECK(std::abs(f / lead.value - 1) < 1e-3);
  // φ(s) = s log s + s^2 on (0, 1]: two terms, the second one omitted at depth 1
  const double g = truncated_transform(1, 1, t, 1).value + truncated_transform(2, 0, t, 1).value;
  const std::vector<ExpansionTerm> terms{{1, 0, 1, 1.0}, {1, 1, 0, 1.0}};
  const auto one = expansion_eval(terms, t, 1);
  const auto two = expansion_eval(terms, t, 2);
  CHECK(one.truncation_error == doctest::Approx(2.0 / (t * t * t)));
  CHECK(std::abs(g - one.value) <= 1.01 * one.truncation_error);
  CHECK(two.value == doctest::Approx(g).epsilon(1e-10));
  CHECK(two.truncation_error == 0.0);
  CHECK_THROWS_AS(expansion_eval({{2, 0, 0, 1}, {1, 0, 0, 1}}, t, 2), ValidationError);
  CHECK_THROWS_AS(expansion_eval(terms, 1, 1), ValidationError);
}

TEST_CASE("cut_bound") {
  CHECK(cut_bound(1, 2, 10).value.value() == doctest::Approx(0.006));
  const auto check = cut_check([](double s) { return s * s; }, 1, 2, 10, 1);
  CHECK(check.holds);
  CHECK(check.integral <= 0.002);
  CHECK(cut_bound(0, 4, 3).value.value() == 0.0);
  double last = std::numeric_limits<double>::infinity();
  for (double t : {1.0, 3.0, 10.0, 100.0, 1e4}) {
    const double b = cut_bound(2, 3, t).value.value();
    CHECK(b < last);
    last = b;
  }
  // 300! overflows, the bound survives as a log
  const auto big = cut_bound(1, 300, 2);
  CHECK_FALSE(big.value.has_value());
  CHECK(big.log_bound == doctest::Approx(std::lgamma(302.0) - 301 * std::log(2.0)));
}

TEST_CASE("cut_bound dominates a randomized family") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> uc(0.1, 5), uw(0.5, 40), ut(1, 300);
  std::uniform_int_distribution<int> un(0, 6);
  for (int trial = 0; trial < 60; ++trial) {
    const double c = uc(rng), w = uw(rng), t = ut(rng);
    const int npow = un(rng);
    auto phi = [&](double s) { return c * std::pow(s, npow) * (1 + std::sin(w * s) * std::sin(w * s)) / 2; };
    CHECK(cut_check(phi, c, npow, t, 2.0).holds);
  }
}

TEST_CASE("curve limits") {
  const std::vector<double> grid{200, 300, 450, 650, 1000};
  RadialFunction f = squared_norm;
  const auto line = curve_limit(monomial_curve({1, 1}), f, 1, grid);
  // the line s -> (s, s) has |γ'|^2 = 2 and f = 2|s|^2: still π
  CHECK(line.constant == doctest::Approx(kPi).epsilon(1e-6));
  const RadialCurve flat{[](double r) { return std::vector<double>{r, 0}; },
                         [](double) { return std::vector<double>{1, 0}; }};
  const auto axis = curve_limit(flat, f, 1, grid);
  CHECK(axis.constant == doctest::Approx(kPi).epsilon(1e-6));
  CHECK(axis.samples.back().second == doctest::Approx(kPi).epsilon(1e-6));
  CHECK(std::abs(axis.exponent + 1) < 0.03);

  const auto cusp = curve_limit(monomial_curve({2, 3}), f, 1, grid);
  CHECK(cusp.converged);
  CHECK(std::abs(cusp.exponent + 1) < 0.03);
  CHECK(cusp.constant == doctest::Approx(2 * kPi).epsilon(1e-2));
  // π ∫ e^{-t(x^2+x^3)} (4x + 9x^2) dx with x = |s|^2
  for (double t : {200.0, 1000.0}) {
    boost::math::quadrature::exp_sinh<double> integrator;
    const double want = kPi * integrator.integrate(
                                  [&](double x) { return std::exp(-t * (x * x + x * x * x)) * (4 * x + 9 * x * x); },
                                  0.0, std::numeric_limits<double>::infinity(), 1e-13);
    CHECK(curve_integral(monomial_curve({2, 3}), f, t) == doctest::Approx(want).epsilon(1e-9));
  }
}

TEST_CASE("curve limit does not depend on the cutoff radius") {
  const std::vector<double> grid{200, 300, 450, 650, 1000};
  RadialFunction f = squared_norm;
  for (const auto& curve : {monomial_curve({1}), monomial_curve({2, 3})}) {
    const double base = curve_limit(curve, f, 1, grid, {1.0, 1.0}).constant;
    CHECK(curve_limit(curve, f, 1, grid, {2.0, 1.0}).constant == doctest::Approx(base).epsilon(1e-6));
    CHECK(curve_limit(curve, f, 1, grid, {0.8, 1.0}).constant == doctest::Approx(base).epsilon(1e-6));
  }
}

TEST_CASE("Morse comparison scales the limit") {
  const std::vector<double> grid{200, 300, 450, 650, 1000};
  RadialFunction f = squared_norm;
  for (const auto& curve : {monomial_curve({1}), monomial_curve({2, 3})}) {
    const double base = curve_limit(curve, f, 1, grid).constant;
    for (double eps : {0.1, 0.25}) {
      const double lower = curve_limit(curve, f, 1, grid, {1.0, 1 + eps}).constant;
      const double upper = curve_limit(curve, f, 1, grid, {1.0, 1 - eps}).constant;
      CHECK(lower == doctest::Approx(base / (1 + eps)).epsilon(1e-3));
      CHECK(upper == doctest::Approx(base / (1 - eps)).epsilon(1e-3));
    }
  }
  CHECK_THROWS_AS(curve_limit(monomial_curve({1}), f, 1, {100, 50, 300}), ValidationError);
}
