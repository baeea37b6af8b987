#include "toriclab/laplace.hpp"

#include "toriclab/errors.hpp"

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace toriclab {

namespace {

constexpr double kPi = std::numbers::pi;

void require_positive(double x, const char* what) {
  if (!(x > 0) || !std::isfinite(x)) throw ValidationError(std::string(what) + " must be positive and finite");
}

void require_term(double alpha, int j) {
  if (!(alpha > -1) || !std::isfinite(alpha)) throw ValidationError("exponent must exceed -1");
  if (j < 0 || j > 2) throw ValidationError("log power must be 0, 1 or 2");
}

struct QuadResult {
  double value = 0;
  double error = 0;
};

// ∫_0^A fn with dyadic panels grown from 1/t, so the e^{-ts} scale is
// resolved whatever t is; the first panel takes the endpoint singularity.
QuadResult laplace_quadrature(const std::function<double(double)>& fn, double t, double a_cut) {
  using boost::math::quadrature::gauss_kronrod;
  QuadResult out;
  double lo = 0;
  double hi = std::min(a_cut, 1.0 / t);
  {
    boost::math::quadrature::tanh_sinh<double> ts;
    double err = 0;
    out.value += ts.integrate(fn, lo, hi, 1e-12, &err);
    out.error += err;
  }
  while (hi < a_cut) {
    lo = hi;
    hi = std::min(a_cut, 2 * hi);
    double err = 0;
    out.value += gauss_kronrod<double, 61>::integrate(fn, lo, hi, 8, 1e-12, &err);
    out.error += err * std::max(1.0, std::abs(out.value));
  }
  return out;
}

// ∫_A^∞ e^{-ts} s^b ds
double upper_gamma_tail(double b, double t, double a_cut) {
  return boost::math::tgamma(b + 1, t * a_cut) * std::pow(t, -(b + 1));
}

double smooth_step(double y) {
  if (y <= 0) return 0;
  if (y >= 1) return 1;
  const double a = std::exp(-1 / y);
  const double b = std::exp(-1 / (1 - y));
  return a / (a + b);
}

double cutoff(double norm, double radius) { return 1 - smooth_step(2 * norm / radius - 1); }

double norm_of(const std::vector<double>& z) {
  double s = 0;
  for (double v : z) s += v * v;
  return std::sqrt(s);
}

}  // namespace

double digamma(double x) {
  require_positive(x, "digamma argument");
  double acc = 0;
  while (x < 10) {
    acc -= 1 / x;
    x += 1;
  }
  const double x2 = 1 / (x * x);
  const double series =
      x2 * (1.0 / 12 - x2 * (1.0 / 120 - x2 * (1.0 / 252 - x2 * (1.0 / 240 - x2 * (1.0 / 132 - x2 * 691.0 / 32760)))));
  return acc + std::log(x) - 0.5 / x - series;
}

double trigamma(double x) {
  require_positive(x, "trigamma argument");
  double acc = 0;
  while (x < 10) {
    acc += 1 / (x * x);
    x += 1;
  }
  const double x2 = 1 / (x * x);
  const double series =
      x2 * (1.0 / 6 - x2 * (1.0 / 30 - x2 * (1.0 / 42 - x2 * (1.0 / 30 - x2 * (5.0 / 66 - x2 * (691.0 / 2730 - x2 * 7.0 / 6))))));
  return acc + 1 / x + 0.5 * x2 + series / x;
}

double gamma_derivative(double x, int order) {
  require_positive(x, "gamma argument");
  const double g = std::tgamma(x);
  switch (order) {
    case 0:
      return g;
    case 1:
      return g * digamma(x);
    case 2: {
      const double psi = digamma(x);
      return g * (psi * psi + trigamma(x));
    }
    default:
      throw ValidationError("gamma_derivative order must be 0, 1 or 2");
  }
}

double term_transform_exact(double alpha, int j, double t) {
  require_term(alpha, j);
  require_positive(t, "t");
  const double mlog = -std::log(t);
  static constexpr int binom[3][3] = {{1, 0, 0}, {1, 1, 0}, {1, 2, 1}};
  double sum = 0;
  for (int i = 0; i <= j; ++i) sum += binom[j][i] * gamma_derivative(alpha + 1, i) * std::pow(mlog, j - i);
  return sum * std::pow(t, -(alpha + 1));
}

TruncatedTransform truncated_transform(double alpha, int j, double t, double a_cut) {
  require_term(alpha, j);
  require_positive(t, "t");
  require_positive(a_cut, "cut point");
  if (t * a_cut < 1) throw ValidationError("tail bound needs t*A >= 1; widen A");
  auto fn = [&](double s) {
    if (s <= 0) return 0.0;
    const double ls = std::log(s);
    return std::exp(-t * s + alpha * ls) * (j == 0 ? 1.0 : std::pow(ls, j));
  };
  const auto q = laplace_quadrature(fn, t, a_cut);
  TruncatedTransform out;
  out.value = q.value;
  out.quadrature_error = q.error;
  if (j == 0) {
    out.remainder = upper_gamma_tail(alpha, t, a_cut);
  } else {
    const double ell = std::max(std::abs(std::log(a_cut)), 1 / std::numbers::e);
    out.remainder =
        std::pow(ell, j) * (upper_gamma_tail(alpha, t, a_cut) + upper_gamma_tail(alpha + j, t, a_cut));
  }
  return out;
}

ExpansionValue expansion_eval(const std::vector<ExpansionTerm>& terms, double t, std::size_t depth) {
  if (!(t > 1)) throw ValidationError("expansion needs t > 1");
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const auto& term = terms[i];
    if (term.nu < 0) throw ValidationError("nu must be nonnegative");
    require_term(term.alpha + term.nu, term.j);
    if (i > 0 && terms[i - 1].alpha + terms[i - 1].nu > term.alpha + term.nu)
      throw ValidationError("expansion terms must be sorted by alpha + nu");
  }
  ExpansionValue out;
  out.terms_used = std::min(depth, terms.size());
  auto contribution = [&](const ExpansionTerm& term) {
    return term.gamma * term_transform_exact(term.alpha + term.nu, term.j, t);
  };
  for (std::size_t i = 0; i < out.terms_used; ++i) out.value += contribution(terms[i]);
  if (out.terms_used < terms.size()) out.truncation_error = std::abs(contribution(terms[out.terms_used]));
  return out;
}

CutBound cut_bound(double c, int npow, double t) {
  if (!(c >= 0) || !std::isfinite(c)) throw ValidationError("bound constant must be nonnegative");
  if (npow < 0) throw ValidationError("power must be nonnegative");
  require_positive(t, "t");
  CutBound out;
  if (c == 0) {
    out.log_bound = -std::numeric_limits<double>::infinity();
    out.value = 0.0;
    return out;
  }
  const double k = static_cast<double>(npow) + 1;
  out.log_bound = std::log(c) + std::lgamma(k + 1) - k * std::log(t);
  if (out.log_bound < std::log(std::numeric_limits<double>::max())) out.value = std::exp(out.log_bound);
  return out;
}

CutCheck cut_check(const std::function<double(double)>& phi, double c, int npow, double t, double a_cut) {
  require_positive(a_cut, "cut point");
  CutCheck out;
  out.bound = cut_bound(c, npow, t);
  out.integral = laplace_quadrature([&](double s) { return std::exp(-t * s) * phi(s); }, t, a_cut).value;
  // the bound is attained for phi = C, so allow for the quadrature rounding
  out.holds = std::log(std::abs(out.integral)) <= out.bound.log_bound + 1e-12;
  return out;
}

RadialCurve monomial_curve(std::vector<int> exponents) {
  for (int e : exponents)
    if (e < 1) throw ValidationError("monomial curve exponents must be positive");
  RadialCurve c;
  c.modulus = [exponents](double r) {
    std::vector<double> z;
    for (int e : exponents) z.push_back(std::pow(r, e));
    return z;
  };
  c.speed = [exponents](double r) {
    std::vector<double> z;
    for (int e : exponents) z.push_back(e * std::pow(r, e - 1));
    return z;
  };
  return c;
}

double curve_integral(const RadialCurve& curve, const RadialFunction& f, double t, const CurveOptions& opt) {
  require_positive(t, "t");
  require_positive(opt.radius, "cutoff radius");
  require_positive(opt.scale, "scale");
  // the support ends where |γ| first reaches the radius
  double r_cut = 1;
  while (norm_of(curve.modulus(r_cut)) < opt.radius) {
    r_cut *= 2;
    if (r_cut > 1e12) throw NumericError("curve stays inside the cutoff ball");
  }
  double inside = 0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (inside + r_cut);
    (norm_of(curve.modulus(mid)) < opt.radius ? inside : r_cut) = mid;
  }
  auto integrand = [&](double r) {
    const auto z = curve.modulus(r);
    const auto dz = curve.speed(r);
    std::vector<double> sq(z.size());
    double jac = 0;
    for (std::size_t k = 0; k < z.size(); ++k) {
      sq[k] = z[k] * z[k];
      jac += dz[k] * dz[k];
    }
    return 2 * kPi * std::exp(-t * opt.scale * f(sq)) * cutoff(norm_of(z), opt.radius) * jac * r;
  };
  using boost::math::quadrature::gauss_kronrod;
  // dyadic panels towards the origin; one pass of GK61 on each, then the
  // panels whose error estimate matters against the total are refined
  constexpr int kPanels = 60;
  double coarse_total = 0;
  std::vector<double> piece(kPanels), err(kPanels);
  for (int k = 0; k < kPanels; ++k) {
    const double hi = std::ldexp(r_cut, -k);
    piece[k] = gauss_kronrod<double, 61>::integrate(integrand, hi / 2, hi, 0, 0, &err[k]);
    coarse_total += piece[k];
  }
  double total = 0;
  for (int k = kPanels - 1; k >= 0; --k) {
    const double hi = std::ldexp(r_cut, -k);
    if (err[k] > 1e-14 * std::abs(coarse_total))
      piece[k] = gauss_kronrod<double, 61>::integrate(integrand, hi / 2, hi, 8, 1e-12);
    total += piece[k];
  }
  return total;
}

CurveLimit curve_limit(const RadialCurve& curve, const RadialFunction& f, int n, const std::vector<double>& t_grid,
                       const CurveOptions& opt) {
  if (t_grid.size() < 3) throw ValidationError("curve_limit needs at least 3 values of t");
  for (std::size_t i = 1; i < t_grid.size(); ++i)
    if (!(t_grid[i] > t_grid[i - 1])) throw ValidationError("t grid must be increasing");
  const auto rows = static_cast<Eigen::Index>(t_grid.size());
  Eigen::MatrixXd basis(rows, 3);
  Eigen::VectorXd scaled(rows);
  Eigen::MatrixXd loglog(rows, 2);
  Eigen::VectorXd logf(rows);
  CurveLimit out;
  for (Eigen::Index i = 0; i < rows; ++i) {
    const double t = t_grid[static_cast<std::size_t>(i)];
    const double value = curve_integral(curve, f, t, opt);
    if (!(value > 0)) throw NumericError("curve integral is not positive");
    scaled[i] = std::pow(t, n) * value;
    basis.row(i) << 1, 1 / std::sqrt(t), 1 / t;
    loglog.row(i) << 1, std::log(t);
    logf[i] = std::log(value);
    out.samples.emplace_back(t, scaled[i]);
  }
  const Eigen::VectorXd coef = basis.colPivHouseholderQr().solve(scaled);
  out.constant = coef[0];
  out.exponent = loglog.colPivHouseholderQr().solve(logf)[1];
  out.residual = (basis * coef - scaled).cwiseAbs().maxCoeff() / std::abs(out.constant);
  out.converged = out.residual <= 1e-2;
  return out;
}

}  // namespace toriclab
