#ifndef TORICLAB_LAPLACE_HPP
#define TORICLAB_LAPLACE_HPP

#include <functional>
#include <optional>
#include <utility>
#include <vector>

namespace toriclab {

double digamma(double x);
double trigamma(double x);

/// Gamma(x) and its first two derivatives, order in {0, 1, 2}.
double gamma_derivative(double x, int order);

/// ∫_0^∞ e^{-ts} s^alpha (log s)^j ds for alpha > -1, t > 0, j <= 2.
///
/// Obtained by differentiating Gamma(alpha+1) t^{-(alpha+1)} j times in
/// alpha: t^{-(alpha+1)} Σ_i C(j,i) Gamma^(i)(alpha+1) (-log t)^(j-i).
double term_transform_exact(double alpha, int j, double t);

struct TruncatedTransform {
  /// ∫_0^A by quadrature
  double value = 0;
  /// estimated error of the quadrature itself
  double quadrature_error = 0;
  /// upper bound on |∫_A^∞|
  double remainder = 0;
};

/// The same integral cut at A. The remainder uses |log s| <= L max(1, s) on
/// [A, ∞) with L = max(|log A|, 1/e) and closes with upper incomplete gammas,
/// so it holds for every A; it is refused when tA < 1 since it is then useless.
TruncatedTransform truncated_transform(double alpha, int j, double t, double a_cut);

/// gamma · s^(alpha+nu) (log s)^j in the small-s expansion of a fibre density.
struct ExpansionTerm {
  double alpha = 0;
  int nu = 0;
  int j = 0;
  double gamma = 1;
};

struct ExpansionValue {
  double value = 0;
  /// size of the first omitted term; 0 when every term was used
  double truncation_error = 0;
  std::size_t terms_used = 0;
};

/// Partial sum of the induced expansion of ∫ e^{-ts} φ(s) ds over the first
/// `depth` terms. Terms must be sorted by alpha + nu.
ExpansionValue expansion_eval(const std::vector<ExpansionTerm>& terms, double t, std::size_t depth);

struct CutBound {
  double log_bound = 0;
  /// exp(log_bound) when it is a finite double
  std::optional<double> value;
};

/// C (n+1)! / t^(n+1), the bound on |∫_0^A e^{-ts} φ| when |φ(s)| <= C s^n.
CutBound cut_bound(double c, int npow, double t);

struct CutCheck {
  double integral = 0;
  CutBound bound;
  bool holds = true;
};

/// Quadrature of ∫_0^A e^{-ts} φ(s) ds against cut_bound, with a relative
/// slack of 1e-12 for the quadrature.
CutCheck cut_check(const std::function<double(double)>& phi, double c, int npow, double t, double a_cut);

/// A holomorphic curve through the origin whose integrands are invariant
/// under s -> e^{iθ} s, described by the moduli of its coordinates and of
/// their derivatives at |s| = r.
struct RadialCurve {
  std::function<std::vector<double>(double)> modulus;
  std::function<std::vector<double>(double)> speed;
};

/// s -> (s^e_1, ..., s^e_d)
RadialCurve monomial_curve(std::vector<int> exponents);

/// f as a function of the squared moduli |z_k|^2.
using RadialFunction = std::function<double(const std::vector<double>&)>;

struct CurveOptions {
  /// the cutoff is 1 for |z| <= radius/2 and 0 for |z| >= radius
  double radius = 1.0;
  /// f is replaced by scale · f; used for comparison bounds
  double scale = 1.0;
};

struct CurveLimit {
  /// limit of t^n F(t), extrapolated from the fit c + d1 t^{-1/2} + d2 t^{-1}
  double constant = 0;
  /// slope of log F against log t
  double exponent = 0;
  /// max |fit error| of the extrapolation, relative to the constant
  double residual = 0;
  bool converged = true;
  /// (t, t^n F(t))
  std::vector<std::pair<double, double>> samples;
};

/// F(t) = ∫_C e^{-t f} ρ dA over the curve with its induced area, reduced to
/// a radial integral: 2π ∫ e^{-t f(γ(r))} ρ(|γ(r)|) |γ'(r)|^2 r dr.
double curve_integral(const RadialCurve& curve, const RadialFunction& f, double t, const CurveOptions& opt = {});

/// Fits t^n F(t) over t_grid (at least 3 increasing values). converged is
/// false when the residual exceeds 1e-2.
CurveLimit curve_limit(const RadialCurve& curve, const RadialFunction& f, int n, const std::vector<double>& t_grid,
                       const CurveOptions& opt = {});

}  // namespace toriclab

#endif  // TORICLAB_LAPLACE_HPP
