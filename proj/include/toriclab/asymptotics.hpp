#ifndef TORICLAB_ASYMPTOTICS_HPP
#define TORICLAB_ASYMPTOTICS_HPP

#include "toriclab/potential.hpp"
#include "toriclab/rays.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

namespace toriclab {

/// Tensor composite Gauss-Legendre rule on a box in u-coordinates.
///
/// resolution is the number of nodes per axis; it is rounded up to a
/// multiple of the 16-point panel. An empty box is fitted automatically.
/// With `centre` and `scale` set, axis i is written u = centre_i +
/// scale_i sinh(tau) and the panels are uniform in tau, which concentrates
/// nodes at the peak and stretches them along exponential tails.
struct QuadratureSpec {
  std::vector<std::pair<double, double>> box;
  std::size_t resolution = 64;
  std::vector<double> centre;
  std::vector<double> scale;
  unsigned threads = 1;
  /// Estimated mass outside the box relative to the integral; filled in by
  /// norm_report.
  double tail_margin = 0;
};

/// log det Hess g(u); -inf when the Hessian is singular.
double log_volume_density(const MetricPotential& pot, const Eigen::VectorXd& u);

/// Returns `quad` with a box suited to exp(<alpha,u> - N g(u)) det Hess g(u):
/// every face of the box sits at least 40 below the peak of the log
/// integrand. A user box is checked instead (faces at least 25 below the
/// peak) and BoxTooSmall carries the fitted box when it fails.
QuadratureSpec prepare_quadrature(const MetricPotential& pot, const Weight& alpha, std::int64_t n,
                                  const QuadratureSpec& quad);

/// log of the integral of exp(log_integrand) over the box, reduced in a
/// fixed node order whatever the thread count.
double log_integrate(const QuadratureSpec& quad, const std::function<double(const Eigen::VectorXd&)>& log_integrand);

struct NormReport {
  double log_norm_sq = 0;
  double tail_margin = 0;
  /// log of the peak value of the integrand.
  double log_peak = 0;
  QuadratureSpec quad;
};

/// log ∫ exp(-N f_N(u)) det Hess g(u) du; the angular factor (2π)^m is left out.
NormReport norm_report(const MetricPotential& pot, const Weight& alpha, std::int64_t n, const QuadratureSpec& quad);
double log_norm_sq(const MetricPotential& pot, const SectionSequence& seq, std::int64_t n, const QuadratureSpec& quad);
double log_norm_sq(const MetricPotential& pot, const Weight& alpha, std::int64_t n, const QuadratureSpec& quad);

/// log |phi_N|^2 at u, the density of |s_N|^2 relative to the probability
/// measure det Hess g du / Vol(P).
double log_density_point(const MetricPotential& pot, const SectionSequence& seq, std::int64_t n,
                         const QuadratureSpec& quad, const Eigen::VectorXd& u);
double log_density_point(const MetricPotential& pot, const Weight& alpha, std::int64_t n, const QuadratureSpec& quad,
                         const Eigen::VectorXd& u);

/// log ∫ |phi_N|^2 dλ evaluated with twice the resolution of the rule that
/// produced the normalising constant; should be 0.
double normalization_defect(const MetricPotential& pot, const Weight& alpha, std::int64_t n, const QuadratureSpec& quad);

/// log of the largest value of |phi_N|^2.
double log_max_density(const MetricPotential& pot, const Weight& alpha, std::int64_t n, const QuadratureSpec& quad);

/// D_N(t): probability measure of {|phi_N|^2 > t}.
///
/// The superlevel set is convex in u, so it is integrated slice by slice:
/// each slice interval comes from a convex minimisation and two root
/// solves, and the density is integrated over it adaptively.
double tail_volume(const MetricPotential& pot, const SectionSequence& seq, std::int64_t n, const QuadratureSpec& quad,
                   double t);
double tail_volume(const MetricPotential& pot, const Weight& alpha, std::int64_t n, const QuadratureSpec& quad,
                   double t);

/// Logarithmic grid of `count` values over [lo, max density].
std::vector<double> tail_grid(const MetricPotential& pot, const Weight& alpha, std::int64_t n,
                              const QuadratureSpec& quad, std::size_t count, double lo = 1e-3);

using MomentTestFunction = std::function<double(const Eigen::VectorXd&)>;

/// ∫ fn(moment(u)) |phi_N|^2 dλ.
double weak_convergence_test(const MetricPotential& pot, const SectionSequence& seq, std::int64_t n,
                             const QuadratureSpec& quad, const MomentTestFunction& fn);
double weak_convergence_test(const MetricPotential& pot, const Weight& alpha, std::int64_t n,
                             const QuadratureSpec& quad, const MomentTestFunction& fn);

struct TameComparison {
  double d_sequence = 0;
  double d_tame = 0;
  /// d_sequence <= d_tame + tolerance
  bool holds = true;
};

TameComparison compare_tame(const MetricPotential& pot, const SectionSequence& seq, const SectionSequence& tame_seq,
                            std::int64_t n, const QuadratureSpec& quad, double t, double tolerance = 1e-8);

struct AsymptoticFit {
  double exponent = 0;
  double log_constant = 0;
  /// max |fit error| in the regression variables
  double residual = 0;
  std::int64_t n_first = 0;
  std::int64_t n_last = 0;
  std::size_t samples = 0;
};

/// Least squares of log value against log N.
AsymptoticFit fit_power_law(const std::vector<std::pair<std::int64_t, double>>& samples);
/// Least squares of log value against log(log N / N).
AsymptoticFit fit_log_law(const std::vector<std::pair<std::int64_t, double>>& samples);

/// ∫_0^∞ r^(2a+1) (1 + r^2)^(-N) dr: the norm of z_0^(N-a) z_1^a on P^1 in the
/// affine chart with Euclidean area, by adaptive quadrature.
double euclidean_chart_integral(std::int64_t a, std::int64_t n);

}  // namespace toriclab

#endif  // TORICLAB_ASYMPTOTICS_HPP
