#ifndef TORICLAB_POTENTIAL_HPP
#define TORICLAB_POTENTIAL_HPP

#include "toriclab/lattice.hpp"
#include "toriclab/polytope.hpp"
#include "toriclab/rays.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

namespace toriclab {

/// g(u) = log sum_i c_i exp(<beta_i, u>) in logarithmic coordinates
/// u_j = log|t_j|^2 on the open orbit.
///
/// The points must contain every vertex of P and lie in P, so that the
/// gradient image is int P. Weights are stored as logarithms.
class MetricPotential {
 public:
  /// All lattice points of P with unit weights (the standard metric).
  explicit MetricPotential(const FacetPolytope& p);
  /// Weights given per lattice point of P, in lattice_points(1) order.
  MetricPotential(const FacetPolytope& p, const std::vector<double>& weights);
  MetricPotential(const FacetPolytope& p, std::vector<Weight> points, const std::vector<double>& weights);

  /// Potential on R^k with no polytope attached; used for face restrictions.
  static MetricPotential from_points(std::vector<Weight> points, std::vector<double> log_weights);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(points_.rows()); }
  std::size_t size() const noexcept { return lattice_.size(); }
  const std::vector<Weight>& points() const noexcept { return lattice_; }
  const Eigen::VectorXd& log_weights() const noexcept { return log_weights_; }
  /// Points as the columns of a dim x size matrix.
  const Eigen::MatrixXd& point_matrix() const noexcept { return points_; }
  /// Null for face restrictions.
  const FacetPolytope* polytope() const noexcept { return polytope_.get(); }

  double value(const Eigen::VectorXd& u) const;
  Eigen::VectorXd moment(const Eigen::VectorXd& u) const;
  Eigen::MatrixXd covariance(const Eigen::VectorXd& u) const;

  struct Jet {
    double value = 0;
    Eigen::VectorXd gradient;
    Eigen::MatrixXd hessian;
  };
  /// Value, gradient and Hessian from one pass over the points.
  Jet jet(const Eigen::VectorXd& u) const;

  /// Multiplies every c_i by exp(log_factor).
  MetricPotential rescaled(double log_factor) const;

 private:
  MetricPotential() = default;
  void init_points(std::vector<Weight> points, Eigen::VectorXd log_weights);
  // softmax probabilities of <beta_i, u> + log c_i and the log normaliser
  double softmax(const Eigen::VectorXd& u, Eigen::VectorXd& p) const;

  std::shared_ptr<const FacetPolytope> polytope_;
  std::vector<Weight> lattice_;
  Eigen::MatrixXd points_;
  Eigen::VectorXd log_weights_;
};

double g_eval(const MetricPotential& pot, const Eigen::VectorXd& u);
Eigen::VectorXd moment(const MetricPotential& pot, const Eigen::VectorXd& u);
Eigen::MatrixXd covariance(const MetricPotential& pot, const Eigen::VectorXd& u);

/// f_N(u) = g(u) - <alpha_N, u>/N, so that |s_N|^2_h = exp(-N f_N).
double f_N_eval(const MetricPotential& pot, const Weight& alpha, std::int64_t n, const Eigen::VectorXd& u);

struct MinimizerReport {
  /// Minimizer; face-lattice coordinates when produced by face_minimize on a
  /// proper face (empty for a vertex).
  Eigen::VectorXd u_star;
  double f_min = 0;
  double gradient_norm = 0;
  double hessian_condition = 1;
  double min_eigenvalue = 0;
  int iterations = 0;
};

struct NewtonOptions {
  double tolerance = 1e-10;
  int max_iterations = 500;
  double armijo = 1e-4;
  double shrink = 0.5;
};

/// Minimizes g(u) - <target, u> by damped Newton from `start`. No checks on
/// target; used directly for face potentials.
MinimizerReport newton_minimize(const MetricPotential& pot, const Eigen::VectorXd& target, Eigen::VectorXd start,
                                const NewtonOptions& opt = {});

/// Interior xi only; the minimizer is the moment-map preimage of xi.
/// Throws ValidationError for xi on the boundary (see face_minimize).
MinimizerReport minimize(const MetricPotential& pot, const RationalPoint& xi, const NewtonOptions& opt = {});
MinimizerReport minimize(const MetricPotential& pot, const RationalPoint& xi, const Eigen::VectorXd& start,
                         const NewtonOptions& opt = {});

/// The potential restricted to the face F through xi, in face-lattice
/// coordinates: beta = base + basis * y for the points beta in F.
struct FaceRestriction {
  Face face;
  Weight base;
  /// m x k, columns are the face lattice basis.
  Eigen::MatrixXd basis;
  /// Sum of the active facet normals; -s * normal_direction goes to the boundary.
  Eigen::VectorXd normal_direction;
  /// xi = base + basis * target.
  Eigen::VectorXd target;
  std::optional<MetricPotential> potential;  // empty for vertices
  double vertex_log_weight = 0;
};

FaceRestriction restrict_to_face(const MetricPotential& pot, const RationalPoint& xi);

/// inf over R^m of g(u) - <xi, u>, computed on the face through xi. For a
/// vertex this is log c of the vertex term.
MinimizerReport face_minimize(const MetricPotential& pot, const RationalPoint& xi, const NewtonOptions& opt = {});

/// f(u) = g(u) - <xi, u> - f_min, the limit of f_N - f_min along sequences
/// with alpha_N - N xi bounded.
class LimitFunction {
 public:
  LimitFunction(MetricPotential pot, RationalPoint xi);

  const MetricPotential& potential() const noexcept { return pot_; }
  const RationalPoint& xi() const noexcept { return xi_; }
  double f_min() const noexcept { return report_.f_min; }
  const MinimizerReport& report() const noexcept { return report_; }
  bool interior() const noexcept { return interior_; }
  /// Present when xi is on the boundary.
  const std::optional<FaceRestriction>& face() const noexcept { return face_; }

  double operator()(const Eigen::VectorXd& u) const;

  /// Bound on |f_N(u) - f(u) - f_min| for ||alpha_N - N xi||_inf <= bound.
  static double certified_error(std::int64_t bound, std::int64_t n, const Eigen::VectorXd& u);

  /// A point where f is within ~exp(-s) of 0: the minimizer for interior xi,
  /// otherwise a lift of the face minimizer pushed by s along -normal_direction.
  Eigen::VectorXd approach_point(double s) const;

 private:
  MetricPotential pot_;
  RationalPoint xi_;
  Eigen::VectorXd xi_d_;
  bool interior_ = true;
  MinimizerReport report_;
  std::optional<FaceRestriction> face_;
};

LimitFunction f_limit(const MetricPotential& pot, const RationalPoint& xi);

struct LocalizationReport {
  bool ok = true;
  /// Smallest f_N - f_min found outside the neighbourhood.
  double min_outside = 0;
  std::optional<Eigen::VectorXd> witness;
  std::size_t points_checked = 0;
};

/// Grid check of f_N - f_min > epsilon on [-box, box]^m outside a
/// neighbourhood of the minimum set: tangential coordinates within `radius`
/// (sup norm) of the face minimizer, and |z_j| = exp(<u, v_j>/2) <= radius for
/// each active facet j. For interior xi this is a sup-norm ball around u*.
LocalizationReport localization_check(const MetricPotential& pot, const SectionSequence& seq, std::int64_t n,
                                      double epsilon, double box, double radius, std::size_t points_per_axis = 0);

}  // namespace toriclab

#endif  // TORICLAB_POTENTIAL_HPP
