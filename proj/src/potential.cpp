#include "toriclab/potential.hpp"

#include "exact_linalg.hpp"
#include "toriclab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>

namespace toriclab {

namespace {

Eigen::VectorXd to_eigen(const RationalPoint& xi) {
  const auto d = xi.to_doubles();
  return Eigen::Map<const Eigen::VectorXd>(d.data(), static_cast<Eigen::Index>(d.size()));
}

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

void require_dim(const MetricPotential& pot, const Eigen::VectorXd& u) {
  if (static_cast<std::size_t>(u.size()) != pot.dim()) {
    throw ValidationError("point has dimension " + std::to_string(u.size()) + ", potential has " +
                          std::to_string(pot.dim()));
  }
}

const FacetPolytope& require_polytope(const MetricPotential& pot) {
  if (pot.polytope() == nullptr) throw ValidationError("potential has no polytope attached");
  return *pot.polytope();
}

}  // namespace

MetricPotential::MetricPotential(const FacetPolytope& p)
    : MetricPotential(p, std::vector<double>(p.lattice_points(1).size(), 1.0)) {}

MetricPotential::MetricPotential(const FacetPolytope& p, const std::vector<double>& weights)
    : MetricPotential(p, p.lattice_points(1), weights) {}

MetricPotential::MetricPotential(const FacetPolytope& p, std::vector<Weight> points, const std::vector<double>& weights) {
  if (points.size() != weights.size()) {
    throw ValidationError("got " + std::to_string(weights.size()) + " weights for " + std::to_string(points.size()) +
                          " points");
  }
  Eigen::VectorXd lw(static_cast<Eigen::Index>(weights.size()));
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (!(weights[i] > 0) || !std::isfinite(weights[i])) {
      throw ValidationError("metric weight c_" + std::to_string(i) + " = " + std::to_string(weights[i]) +
                            " must be positive and finite");
    }
    lw[static_cast<Eigen::Index>(i)] = std::log(weights[i]);
  }
  for (const auto& b : points) {
    if (b.dim() != p.dim() || !p.contains(b, 1)) {
      throw ValidationError("potential point " + to_string(b) + " is not a lattice point of P");
    }
  }
  for (const auto& v : p.vertices()) {
    const bool listed = v.is_integral() && std::find(points.begin(), points.end(), v.to_weight()) != points.end();
    if (!listed) {
      throw ValidationError("vertex " + to_string(v) +
                            " of P is missing from the potential points; the points must span P");
    }
  }
  polytope_ = std::make_shared<const FacetPolytope>(p);
  init_points(std::move(points), std::move(lw));
}

MetricPotential MetricPotential::from_points(std::vector<Weight> points, std::vector<double> log_weights) {
  if (points.empty() || points.size() != log_weights.size()) throw ValidationError("bad point/weight lists");
  MetricPotential pot;
  Eigen::VectorXd lw = Eigen::Map<const Eigen::VectorXd>(log_weights.data(), static_cast<Eigen::Index>(log_weights.size()));
  pot.init_points(std::move(points), std::move(lw));
  return pot;
}

void MetricPotential::init_points(std::vector<Weight> points, Eigen::VectorXd log_weights) {
  std::set<Weight> seen(points.begin(), points.end());
  if (seen.size() != points.size()) throw ValidationError("potential points must be distinct");
  const std::size_t m = points.front().dim();
  points_.resize(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].dim() != m) throw ValidationError("potential points have mixed dimensions");
    for (std::size_t r = 0; r < m; ++r) {
      points_(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(i)) = static_cast<double>(points[i][r]);
    }
  }
  lattice_ = std::move(points);
  log_weights_ = std::move(log_weights);
}

double MetricPotential::softmax(const Eigen::VectorXd& u, Eigen::VectorXd& p) const {
  require_dim(*this, u);
  p.noalias() = points_.transpose() * u;
  p += log_weights_;
  const double top = p.maxCoeff();
  p = (p.array() - top).exp();
  const double s = p.sum();
  p /= s;
  return top + std::log(s);
}

double MetricPotential::value(const Eigen::VectorXd& u) const {
  Eigen::VectorXd p;
  return softmax(u, p);
}

Eigen::VectorXd MetricPotential::moment(const Eigen::VectorXd& u) const {
  Eigen::VectorXd p;
  softmax(u, p);
  return points_ * p;
}

Eigen::MatrixXd MetricPotential::covariance(const Eigen::VectorXd& u) const { return jet(u).hessian; }

MetricPotential::Jet MetricPotential::jet(const Eigen::VectorXd& u) const {
  Jet j;
  Eigen::VectorXd p;
  j.value = softmax(u, p);
  j.gradient = points_ * p;
  // centred second moment is better conditioned than E[bb^T] - mean mean^T
  const Eigen::MatrixXd centred = points_.colwise() - j.gradient;
  j.hessian = centred * p.asDiagonal() * centred.transpose();
  return j;
}

MetricPotential MetricPotential::rescaled(double log_factor) const {
  MetricPotential out = *this;
  out.log_weights_.array() += log_factor;
  return out;
}

double g_eval(const MetricPotential& pot, const Eigen::VectorXd& u) { return pot.value(u); }
Eigen::VectorXd moment(const MetricPotential& pot, const Eigen::VectorXd& u) { return pot.moment(u); }
Eigen::MatrixXd covariance(const MetricPotential& pot, const Eigen::VectorXd& u) { return pot.covariance(u); }

double f_N_eval(const MetricPotential& pot, const Weight& alpha, std::int64_t n, const Eigen::VectorXd& u) {
  if (n < 1) throw ValidationError("N must be at least 1");
  if (alpha.dim() != pot.dim()) throw ValidationError("weight has the wrong dimension");
  double lin = 0;
  for (std::size_t i = 0; i < alpha.dim(); ++i) lin += static_cast<double>(alpha[i]) * u[static_cast<Eigen::Index>(i)];
  return pot.value(u) - lin / static_cast<double>(n);
}

MinimizerReport newton_minimize(const MetricPotential& pot, const Eigen::VectorXd& target, Eigen::VectorXd u,
                                const NewtonOptions& opt) {
  require_dim(pot, u);
  auto objective = [&](const Eigen::VectorXd& x) { return pot.value(x) - target.dot(x); };
  MinimizerReport rep;
  auto jet = pot.jet(u);
  double phi = jet.value - target.dot(u);
  Eigen::VectorXd grad = jet.gradient - target;
  int it = 0;
  for (; grad.norm() > opt.tolerance; ++it) {
    if (it >= opt.max_iterations) {
      throw NonConvergence("Newton did not reach |grad| <= " + std::to_string(opt.tolerance) + " in " +
                               std::to_string(opt.max_iterations) + " iterations",
                           to_std(u), grad.norm());
    }
    Eigen::LDLT<Eigen::MatrixXd> ldlt(jet.hessian);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) {
      throw NumericError("Hessian of g is singular; the points do not affinely span the space");
    }
    const Eigen::VectorXd step = -ldlt.solve(grad);
    const double slope = grad.dot(step);
    double t = 1;
    Eigen::VectorXd next = u + step;
    double next_phi = objective(next);
    while (next_phi > phi + opt.armijo * t * slope && t > 1e-12) {
      t *= opt.shrink;
      next = u + t * step;
      next_phi = objective(next);
    }
    if (t <= 1e-12) {
      // phi is flat to rounding; accept a full step if it shrinks the gradient
      next = u + step;
      const auto trial = pot.jet(next);
      if ((trial.gradient - target).norm() >= grad.norm()) {
        throw NonConvergence("line search stalled", to_std(u), grad.norm());
      }
    }
    u = next;
    jet = pot.jet(u);
    phi = jet.value - target.dot(u);
    grad = jet.gradient - target;
  }
  rep.u_star = u;
  rep.f_min = phi;
  rep.gradient_norm = grad.norm();
  rep.iterations = it;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jet.hessian, Eigen::EigenvaluesOnly);
  rep.min_eigenvalue = eig.eigenvalues().minCoeff();
  rep.hessian_condition = eig.eigenvalues().maxCoeff() / rep.min_eigenvalue;
  return rep;
}

MinimizerReport minimize(const MetricPotential& pot, const RationalPoint& xi, const NewtonOptions& opt) {
  return minimize(pot, xi, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(pot.dim())), opt);
}

MinimizerReport minimize(const MetricPotential& pot, const RationalPoint& xi, const Eigen::VectorXd& start,
                         const NewtonOptions& opt) {
  const auto& p = require_polytope(pot);
  if (xi.dim() != p.dim()) throw ValidationError("xi has the wrong dimension");
  if (!p.contains(xi)) throw ValidationError("xi = " + to_string(xi) + " is outside P");
  if (!p.is_interior(xi)) {
    throw ValidationError("xi = " + to_string(xi) +
                          " lies on the boundary of P, where the moment equation has no solution; use face_minimize");
  }
  return newton_minimize(pot, to_eigen(xi), start, opt);
}

FaceRestriction restrict_to_face(const MetricPotential& pot, const RationalPoint& xi) {
  const auto& p = require_polytope(pot);
  if (xi.dim() != p.dim() || !p.contains(xi)) throw ValidationError("xi = " + to_string(xi) + " is outside P");
  FaceRestriction r;
  r.face = p.face_of(xi);
  const std::size_t m = p.dim();
  const std::size_t k = r.face.dim;

  r.normal_direction = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
  for (auto j : r.face.active) {
    for (std::size_t i = 0; i < m; ++i) {
      r.normal_direction[static_cast<Eigen::Index>(i)] += static_cast<double>(p.facets()[j].normal[i]);
    }
  }

  std::vector<std::size_t> on_face;
  for (std::size_t i = 0; i < pot.size(); ++i) {
    bool tight = true;
    for (auto j : r.face.active) {
      const auto& f = p.facets()[j];
      tight = tight && pair(pot.points()[i], f.normal) + f.offset == 0;
    }
    if (tight) on_face.push_back(i);
  }
  if (on_face.empty()) throw ValidationError("no potential point lies on the face of xi");
  r.base = pot.points()[on_face.front()];
  r.basis = Eigen::MatrixXd(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(k));
  detail::RationalMatrix bq(m, std::vector<Rational>(k));
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t i = 0; i < m; ++i) {
      bq[i][c] = r.face.lattice_basis[c][i];
      r.basis(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) =
          static_cast<double>(r.face.lattice_basis[c][i]);
    }
  }
  if (k == 0) {
    r.vertex_log_weight = pot.log_weights()[static_cast<Eigen::Index>(on_face.front())];
    r.target = Eigen::VectorXd(0);
    return r;
  }

  auto face_coords = [&](const std::vector<Rational>& rhs) {
    auto y = detail::solve_full_column_rank(bq, rhs);
    if (!y) throw NumericError("point is not in the affine span of its face");
    return *y;
  };
  std::vector<Weight> ys;
  std::vector<double> lws;
  for (auto i : on_face) {
    std::vector<Rational> rhs(m);
    for (std::size_t c = 0; c < m; ++c) rhs[c] = Rational(pot.points()[i][c] - r.base[c]);
    const auto y = face_coords(rhs);
    std::vector<std::int64_t> yi(k);
    for (std::size_t c = 0; c < k; ++c) {
      if (denominator(y[c]) != 1) throw NumericError("face lattice basis is not saturated");
      yi[c] = numerator(y[c]).convert_to<std::int64_t>();
    }
    ys.emplace_back(std::move(yi));
    lws.push_back(pot.log_weights()[static_cast<Eigen::Index>(i)]);
  }
  std::vector<Rational> rhs(m);
  for (std::size_t c = 0; c < m; ++c) rhs[c] = xi[c] - Rational(r.base[c]);
  const auto eta = face_coords(rhs);
  r.target = Eigen::VectorXd(static_cast<Eigen::Index>(k));
  for (std::size_t c = 0; c < k; ++c) r.target[static_cast<Eigen::Index>(c)] = to_double(eta[c]);
  r.potential = MetricPotential::from_points(std::move(ys), std::move(lws));
  return r;
}

MinimizerReport face_minimize(const MetricPotential& pot, const RationalPoint& xi, const NewtonOptions& opt) {
  const auto r = restrict_to_face(pot, xi);
  if (r.face.active.empty()) return minimize(pot, xi, opt);
  if (r.face.dim == 0) {
    MinimizerReport rep;
    rep.u_star = Eigen::VectorXd(0);
    rep.f_min = r.vertex_log_weight;
    return rep;
  }
  return newton_minimize(*r.potential, r.target, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(r.face.dim)), opt);
}

LimitFunction::LimitFunction(MetricPotential pot, RationalPoint xi) : pot_(std::move(pot)), xi_(std::move(xi)) {
  const auto& p = require_polytope(pot_);
  if (xi_.dim() != p.dim() || !p.contains(xi_)) throw ValidationError("xi = " + to_string(xi_) + " is outside P");
  xi_d_ = to_eigen(xi_);
  interior_ = p.is_interior(xi_);
  if (interior_) {
    report_ = minimize(pot_, xi_);
  } else {
    face_ = restrict_to_face(pot_, xi_);
    report_ = face_minimize(pot_, xi_);
  }
}

double LimitFunction::operator()(const Eigen::VectorXd& u) const { return pot_.value(u) - xi_d_.dot(u) - report_.f_min; }

double LimitFunction::certified_error(std::int64_t bound, std::int64_t n, const Eigen::VectorXd& u) {
  return static_cast<double>(bound) * u.lpNorm<1>() / static_cast<double>(n);
}

Eigen::VectorXd LimitFunction::approach_point(double s) const {
  if (interior_) return report_.u_star;
  const auto& f = *face_;
  Eigen::VectorXd u = -s * f.normal_direction;
  if (f.face.dim > 0) {
    const Eigen::MatrixXd gram = f.basis.transpose() * f.basis;
    u += f.basis * gram.ldlt().solve(report_.u_star);
  }
  return u;
}

LimitFunction f_limit(const MetricPotential& pot, const RationalPoint& xi) { return LimitFunction(pot, xi); }

LocalizationReport localization_check(const MetricPotential& pot, const SectionSequence& seq, std::int64_t n,
                                      double epsilon, double box, double radius, std::size_t points_per_axis) {
  const std::size_t m = pot.dim();
  if (seq.polytope().dim() != m) throw ValidationError("sequence and potential live in different dimensions");
  if (!(box > 0) || !(radius > 0)) throw ValidationError("box and radius must be positive");
  const LimitFunction f(pot, seq.xi());
  const Weight alpha = seq.alpha(n);

  if (points_per_axis == 0) {
    points_per_axis = std::max<std::size_t>(
        11, static_cast<std::size_t>(std::pow(2.0e5, 1.0 / static_cast<double>(m))));
    points_per_axis = std::min<std::size_t>(points_per_axis, 401);
  }

  // tangential coordinates and the normal monomials of the minimum set
  Eigen::MatrixXd tangent;
  Eigen::VectorXd tangent_star;
  std::vector<Eigen::VectorXd> normals;
  if (f.interior()) {
    tangent = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
    tangent_star = f.report().u_star;
  } else {
    const auto& face = *f.face();
    tangent = face.basis;
    tangent_star = f.report().u_star;
    const auto& p = *pot.polytope();
    for (auto j : face.face.active) {
      Eigen::VectorXd v(static_cast<Eigen::Index>(m));
      for (std::size_t i = 0; i < m; ++i) v[static_cast<Eigen::Index>(i)] = static_cast<double>(p.facets()[j].normal[i]);
      normals.push_back(std::move(v));
    }
  }
  const double log_radius = 2 * std::log(radius);
  auto in_neighbourhood = [&](const Eigen::VectorXd& u) {
    if (tangent.cols() > 0 && (tangent.transpose() * u - tangent_star).lpNorm<Eigen::Infinity>() > radius) {
      return false;
    }
    for (const auto& v : normals) {
      if (v.dot(u) > log_radius) return false;
    }
    return true;
  };

  LocalizationReport rep;
  rep.min_outside = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> idx(m, 0);
  Eigen::VectorXd u(static_cast<Eigen::Index>(m));
  const double h = 2 * box / static_cast<double>(points_per_axis - 1);
  while (true) {
    for (std::size_t i = 0; i < m; ++i) u[static_cast<Eigen::Index>(i)] = -box + h * static_cast<double>(idx[i]);
    if (!in_neighbourhood(u)) {
      ++rep.points_checked;
      const double val = f_N_eval(pot, alpha, n, u) - f.f_min();
      if (val < rep.min_outside) {
        rep.min_outside = val;
        if (val <= epsilon) rep.witness = u;
      }
    }
    std::size_t i = 0;
    while (i < m && ++idx[i] == points_per_axis) idx[i++] = 0;
    if (i == m) break;
  }
  rep.ok = rep.min_outside > epsilon;
  return rep;
}

}  // namespace toriclab
