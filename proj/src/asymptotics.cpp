#include "toriclab/asymptotics.hpp"

#include "toriclab/errors.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <thread>

namespace toriclab {

namespace {

constexpr std::size_t kPanel = 16;
constexpr double kFitMargin = 40;   // auto-fitted faces sit this far below the peak
constexpr double kUserMargin = 25;  // accepted margin for a user supplied box
constexpr double kMeasureHalfWidth = 48;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct AxisRule {
  std::vector<double> x;
  std::vector<double> log_w;
};

AxisRule axis_rule(double lo, double hi, std::size_t resolution, double centre, double scale) {
  using GL = boost::math::quadrature::gauss<double, kPanel>;
  const auto& abs = GL::abscissa();
  const auto& wts = GL::weights();
  const bool mapped = scale > 0;
  // tau range of the box under u = centre + scale sinh(tau)
  const double a = mapped ? std::asinh((lo - centre) / scale) : lo;
  const double b = mapped ? std::asinh((hi - centre) / scale) : hi;
  const std::size_t panels = (resolution + kPanel - 1) / kPanel;
  const double h = (b - a) / static_cast<double>(panels);
  AxisRule r;
  auto push = [&](double tau, double w) {
    if (mapped) {
      r.x.push_back(centre + scale * std::sinh(tau));
      r.log_w.push_back(std::log(w * scale * std::cosh(tau)));
    } else {
      r.x.push_back(tau);
      r.log_w.push_back(std::log(w));
    }
  };
  for (std::size_t p = 0; p < panels; ++p) {
    const double mid = a + (static_cast<double>(p) + 0.5) * h;
    // abscissae come as the non-negative half of a symmetric rule
    for (std::size_t i = abs.size(); i-- > 0;) push(mid - 0.5 * h * abs[i], 0.5 * h * wts[i]);
    for (std::size_t i = 0; i < abs.size(); ++i) push(mid + 0.5 * h * abs[i], 0.5 * h * wts[i]);
  }
  return r;
}

// Calls visit(index, u, log_weight) for every node, split over threads by
// contiguous index ranges. visit must only write to slot `index`.
template <class Visit>
void for_each_node(const QuadratureSpec& quad, Visit&& visit) {
  const std::size_t m = quad.box.size();
  std::vector<AxisRule> rules;
  const bool mapped = quad.centre.size() == m && quad.scale.size() == m;
  for (std::size_t i = 0; i < m; ++i) {
    const auto [lo, hi] = quad.box[i];
    rules.push_back(mapped ? axis_rule(lo, hi, quad.resolution, quad.centre[i], quad.scale[i])
                           : axis_rule(lo, hi, quad.resolution, 0, 0));
  }
  const std::size_t per_axis = rules.front().x.size();
  std::size_t total = 1;
  for (std::size_t i = 0; i < m; ++i) total *= per_axis;

  auto run = [&](std::size_t begin, std::size_t end) {
    Eigen::VectorXd u(static_cast<Eigen::Index>(m));
    for (std::size_t idx = begin; idx < end; ++idx) {
      std::size_t rest = idx;
      double lw = 0;
      for (std::size_t i = m; i-- > 0;) {
        const std::size_t k = rest % per_axis;
        rest /= per_axis;
        u[static_cast<Eigen::Index>(i)] = rules[i].x[k];
        lw += rules[i].log_w[k];
      }
      visit(idx, u, lw);
    }
  };
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(quad.threads, total));
  if (workers == 1) {
    run(0, total);
    return;
  }
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back(run, total * w / workers, total * (w + 1) / workers);
  }
  for (auto& t : pool) t.join();
}

std::size_t node_count(const QuadratureSpec& quad) {
  const std::size_t per_axis = (quad.resolution + kPanel - 1) / kPanel * kPanel;
  std::size_t total = 1;
  for (std::size_t i = 0; i < quad.box.size(); ++i) total *= per_axis;
  return total;
}

double log_sum_exp(const std::vector<double>& v) {
  double top = kNegInf;
  for (double x : v) top = std::max(top, x);
  if (top == kNegInf) return kNegInf;
  double s = 0;
  for (double x : v) s += std::exp(x - top);
  return top + std::log(s);
}

Eigen::VectorXd to_eigen(const Weight& w) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(w.dim()));
  for (std::size_t i = 0; i < w.dim(); ++i) v[static_cast<Eigen::Index>(i)] = static_cast<double>(w[i]);
  return v;
}

// log of the integrand exp(<alpha,u> - N g(u)) det Hess g(u)
struct LogIntegrand {
  const MetricPotential* pot;
  Eigen::VectorXd alpha;
  double n;

  double operator()(const Eigen::VectorXd& u) const {
    const auto jet = pot->jet(u);
    return alpha.dot(u) - n * jet.value + log_det(jet.hessian);
  }

  static double log_det(const Eigen::MatrixXd& h) {
    Eigen::LDLT<Eigen::MatrixXd> ldlt(h);
    if (ldlt.info() != Eigen::Success) return kNegInf;
    double s = 0;
    for (Eigen::Index i = 0; i < h.rows(); ++i) {
      const double d = ldlt.vectorD()[i];
      if (!(d > 0)) return kNegInf;
      s += std::log(d);
    }
    return s;
  }
};

void require_alpha(const MetricPotential& pot, const Weight& alpha, std::int64_t n) {
  if (n < 1) throw ValidationError("N must be at least 1");
  if (pot.polytope() == nullptr) throw ValidationError("potential has no polytope attached");
  if (alpha.dim() != pot.dim()) throw ValidationError("weight has the wrong dimension");
  if (!pot.polytope()->contains(alpha, n)) {
    throw ValidationError("weight " + to_string(alpha) + " is not in " + std::to_string(n) + "·P");
  }
}

// The section's own limit problem: inf of g - <alpha/N, u>.
LimitFunction section_limit(const MetricPotential& pot, const Weight& alpha, std::int64_t n) {
  return LimitFunction(pot, RationalPoint(alpha) * Rational(1, n));
}

struct BoxFit {
  std::vector<std::pair<double, double>> box;
  Eigen::VectorXd peak;
  double log_peak = 0;
  double log_edge_mass = kNegInf;
  double worst_face_gap = std::numeric_limits<double>::infinity();
  /// per-axis width of the peak, used as the sinh-map scale
  std::vector<double> scale;
};

std::vector<double> peak_scale(const MetricPotential& pot, const Eigen::VectorXd& peak, std::int64_t n) {
  const Eigen::MatrixXd hess = pot.covariance(peak);
  const Eigen::MatrixXd inv = hess.ldlt().solve(Eigen::MatrixXd::Identity(hess.rows(), hess.cols()));
  std::vector<double> s;
  for (Eigen::Index i = 0; i < hess.rows(); ++i) {
    const double sd = std::sqrt(inv(i, i) / static_cast<double>(n));
    s.push_back(std::isfinite(sd) ? std::clamp(sd, 0.01, 1.0) : 1.0);
  }
  return s;
}

Eigen::VectorXd locate_peak(const MetricPotential& pot, const LogIntegrand& L, const Weight& alpha, std::int64_t n) {
  const auto lim = section_limit(pot, alpha, n);
  Eigen::VectorXd u = lim.approach_point(std::log(static_cast<double>(n)));
  // coordinate sweeps; L is close to concave near its peak
  for (int sweep = 0; sweep < 4; ++sweep) {
    for (Eigen::Index i = 0; i < u.size(); ++i) {
      const double c = u[i];
      auto neg = [&](double x) {
        Eigen::VectorXd v = u;
        v[i] = x;
        return -L(v);
      };
      boost::uintmax_t iters = 200;
      const auto r = boost::math::tools::brent_find_minima(neg, c - 12.0, c + 12.0, 40, iters);
      u[i] = r.first;
    }
  }
  return u;
}

// Max of L over a grid on each face; fills gaps relative to the peak.
void measure_faces(const LogIntegrand& L, BoxFit& fit, std::vector<double>& face_max) {
  const std::size_t m = fit.box.size();
  const std::size_t g = m <= 2 ? 33 : (m == 3 ? 17 : 9);
  face_max.assign(2 * m, kNegInf);
  Eigen::VectorXd u(static_cast<Eigen::Index>(m));
  for (std::size_t axis = 0; axis < m; ++axis) {
    for (int side = 0; side < 2; ++side) {
      std::vector<std::size_t> idx(m, 0);
      double best = kNegInf;
      while (true) {
        for (std::size_t i = 0; i < m; ++i) {
          const auto [lo, hi] = fit.box[i];
          u[static_cast<Eigen::Index>(i)] =
              i == axis ? (side == 0 ? lo : hi) : lo + (hi - lo) * static_cast<double>(idx[i]) / static_cast<double>(g - 1);
        }
        best = std::max(best, L(u));
        std::size_t i = 0;
        while (i < m && (i == axis || ++idx[i] == g)) {
          if (i != axis) idx[i] = 0;
          ++i;
        }
        if (i == m) break;
      }
      face_max[2 * axis + static_cast<std::size_t>(side)] = best;
    }
  }
  fit.log_peak = std::max(fit.log_peak, *std::max_element(face_max.begin(), face_max.end()));
  fit.worst_face_gap = std::numeric_limits<double>::infinity();
  std::vector<double> terms;
  for (std::size_t axis = 0; axis < m; ++axis) {
    double log_area = 0;
    for (std::size_t i = 0; i < m; ++i) {
      if (i != axis) log_area += std::log(fit.box[i].second - fit.box[i].first);
    }
    for (int side = 0; side < 2; ++side) {
      const double fm = face_max[2 * axis + static_cast<std::size_t>(side)];
      fit.worst_face_gap = std::min(fit.worst_face_gap, fit.log_peak - fm);
      // decay length at most 1 beyond the face
      terms.push_back(fm + log_area);
    }
  }
  fit.log_edge_mass = log_sum_exp(terms);
}

BoxFit fit_box(const MetricPotential& pot, const LogIntegrand& L, const Weight& alpha, std::int64_t n) {
  const std::size_t m = pot.dim();
  BoxFit fit;
  fit.peak = locate_peak(pot, L, alpha, n);
  fit.log_peak = L(fit.peak);
  fit.scale = peak_scale(pot, fit.peak, n);
  std::vector<double> below(m), above(m);
  for (std::size_t i = 0; i < m; ++i) below[i] = above[i] = std::max(8 * fit.scale[i], 0.25);
  std::vector<double> face_max;
  for (int iter = 0; iter < 80; ++iter) {
    fit.box.clear();
    for (std::size_t i = 0; i < m; ++i) {
      const double c = fit.peak[static_cast<Eigen::Index>(i)];
      fit.box.emplace_back(c - below[i], c + above[i]);
    }
    measure_faces(L, fit, face_max);
    bool grown = false;
    for (std::size_t i = 0; i < m; ++i) {
      if (face_max[2 * i] > fit.log_peak - kFitMargin) {
        below[i] = 1.6 * below[i] + 0.1;
        grown = true;
      }
      if (face_max[2 * i + 1] > fit.log_peak - kFitMargin) {
        above[i] = 1.6 * above[i] + 0.1;
        grown = true;
      }
    }
    if (!grown) return fit;
    if (*std::max_element(below.begin(), below.end()) > 1e3 || *std::max_element(above.begin(), above.end()) > 1e3) {
      break;
    }
  }
  throw NumericError("could not fit a quadrature box: the integrand does not decay");
}

struct Prepared {
  QuadratureSpec quad;
  BoxFit fit;
  LogIntegrand L;
};

Prepared prepare(const MetricPotential& pot, const Weight& alpha, std::int64_t n, const QuadratureSpec& quad) {
  require_alpha(pot, alpha, n);
  if (quad.resolution < kPanel) throw ValidationError("quadrature resolution must be at least 16 nodes per axis");
  Prepared p{quad, {}, LogIntegrand{&pot, to_eigen(alpha), static_cast<double>(n)}};
  p.quad.resolution = (quad.resolution + kPanel - 1) / kPanel * kPanel;
  p.quad.threads = std::max(1u, quad.threads);
  if (quad.box.empty()) {
    p.fit = fit_box(pot, p.L, alpha, n);
    p.quad.box = p.fit.box;
    if (p.quad.centre.empty()) {
      p.quad.centre.assign(p.fit.peak.data(), p.fit.peak.data() + p.fit.peak.size());
      p.quad.scale = p.fit.scale;
    }
    return p;
  }
  if (quad.box.size() != pot.dim()) throw ValidationError("quadrature box has the wrong dimension");
  for (const auto& [lo, hi] : quad.box) {
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) throw ValidationError("quadrature box is empty");
  }
  p.fit.box = quad.box;
  const auto peak = locate_peak(pot, p.L, alpha, n);
  p.fit.peak = peak;
  p.fit.log_peak = p.L(peak);
  if (p.quad.centre.empty()) {
    p.quad.scale = peak_scale(pot, peak, n);
    for (std::size_t i = 0; i < pot.dim(); ++i) {
      p.quad.centre.push_back(std::clamp(peak[static_cast<Eigen::Index>(i)], quad.box[i].first, quad.box[i].second));
    }
  }
  std::vector<double> face_max;
  measure_faces(p.L, p.fit, face_max);
  if (p.fit.worst_face_gap < kUserMargin) {
    const auto fitted = fit_box(pot, p.L, alpha, n);
    std::string msg = "quadrature box cuts off mass: a face is within " + std::to_string(p.fit.worst_face_gap) +
                      " of the log peak (need " + std::to_string(kUserMargin) + "); suggested box";
    for (const auto& [lo, hi] : fitted.box) msg += " [" + std::to_string(lo) + ", " + std::to_string(hi) + "]";
    throw BoxTooSmall(msg, fitted.box);
  }
  return p;
}

double integrate_prepared(const Prepared& p) {
  std::vector<double> vals(node_count(p.quad));
  for_each_node(p.quad, [&](std::size_t i, const Eigen::VectorXd& u, double lw) { vals[i] = p.L(u) + lw; });
  return log_sum_exp(vals);
}

double log_volume(const MetricPotential& pot) { return std::log(to_double(pot.polytope()->volume())); }

}  // namespace

double log_volume_density(const MetricPotential& pot, const Eigen::VectorXd& u) {
  return LogIntegrand::log_det(pot.covariance(u));
}

QuadratureSpec prepare_quadrature(const MetricPotential& pot, const Weight& alpha, std::int64_t n,
                                  const QuadratureSpec& quad) {
  return prepare(pot, alpha, n, quad).quad;
}

double log_integrate(const QuadratureSpec& quad, const std::function<double(const Eigen::VectorXd&)>& log_integrand) {
  if (quad.box.empty()) throw ValidationError("quadrature box is empty");
  std::vector<double> vals(node_count(quad));
  for_each_node(quad, [&](std::size_t i, const Eigen::VectorXd& u, double lw) { vals[i] = log_integrand(u) + lw; });
  return log_sum_exp(vals);
}

NormReport norm_report(const MetricPotential& pot, const Weight& alpha, std::int64_t n, const QuadratureSpec& quad) {
  const auto p = prepare(pot, alpha, n, quad);
  NormReport r;
  r.log_norm_sq = integrate_prepared(p);
  r.log_peak = p.fit.log_peak;
  r.tail_margin = std::exp(p.fit.log_edge_mass - r.log_norm_sq);
  r.quad = p.quad;
  r.quad.tail_margin = r.tail_margin;
  return r;
}

double log_norm_sq(const MetricPotential& pot, const Weight& alpha, std::int64_t n, const QuadratureSpec& quad) {
  return norm_report(pot, alpha, n, quad).log_norm_sq;
}

double log_norm_sq(const MetricPotential& pot, const SectionSequence& seq, std::int64_t n, const QuadratureSpec& quad) {
  return log_norm_sq(pot, seq.alpha(n), n, quad);
}

double log_density_point(const MetricPotential& pot, const Weight& alpha, std::int64_t n, const QuadratureSpec& quad,
                         const Eigen::VectorXd& u) {
  const double log_norm = log_norm_sq(pot, alpha, n, quad);
  return -static_cast<double>(n) * f_N_eval(pot, alpha, n, u) - log_norm + log_volume(pot);
}

double log_density_point(const MetricPotential& pot, const SectionSequence& seq, std::int64_t n,
                         const QuadratureSpec& quad, const Eigen::VectorXd& u) {
  return log_density_point(pot, seq.alpha(n), n, quad, u);
}

double normalization_defect(const MetricPotential& pot, const Weight& alpha, std::int64_t n,
                            const QuadratureSpec& quad) {
  const auto p = prepare(pot, alpha, n, quad);
  const double log_norm = integrate_prepared(p);
  QuadratureSpec fine = p.quad;
  fine.resolution *= 2;
  return log_integrate(fine, [&](const Eigen::VectorXd& u) { return p.L(u) - log_norm; });
}

double log_max_density(const MetricPotential& pot, const Weight& alpha, std::int64_t n, const QuadratureSpec& quad) {
  const double log_norm = log_norm_sq(pot, alpha, n, quad);
  const double inf_fn = section_limit(pot, alpha, n).f_min();
  return -static_cast<double>(n) * inf_fn - log_norm + log_volume(pot);
}

namespace {

// Integrates det Hess g / Vol(P) over {u in box : N g(u) - <alpha,u> < level}
// one coordinate at a time. Partial minima of a convex function are convex,
// so every slice is an interval.
class SuperlevelIntegrator {
 public:
  SuperlevelIntegrator(const MetricPotential& pot, Eigen::VectorXd alpha, double n, double level,
                       std::vector<std::pair<double, double>> box)
      : pot_(pot), alpha_(std::move(alpha)), n_(n), level_(level), box_(std::move(box)),
        log_vol_(std::log(to_double(pot.polytope()->volume()))) {}

  double run() {
    Eigen::VectorXd u(static_cast<Eigen::Index>(box_.size()));
    return integrate(0, u);
  }

 private:
  double h(const Eigen::VectorXd& u) const { return n_ * pot_.value(u) - alpha_.dot(u); }

  double min_rest(std::size_t k, Eigen::VectorXd& u) const {
    auto f = [&](double x) {
      u[static_cast<Eigen::Index>(k)] = x;
      return k + 1 == box_.size() ? h(u) : min_rest(k + 1, u);
    };
    boost::uintmax_t iters = 200;
    return boost::math::tools::brent_find_minima(f, box_[k].first, box_[k].second, 40, iters).second;
  }

  double integrate(std::size_t k, Eigen::VectorXd& u) const {
    const auto [lo, hi] = box_[k];
    const bool last = k + 1 == box_.size();
    auto excess = [&](double x) {
      u[static_cast<Eigen::Index>(k)] = x;
      return (last ? h(u) : min_rest(k + 1, u)) - level_;
    };
    boost::uintmax_t iters = 200;
    const auto [x_min, e_min] = boost::math::tools::brent_find_minima(excess, lo, hi, 40, iters);
    if (!(e_min < 0)) return 0;
    const auto tol = boost::math::tools::eps_tolerance<double>(50);
    double a = lo;
    const double e_lo = excess(lo);
    if (e_lo >= 0) {
      boost::uintmax_t it = 200;
      const auto br = boost::math::tools::toms748_solve(excess, lo, x_min, e_lo, e_min, tol, it);
      a = 0.5 * (br.first + br.second);
    }
    double b = hi;
    const double e_hi = excess(hi);
    if (e_hi >= 0) {
      boost::uintmax_t it = 200;
      const auto br = boost::math::tools::toms748_solve(excess, x_min, hi, e_min, e_hi, tol, it);
      b = 0.5 * (br.first + br.second);
    }
    if (!(b > a)) return 0;

    using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
    if (last) {
      auto density = [&](double x) {
        u[static_cast<Eigen::Index>(k)] = x;
        return std::exp(log_volume_density(pot_, u) - log_vol_);
      };
      return GK::integrate(density, a, b, 12, 1e-11);
    }
    // x = c - r cos(theta) absorbs the square-root behaviour of the inner
    // slice length at the ends of the interval
    const double c = 0.5 * (a + b);
    const double r = 0.5 * (b - a);
    Eigen::VectorXd inner = u;
    auto slice = [&](double theta) {
      inner[static_cast<Eigen::Index>(k)] = c - r * std::cos(theta);
      return integrate(k + 1, inner) * r * std::sin(theta);
    };
    return GK::integrate(slice, 0.0, M_PI, 10, 1e-10);
  }

  const MetricPotential& pot_;
  Eigen::VectorXd alpha_;
  double n_;
  double level_;
  std::vector<std::pair<double, double>> box_;
  double log_vol_;
};

}  // namespace

double tail_volume(const MetricPotential& pot, const Weight& alpha, std::int64_t n, const QuadratureSpec& quad,
                   double t) {
  if (!(t > 0)) throw ValidationError("t must be positive");
  const auto p = prepare(pot, alpha, n, quad);
  const double log_norm = integrate_prepared(p);
  // |phi_N|^2 > t  <=>  N g - <alpha,u> < log Vol - log I - log t
  const double level = log_volume(pot) - log_norm - std::log(t);

  // measure box: the quadrature box joined with a wide cube around the
  // moment preimage of the mean of the potential points
  const Eigen::VectorXd mean = pot.point_matrix().rowwise().mean();
  const Eigen::VectorXd centre =
      newton_minimize(pot, mean, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(pot.dim()))).u_star;
  std::vector<std::pair<double, double>> box;
  for (std::size_t i = 0; i < pot.dim(); ++i) {
    const double c = centre[static_cast<Eigen::Index>(i)];
    box.emplace_back(std::min(p.quad.box[i].first, c - kMeasureHalfWidth),
                     std::max(p.quad.box[i].second, c + kMeasureHalfWidth));
  }
  SuperlevelIntegrator integ(pot, to_eigen(alpha), static_cast<double>(n), level, std::move(box));
  return std::clamp(integ.run(), 0.0, 1.0);
}

double tail_volume(const MetricPotential& pot, const SectionSequence& seq, std::int64_t n, const QuadratureSpec& quad,
                   double t) {
  return tail_volume(pot, seq.alpha(n), n, quad, t);
}

std::vector<double> tail_grid(const MetricPotential& pot, const Weight& alpha, std::int64_t n,
                              const QuadratureSpec& quad, std::size_t count, double lo) {
  if (count < 2 || !(lo > 0)) throw ValidationError("tail grid needs at least two points above 0");
  const double hi = log_max_density(pot, alpha, n, quad);
  const double a = std::log(lo);
  if (!(hi > a)) throw ValidationError("maximal density is below the bottom of the tail grid");
  std::vector<double> grid;
  for (std::size_t i = 0; i < count; ++i) {
    grid.push_back(std::exp(a + (hi - a) * static_cast<double>(i) / static_cast<double>(count - 1)));
  }
  return grid;
}

double weak_convergence_test(const MetricPotential& pot, const Weight& alpha, std::int64_t n,
                             const QuadratureSpec& quad, const MomentTestFunction& fn) {
  const auto p = prepare(pot, alpha, n, quad);
  const std::size_t total = node_count(p.quad);
  std::vector<double> logs(total), vals(total);
  for_each_node(p.quad, [&](std::size_t i, const Eigen::VectorXd& u, double lw) {
    const auto jet = pot.jet(u);
    logs[i] = p.L.alpha.dot(u) - p.L.n * jet.value + LogIntegrand::log_det(jet.hessian) + lw;
    vals[i] = fn(jet.gradient);
  });
  const double log_norm = log_sum_exp(logs);
  double s = 0;
  for (std::size_t i = 0; i < total; ++i) s += std::exp(logs[i] - log_norm) * vals[i];
  return s;
}

double weak_convergence_test(const MetricPotential& pot, const SectionSequence& seq, std::int64_t n,
                             const QuadratureSpec& quad, const MomentTestFunction& fn) {
  return weak_convergence_test(pot, seq.alpha(n), n, quad, fn);
}

TameComparison compare_tame(const MetricPotential& pot, const SectionSequence& seq, const SectionSequence& tame_seq,
                            std::int64_t n, const QuadratureSpec& quad, double t, double tolerance) {
  if (!(seq.xi() == tame_seq.xi())) throw ValidationError("sequences approximate different rays");
  TameComparison c;
  c.d_sequence = tail_volume(pot, seq, n, quad, t);
  c.d_tame = tail_volume(pot, tame_seq, n, quad, t);
  c.holds = c.d_sequence <= c.d_tame + tolerance;
  return c;
}

namespace {

AsymptoticFit fit_line(const std::vector<std::pair<std::int64_t, double>>& samples,
                       const std::function<double(double)>& abscissa) {
  if (samples.size() < 5) throw ValidationError("a fit needs at least 5 values of N");
  for (std::size_t i = 1; i < samples.size(); ++i) {
    if (samples[i].first <= samples[i - 1].first) throw ValidationError("N values must be strictly increasing");
  }
  const std::size_t k = samples.size();
  std::vector<double> x(k), y(k);
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < k; ++i) {
    x[i] = abscissa(static_cast<double>(samples[i].first));
    y[i] = samples[i].second;
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) throw ValidationError("non-finite sample in fit");
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(k);
  my /= static_cast<double>(k);
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < k; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0)) throw ValidationError("degenerate fit design");
  AsymptoticFit fit;
  fit.exponent = sxy / sxx;
  fit.log_constant = my - fit.exponent * mx;
  for (std::size_t i = 0; i < k; ++i) {
    fit.residual = std::max(fit.residual, std::abs(y[i] - fit.log_constant - fit.exponent * x[i]));
  }
  fit.n_first = samples.front().first;
  fit.n_last = samples.back().first;
  fit.samples = k;
  return fit;
}

}  // namespace

AsymptoticFit fit_power_law(const std::vector<std::pair<std::int64_t, double>>& samples) {
  if (!samples.empty() && samples.front().first < 1) throw ValidationError("N must be positive");
  return fit_line(samples, [](double n) { return std::log(n); });
}

AsymptoticFit fit_log_law(const std::vector<std::pair<std::int64_t, double>>& samples) {
  if (!samples.empty() && samples.front().first < 2) throw ValidationError("the log law needs N >= 2");
  return fit_line(samples, [](double n) { return std::log(std::log(n) / n); });
}

double euclidean_chart_integral(std::int64_t a, std::int64_t n) {
  if (a < 0 || n <= a + 1) throw ValidationError("the chart integral converges only for 0 <= a < N - 1");
  const double p = static_cast<double>(2 * a + 1);
  const double q = static_cast<double>(n);
  auto f = [&](double r) { return std::exp(p * std::log(r) - q * std::log1p(r * r)); };
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  // split at r = 1 so both pieces are smooth after the infinite-range map
  const double inner = GK::integrate(f, 0.0, 1.0, 15, 1e-14);
  const double outer = GK::integrate(f, 1.0, std::numeric_limits<double>::infinity(), 15, 1e-14);
  return inner + outer;
}

}  // namespace toriclab
