#include "toriclab/polytope.hpp"

#include "exact_linalg.hpp"
#include "toriclab/errors.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace toriclab {

namespace {

using detail::RationalMatrix;

// Calls fn on every k-subset of {0, ..., n-1} in lexicographic order.
void for_each_subset(std::size_t n, std::size_t k, const std::function<void(const std::vector<std::size_t>&)>& fn) {
  if (k > n) return;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    fn(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + (i - 1)) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

RationalMatrix normal_rows(std::span<const Facet> facets, const std::vector<std::size_t>& which) {
  RationalMatrix rows;
  for (auto j : which) {
    rows.emplace_back(facets[j].normal.coords().begin(), facets[j].normal.coords().end());
  }
  return rows;
}

Rational slack(const Facet& f, const std::vector<Rational>& u) {
  Rational s = f.offset;
  for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * f.normal[i];
  return s;
}

bool lex_less(const RationalPoint& a, const RationalPoint& b) {
  return std::lexicographical_compare(a.coords().begin(), a.coords().end(), b.coords().begin(), b.coords().end());
}

// Pulling triangulation of the face spanned by vertex set `face` (indices into
// verts), returning simplices as index lists of size dim+1.
void triangulate(const std::vector<std::vector<Rational>>& verts, const std::vector<std::vector<bool>>& tight,
                 const std::vector<std::size_t>& face, std::size_t dim, std::vector<std::vector<std::size_t>>& out) {
  if (dim == 0) {
    out.push_back({face.front()});
    return;
  }
  const std::size_t apex = face.front();
  std::set<std::vector<std::size_t>> seen;
  const std::size_t nf = tight.empty() ? 0 : tight[0].size();
  for (std::size_t j = 0; j < nf; ++j) {
    if (tight[apex][j]) continue;
    std::vector<std::size_t> sub;
    for (auto v : face) {
      if (tight[v][j]) sub.push_back(v);
    }
    if (sub.empty() || seen.count(sub)) continue;
    std::vector<std::vector<Rational>> pts;
    for (auto v : sub) pts.push_back(verts[v]);
    if (detail::affine_dimension(pts) != dim - 1) continue;
    seen.insert(sub);
    std::vector<std::vector<std::size_t>> simplices;
    triangulate(verts, tight, sub, dim - 1, simplices);
    for (auto& s : simplices) {
      s.push_back(apex);
      out.push_back(std::move(s));
    }
  }
}

}  // namespace

PolytopeDiagnostics validate_facets(std::size_t dim, std::span<const Facet> facets) {
  if (dim == 0) throw ValidationError("polytope dimension must be at least 1");
  if (facets.empty()) throw ValidationError("unbounded polytope: no facets given");
  for (std::size_t j = 0; j < facets.size(); ++j) {
    const auto& f = facets[j];
    if (f.normal.dim() != dim) {
      throw ValidationError("facet " + std::to_string(j) + " has normal of dimension " +
                            std::to_string(f.normal.dim()) + ", expected " + std::to_string(dim));
    }
    const auto g = content(f.normal.coords());
    if (g == 0) throw ValidationError("facet " + std::to_string(j) + " has zero normal");
    if (g != 1) {
      throw ValidationError("facet " + std::to_string(j) + " normal " + to_string(f.normal) +
                            " is not primitive (gcd " + std::to_string(g) +
                            "); divide the normal by its gcd and rescale the offset accordingly");
    }
  }

  std::vector<std::size_t> all(facets.size());
  for (std::size_t j = 0; j < all.size(); ++j) all[j] = j;
  if (detail::rank(normal_rows(facets, all)) < dim) {
    throw ValidationError("unbounded polytope: facet normals do not span the space");
  }

  // With rank m the recession cone {d : <d, v_j> >= 0} is pointed, so it is
  // nonzero iff it has an extreme ray cut out by m-1 independent normals.
  bool unbounded = false;
  for_each_subset(facets.size(), dim - 1, [&](const std::vector<std::size_t>& s) {
    if (unbounded) return;
    detail::IntMatrix rows;
    for (auto j : s) rows.push_back(facets[j].normal.data());
    if (!rows.empty() && detail::rank(rows) != dim - 1) return;
    const auto ker = detail::integer_kernel(rows, dim);
    if (ker.size() != 1) return;
    for (int sign : {1, -1}) {
      bool ray = true;
      for (const auto& f : facets) {
        std::int64_t p = 0;
        for (std::size_t i = 0; i < dim; ++i) p += sign * ker[0][i] * f.normal[i];
        if (p < 0) {
          ray = false;
          break;
        }
      }
      if (ray) unbounded = true;
    }
  });
  if (unbounded) throw ValidationError("unbounded polytope: the facet inequalities admit a recession direction");

  PolytopeDiagnostics diag;
  std::vector<std::vector<Rational>> verts;
  for_each_subset(facets.size(), dim, [&](const std::vector<std::size_t>& s) {
    RationalMatrix a = normal_rows(facets, s);
    std::vector<Rational> b;
    for (auto j : s) b.emplace_back(-facets[j].offset);
    auto x = detail::solve_square(std::move(a), std::move(b));
    if (!x) return;
    for (const auto& f : facets) {
      if (slack(f, *x) < 0) return;
    }
    if (std::find(verts.begin(), verts.end(), *x) == verts.end()) verts.push_back(std::move(*x));
  });
  if (verts.empty()) throw ValidationError("empty polytope: the facet inequalities are infeasible");

  std::sort(verts.begin(), verts.end());
  std::vector<Rational> bary(dim, Rational(0));
  for (const auto& v : verts) {
    for (std::size_t i = 0; i < dim; ++i) bary[i] += v[i];
  }
  for (auto& c : bary) c /= static_cast<long long>(verts.size());
  for (std::size_t j = 0; j < facets.size(); ++j) {
    if (slack(facets[j], bary) == 0) {
      throw ValidationError("polytope has empty interior: it lies in the hyperplane of facet " + std::to_string(j));
    }
  }

  std::vector<std::vector<bool>> tight(verts.size(), std::vector<bool>(facets.size()));
  for (std::size_t v = 0; v < verts.size(); ++v) {
    for (std::size_t j = 0; j < facets.size(); ++j) tight[v][j] = slack(facets[j], verts[v]) == 0;
  }
  for (std::size_t j = 0; j < facets.size(); ++j) {
    std::vector<std::vector<Rational>> on;
    for (std::size_t v = 0; v < verts.size(); ++v) {
      if (tight[v][j]) on.push_back(verts[v]);
    }
    if (on.size() < dim || detail::affine_dimension(on) != dim - 1) diag.redundant_facets.push_back(j);
  }

  std::vector<std::size_t> every(verts.size());
  for (std::size_t v = 0; v < verts.size(); ++v) every[v] = v;
  std::vector<std::vector<std::size_t>> simplices;
  triangulate(verts, tight, every, dim, simplices);
  Rational vol = 0;
  BigInt fact = 1;
  for (std::size_t i = 2; i <= dim; ++i) fact *= static_cast<long long>(i);
  for (const auto& s : simplices) {
    RationalMatrix m;
    for (std::size_t i = 1; i < s.size(); ++i) {
      std::vector<Rational> row(dim);
      for (std::size_t k = 0; k < dim; ++k) row[k] = verts[s[i]][k] - verts[s[0]][k];
      m.push_back(std::move(row));
    }
    vol += abs(detail::determinant(std::move(m)));
  }
  diag.volume = vol / Rational(fact);

  for (auto& v : verts) diag.vertices.emplace_back(std::move(v));
  return diag;
}

FacetPolytope::FacetPolytope(std::size_t dim, std::vector<Facet> facets)
    : dim_(dim), facets_(std::move(facets)), diag_(validate_facets(dim_, facets_)) {}

FacetPolytope FacetPolytope::unit_interval() {
  return FacetPolytope(1, {Facet{CoWeight{1}, 0}, Facet{CoWeight{-1}, 1}});
}

FacetPolytope FacetPolytope::unit_simplex(std::size_t dim) {
  std::vector<Facet> f;
  for (std::size_t i = 0; i < dim; ++i) {
    std::vector<std::int64_t> e(dim, 0);
    e[i] = 1;
    f.push_back(Facet{CoWeight(e), 0});
  }
  f.push_back(Facet{CoWeight(std::vector<std::int64_t>(dim, -1)), 1});
  return FacetPolytope(dim, std::move(f));
}

FacetPolytope FacetPolytope::unit_cube(std::size_t dim) {
  std::vector<Facet> f;
  for (std::size_t i = 0; i < dim; ++i) {
    std::vector<std::int64_t> e(dim, 0);
    e[i] = 1;
    f.push_back(Facet{CoWeight(e), 0});
    e[i] = -1;
    f.push_back(Facet{CoWeight(e), 1});
  }
  return FacetPolytope(dim, std::move(f));
}

bool FacetPolytope::contains(const RationalPoint& u) const {
  if (u.dim() != dim_) throw ValidationError("dimension mismatch in contains");
  for (const auto& f : facets_) {
    if (slack(f, u.coords()) < 0) return false;
  }
  return true;
}

bool FacetPolytope::contains(const Weight& alpha, std::int64_t n) const {
  if (alpha.dim() != dim_) throw ValidationError("dimension mismatch in contains");
  for (const auto& f : facets_) {
    if (pair(alpha, f.normal) + n * f.offset < 0) return false;
  }
  return true;
}

bool FacetPolytope::is_interior(const RationalPoint& u) const {
  for (const auto& f : facets_) {
    if (slack(f, u.coords()) <= 0) return false;
  }
  return true;
}

std::vector<Weight> FacetPolytope::lattice_points(std::int64_t n) const {
  if (n < 1) throw ValidationError("dilation factor N must be at least 1");
  std::vector<std::int64_t> lo(dim_), hi(dim_);
  for (std::size_t i = 0; i < dim_; ++i) {
    Rational mn = diag_.vertices.front()[i], mx = mn;
    for (const auto& v : diag_.vertices) {
      mn = std::min(mn, v[i]);
      mx = std::max(mx, v[i]);
    }
    lo[i] = numerator(toriclab::ceil(mn * n)).convert_to<std::int64_t>();
    hi[i] = numerator(toriclab::floor(mx * n)).convert_to<std::int64_t>();
  }
  std::vector<Weight> out;
  std::vector<std::int64_t> cur = lo;
  while (true) {
    Weight w(cur);
    if (contains(w, n)) out.push_back(std::move(w));
    std::size_t i = dim_;
    while (i > 0) {
      --i;
      if (cur[i] < hi[i]) {
        ++cur[i];
        for (std::size_t k = i + 1; k < dim_; ++k) cur[k] = lo[k];
        break;
      }
      if (i == 0) return out;
    }
  }
}

Face FacetPolytope::face_of(const RationalPoint& xi) const {
  if (!contains(xi)) throw ValidationError("point " + to_string(xi) + " is not in the polytope");
  Face face;
  detail::IntMatrix rows;
  for (std::size_t j = 0; j < facets_.size(); ++j) {
    if (slack(facets_[j], xi.coords()) == 0) {
      face.active.push_back(j);
      rows.push_back(facets_[j].normal.data());
    }
  }
  const std::size_t r = rows.empty() ? 0 : detail::rank(rows);
  face.dim = dim_ - r;
  for (auto& b : detail::integer_kernel(rows, dim_)) face.lattice_basis.emplace_back(std::move(b));

  bool found = false;
  for (const auto& v : diag_.vertices) {
    bool on = true;
    for (auto j : face.active) {
      if (slack(facets_[j], v.coords()) != 0) {
        on = false;
        break;
      }
    }
    if (on && (!found || lex_less(v, face.basepoint))) {
      face.basepoint = v;
      found = true;
    }
  }
  if (!found) throw NumericError("face without vertices; polytope data inconsistent");
  return face;
}

Rational FacetPolytope::kappa(const RationalPoint& xi) const {
  const auto k = static_cast<long long>(face_of(xi).dim);
  return Rational(static_cast<long long>(dim_) - k) + Rational(k, 2);
}

PolytopeDiagnostics validate(const FacetPolytope& p) { return p.diagnostics(); }
bool contains(const FacetPolytope& p, const RationalPoint& u) { return p.contains(u); }
std::vector<Weight> lattice_points(const FacetPolytope& p, std::int64_t n) { return p.lattice_points(n); }
std::vector<RationalPoint> vertices(const FacetPolytope& p) { return p.vertices(); }
Face face_of(const FacetPolytope& p, const RationalPoint& xi) { return p.face_of(xi); }
Rational kappa(const FacetPolytope& p, const RationalPoint& xi) { return p.kappa(xi); }

}  // namespace toriclab
