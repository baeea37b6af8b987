#include "toriclab/rays.hpp"

#include "exact_linalg.hpp"
#include "toriclab/errors.hpp"

#include <algorithm>
#include <numeric>

namespace toriclab {

namespace {

Rational sup_distance(const Weight& alpha, const RationalPoint& target) {
  Rational d = 0;
  for (std::size_t i = 0; i < alpha.dim(); ++i) {
    Rational x = abs(Rational(alpha[i]) - target[i]);
    if (x > d) d = x;
  }
  return d;
}

std::int64_t to_i64(const Rational& r) { return numerator(r).convert_to<std::int64_t>(); }

void require_in_polytope(const FacetPolytope& p, const RationalPoint& xi) {
  if (xi.dim() != p.dim()) throw ValidationError("ray direction has the wrong dimension");
  if (!p.contains(xi)) {
    throw ValidationError("ray direction " + to_string(xi) +
                          " lies outside P; a sequence alpha_N in N·P with alpha_N - N·xi bounded "
                          "exists only for xi in P");
  }
}

// Best admissible point among integer vectors base + B·c with c in the cube
// of the given radius around `center`; ordering is (sup distance, lex).
std::optional<Weight> search_offsets(const FacetPolytope& p, std::int64_t n, const RationalPoint& target,
                                     const std::vector<std::int64_t>& base, const std::vector<Weight>& basis,
                                     const std::vector<std::int64_t>& center, std::int64_t radius) {
  const std::size_t k = basis.size();
  const std::size_t m = base.size();
  std::optional<Weight> best;
  Rational best_d;
  std::vector<std::int64_t> c(k);
  for (std::size_t i = 0; i < k; ++i) c[i] = center[i] - radius;
  while (true) {
    std::vector<std::int64_t> a = base;
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t r = 0; r < m; ++r) a[r] += c[i] * basis[i][r];
    }
    Weight w(std::move(a));
    if (p.contains(w, n)) {
      Rational d = sup_distance(w, target);
      if (!best || d < best_d || (d == best_d && w < *best)) {
        best = w;
        best_d = d;
      }
    }
    std::size_t i = k;
    bool advanced = false;
    while (i > 0) {
      --i;
      if (c[i] < center[i] + radius) {
        ++c[i];
        for (std::size_t j = i + 1; j < k; ++j) c[j] = center[j] - radius;
        advanced = true;
        break;
      }
    }
    if (!advanced) break;
  }
  return best;
}

template <class Fn>
std::int64_t first_success_after(std::int64_t n, Fn&& attempt) {
  for (std::int64_t m = n + 1; m <= n + 4 * SectionSequence::kScanLimit; ++m) {
    try {
      attempt(m);
      return m;
    } catch (const RetryAtLargerN&) {
    }
  }
  return 0;
}

Weight round_impl(const FacetPolytope& p, const RationalPoint& xi, std::int64_t n) {
  const std::size_t m = p.dim();
  const RationalPoint target = xi * Rational(n);
  const auto radius = static_cast<std::int64_t>(m + 1);
  std::vector<std::int64_t> base(m);
  for (std::size_t i = 0; i < m; ++i) base[i] = 0;
  std::vector<Weight> unit;
  std::vector<std::int64_t> center(m);
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<std::int64_t> e(m, 0);
    e[i] = 1;
    unit.emplace_back(e);
    center[i] = to_i64(toriclab::floor(target[i] + Rational(1, 2)));
  }
  auto best = search_offsets(p, n, target, base, unit, center, radius);
  // Keep only candidates within radius m+1 of N·xi itself.
  if (best && sup_distance(*best, target) <= radius) return *best;
  throw RetryAtLargerN("no lattice point of " + std::to_string(n) + "·P near " + std::to_string(n) + "·xi", 0);
}

Weight tame_impl(const FacetPolytope& p, const Face& face, const RationalPoint& xi, std::int64_t n) {
  const std::size_t m = p.dim();
  const RationalPoint target = xi * Rational(n);
  const RationalPoint nb = face.basepoint * Rational(n);
  if (!nb.is_integral()) {
    throw RetryAtLargerN("face vertex is not integral at N = " + std::to_string(n), 0);
  }
  if (face.dim == 0) {
    if (!target.is_integral()) throw RetryAtLargerN("N·xi is not integral at N = " + std::to_string(n), 0);
    return target.to_weight();
  }
  detail::RationalMatrix b(m, std::vector<Rational>(face.dim));
  for (std::size_t i = 0; i < face.dim; ++i) {
    for (std::size_t r = 0; r < m; ++r) b[r][i] = face.lattice_basis[i][r];
  }
  std::vector<Rational> rhs(m);
  for (std::size_t r = 0; r < m; ++r) rhs[r] = target[r] - nb[r];
  auto coords = detail::solve_full_column_rank(b, rhs);
  if (!coords) throw NumericError("ray direction is not in the affine span of its face");

  std::vector<std::int64_t> rounded(face.dim);
  for (std::size_t i = 0; i < face.dim; ++i) rounded[i] = to_i64(toriclab::ceil((*coords)[i] - Rational(1, 2)));
  const std::vector<std::int64_t> base = nb.to_weight().data();

  std::vector<std::int64_t> a = base;
  for (std::size_t i = 0; i < face.dim; ++i) {
    for (std::size_t r = 0; r < m; ++r) a[r] += rounded[i] * face.lattice_basis[i][r];
  }
  Weight w(std::move(a));
  if (p.contains(w, n)) return w;

  for (std::int64_t radius = 1; radius <= static_cast<std::int64_t>(m + 1); ++radius) {
    if (auto best = search_offsets(p, n, target, base, face.lattice_basis, rounded, radius)) return *best;
  }
  throw RetryAtLargerN("no lattice point of " + std::to_string(n) + "·F near " + std::to_string(n) + "·xi", 0);
}

}  // namespace

Weight round_to_polytope(const FacetPolytope& p, const RationalPoint& xi, std::int64_t n) {
  if (n < 1) throw ValidationError("N must be at least 1");
  require_in_polytope(p, xi);
  try {
    return round_impl(p, xi, n);
  } catch (const RetryAtLargerN& e) {
    const auto next = first_success_after(n, [&](std::int64_t m) { round_impl(p, xi, m); });
    throw RetryAtLargerN(std::string(e.what()) + "; retry at N = " + std::to_string(next), next);
  }
}

Weight tame_sequence(const FacetPolytope& p, const RationalPoint& xi, std::int64_t n) {
  if (n < 1) throw ValidationError("N must be at least 1");
  require_in_polytope(p, xi);
  const Face face = p.face_of(xi);
  try {
    return tame_impl(p, face, xi, n);
  } catch (const RetryAtLargerN& e) {
    const auto next = first_success_after(n, [&](std::int64_t m) { tame_impl(p, face, xi, m); });
    throw RetryAtLargerN(std::string(e.what()) + "; retry at N = " + std::to_string(next), next);
  }
}

std::int64_t vanishing_order(const FacetPolytope& p, const Weight& alpha, std::int64_t n, std::size_t j) {
  if (j >= p.num_facets()) throw ValidationError("facet index out of range");
  const auto& f = p.facets()[j];
  const std::int64_t order = pair(alpha, f.normal) + n * f.offset;
  if (order < 0) {
    throw ValidationError("weight " + to_string(alpha) + " is not in " + std::to_string(n) +
                          "·P (negative order along facet " + std::to_string(j) + ")");
  }
  return order;
}

OrderProfile order_profile(const FacetPolytope& p, const RationalPoint& xi) {
  require_in_polytope(p, xi);
  OrderProfile prof;
  for (std::size_t j = 0; j < p.num_facets(); ++j) {
    const auto& f = p.facets()[j];
    prof.k.push_back(pair(xi, f.normal) + f.offset);
    if (prof.k.back() > 0) prof.support.push_back(j);
  }
  return prof;
}

std::vector<std::size_t> limiting_support(const FacetPolytope& p, const RationalPoint& xi) {
  return order_profile(p, xi).support;
}

std::string to_string(SequenceKind k) {
  switch (k) {
    case SequenceKind::rounded:
      return "rounded";
    case SequenceKind::tame:
      return "tame";
    case SequenceKind::offset:
      return "offset";
  }
  return "unknown";
}

SequenceKind parse_sequence_kind(const std::string& s) {
  if (s == "rounded") return SequenceKind::rounded;
  if (s == "tame") return SequenceKind::tame;
  if (s == "offset") return SequenceKind::offset;
  throw ValidationError("unknown sequence kind '" + s + "' (expected tame, rounded or offset)");
}

SectionSequence::SectionSequence(FacetPolytope p, RationalPoint xi, SequenceKind kind, std::vector<Weight> offsets)
    : p_(std::move(p)), xi_(std::move(xi)), kind_(kind), offsets_(std::move(offsets)) {
  require_in_polytope(p_, xi_);
  const std::size_t m = p_.dim();
  for (const auto& o : offsets_) {
    if (o.dim() != m) throw ValidationError("offset " + to_string(o) + " has the wrong dimension");
  }
  if (kind_ == SequenceKind::offset && offsets_.empty()) {
    throw ValidationError("offset sequence needs at least one offset");
  }

  if (kind_ == SequenceKind::rounded) {
    bound_ = static_cast<std::int64_t>(m + 1);
  } else {
    const Face face = p_.face_of(xi_);
    std::int64_t col = 0;
    for (const auto& b : face.lattice_basis) {
      std::int64_t mx = 0;
      for (auto x : b.coords()) mx = std::max(mx, x < 0 ? -x : x);
      col += mx;
    }
    // rounding contributes col/2, the fallback search up to (m+1)·col more
    bound_ = (col + 1) / 2 + static_cast<std::int64_t>(m + 1) * col;
    std::int64_t shift = 0;
    for (const auto& o : offsets_) {
      for (auto x : o.coords()) shift = std::max(shift, x < 0 ? -x : x);
    }
    bound_ += shift;
  }

  n0_ = 1;
  for (std::int64_t n = 1; n <= kScanLimit; ++n) {
    try {
      (void)alpha(n);
    } catch (const ValidationError&) {
      n0_ = n + 1;
    }
  }
}

SectionSequence SectionSequence::rounded(FacetPolytope p, RationalPoint xi) {
  return SectionSequence(std::move(p), std::move(xi), SequenceKind::rounded, {});
}

SectionSequence SectionSequence::tame(FacetPolytope p, RationalPoint xi) {
  return SectionSequence(std::move(p), std::move(xi), SequenceKind::tame, {});
}

SectionSequence SectionSequence::offset(FacetPolytope p, RationalPoint xi, std::vector<Weight> offsets) {
  return SectionSequence(std::move(p), std::move(xi), SequenceKind::offset, std::move(offsets));
}

Weight SectionSequence::alpha(std::int64_t n) const {
  switch (kind_) {
    case SequenceKind::rounded:
      return round_to_polytope(p_, xi_, n);
    case SequenceKind::tame:
      return tame_sequence(p_, xi_, n);
    case SequenceKind::offset: {
      Weight a = tame_sequence(p_, xi_, n) + offsets_[static_cast<std::size_t>(n) % offsets_.size()];
      if (!p_.contains(a, n)) {
        throw ValidationError("offset rule leaves " + std::to_string(n) + "·P at alpha = " + to_string(a));
      }
      return a;
    }
  }
  throw ValidationError("unknown sequence kind");
}

double SectionSequence::deviation(std::int64_t n) const {
  return to_double(sup_distance(alpha(n), xi_ * Rational(n)));
}

TamenessReport is_tame(const SectionSequence& seq, std::int64_t n_first, std::int64_t n_last) {
  const auto& p = seq.polytope();
  const auto prof = order_profile(p, seq.xi());
  TamenessReport rep;
  for (std::int64_t n = std::max<std::int64_t>(n_first, 1); n <= n_last; ++n) {
    Weight a;
    try {
      a = seq.alpha(n);
    } catch (const RetryAtLargerN&) {
      continue;  // rule undefined below n0
    }
    for (std::size_t j = 0; j < p.num_facets(); ++j) {
      if (prof.k[j] != 0) continue;
      const auto order = vanishing_order(p, a, n, j);
      if (order != 0) {
        rep.tame = false;
        rep.witness = std::make_pair(n, j);
        rep.witness_order = order;
        return rep;
      }
    }
  }
  return rep;
}

}  // namespace toriclab
