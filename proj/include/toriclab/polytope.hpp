#ifndef TORICLAB_POLYTOPE_HPP
#define TORICLAB_POLYTOPE_HPP

#include "toriclab/lattice.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace toriclab {

/// Half-space {u : <u, normal> >= -offset}.
struct Facet {
  CoWeight normal;
  std::int64_t offset = 0;

  friend bool operator==(const Facet&, const Facet&) = default;
};

struct PolytopeDiagnostics {
  std::vector<RationalPoint> vertices;
  /// Indices of listed facets that do not support a facet of P.
  std::vector<std::size_t> redundant_facets;
  Rational volume;
};

/// Checks boundedness and full dimension of {u : <u, v_j> >= -a_j} and
/// returns the vertices as a witness. Redundant facets are reported, not
/// rejected. Throws ValidationError for an unbounded or empty-interior set,
/// for non-primitive normals and for dimension mismatches.
PolytopeDiagnostics validate_facets(std::size_t dim, std::span<const Facet> facets);

/// A face of P: the facets in `active` hold with equality.
struct Face {
  std::vector<std::size_t> active;
  std::size_t dim = 0;
  /// A vertex of the face (lexicographically smallest).
  RationalPoint basepoint;
  /// Basis of the lattice Z^m ∩ (directions of the face).
  std::vector<Weight> lattice_basis;
};

/// Facet-presented polytope P = ∩_j {u : <u, v_j> >= -a_j}.
///
/// Construction validates the data (bounded, full dimensional, primitive
/// normals). Ampleness of the associated divisor is not checked.
class FacetPolytope {
 public:
  FacetPolytope(std::size_t dim, std::vector<Facet> facets);

  /// [0, 1] presented by normals +1 and -1.
  static FacetPolytope unit_interval();
  /// Convex hull of 0, e_1, ..., e_m.
  static FacetPolytope unit_simplex(std::size_t dim);
  /// [0, 1]^m.
  static FacetPolytope unit_cube(std::size_t dim);

  std::size_t dim() const noexcept { return dim_; }
  const std::vector<Facet>& facets() const noexcept { return facets_; }
  std::size_t num_facets() const noexcept { return facets_.size(); }

  const PolytopeDiagnostics& diagnostics() const noexcept { return diag_; }
  const std::vector<RationalPoint>& vertices() const noexcept { return diag_.vertices; }
  const Rational& volume() const noexcept { return diag_.volume; }

  bool contains(const RationalPoint& u) const;
  bool contains(const Weight& alpha, std::int64_t n) const;
  /// True when no facet is tight at u (requires contains(u)).
  bool is_interior(const RationalPoint& u) const;

  /// Integer points of n·P, lexicographically sorted.
  std::vector<Weight> lattice_points(std::int64_t n) const;

  /// The face whose relative interior contains xi.
  Face face_of(const RationalPoint& xi) const;

  /// Decay exponent (m - k) + k/2 where k is the dimension of face_of(xi).
  Rational kappa(const RationalPoint& xi) const;

  friend bool operator==(const FacetPolytope& a, const FacetPolytope& b) {
    return a.dim_ == b.dim_ && a.facets_ == b.facets_;
  }

 private:
  std::size_t dim_;
  std::vector<Facet> facets_;
  PolytopeDiagnostics diag_;
};

PolytopeDiagnostics validate(const FacetPolytope& p);
bool contains(const FacetPolytope& p, const RationalPoint& u);
std::vector<Weight> lattice_points(const FacetPolytope& p, std::int64_t n);
std::vector<RationalPoint> vertices(const FacetPolytope& p);
Face face_of(const FacetPolytope& p, const RationalPoint& xi);
Rational kappa(const FacetPolytope& p, const RationalPoint& xi);

}  // namespace toriclab

#endif  // TORICLAB_POLYTOPE_HPP
