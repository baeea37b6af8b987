#ifndef TORICLAB_RAYS_HPP
#define TORICLAB_RAYS_HPP

#include "toriclab/lattice.hpp"
#include "toriclab/polytope.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace toriclab {

/// Lattice point of N·P closest to N·xi in the sup norm, searched in a box of
/// radius m+1; ties go to the lexicographically smallest candidate. Throws
/// RetryAtLargerN when the box holds no point of N·P.
Weight round_to_polytope(const FacetPolytope& p, const RationalPoint& xi, std::int64_t n);

/// Point of N·F (F = face_of(xi)) near N·xi: face-lattice coordinates of
/// N·xi - N·basepoint are rounded to the nearest integers (ties down); if that
/// leaves N·F, nearby integer offsets in face coordinates are searched.
Weight tame_sequence(const FacetPolytope& p, const RationalPoint& xi, std::int64_t n);

/// Vanishing order <alpha, v_j> + N a_j of the eigensection s_alpha along the
/// boundary divisor of facet j. Throws when alpha is outside N·P.
std::int64_t vanishing_order(const FacetPolytope& p, const Weight& alpha, std::int64_t n, std::size_t j);

struct OrderProfile {
  /// k_j = <xi, v_j> + a_j per facet.
  std::vector<Rational> k;
  /// {j : k_j > 0}
  std::vector<std::size_t> support;
};

OrderProfile order_profile(const FacetPolytope& p, const RationalPoint& xi);

/// Facets whose divisors make up the limiting support, i.e. those with k_j > 0.
std::vector<std::size_t> limiting_support(const FacetPolytope& p, const RationalPoint& xi);

enum class SequenceKind { rounded, tame, offset };

std::string to_string(SequenceKind k);
SequenceKind parse_sequence_kind(const std::string& s);

/// A rule N -> alpha_N in N·P ∩ Z^m with ||alpha_N - N xi||_inf <= bound.
///
/// The offset kind is a tame rule plus a periodic bounded offset,
/// alpha_N = tame(N) + offsets[N mod offsets.size()]; offsets may push
/// alpha_N off the face of xi, which is how non-tame sequences are modelled.
class SectionSequence {
 public:
  static SectionSequence rounded(FacetPolytope p, RationalPoint xi);
  static SectionSequence tame(FacetPolytope p, RationalPoint xi);
  static SectionSequence offset(FacetPolytope p, RationalPoint xi, std::vector<Weight> offsets);

  const FacetPolytope& polytope() const noexcept { return p_; }
  const RationalPoint& xi() const noexcept { return xi_; }
  SequenceKind kind() const noexcept { return kind_; }
  const std::vector<Weight>& offsets() const noexcept { return offsets_; }
  /// Uniform bound B on ||alpha_N - N xi||_inf.
  std::int64_t bound() const noexcept { return bound_; }
  /// First N from which alpha(N) succeeds for every N up to the scan limit.
  std::int64_t n0() const noexcept { return n0_; }

  /// alpha_N; throws RetryAtLargerN if the rule has no admissible point at N,
  /// ValidationError if an offset leaves N·P.
  Weight alpha(std::int64_t n) const;

  /// ||alpha_N - N xi||_inf as a double.
  double deviation(std::int64_t n) const;

  static constexpr std::int64_t kScanLimit = 64;

 private:
  SectionSequence(FacetPolytope p, RationalPoint xi, SequenceKind kind, std::vector<Weight> offsets);

  FacetPolytope p_;
  RationalPoint xi_;
  SequenceKind kind_;
  std::vector<Weight> offsets_;
  std::int64_t bound_ = 0;
  std::int64_t n0_ = 1;
};

struct TamenessReport {
  bool tame = true;
  /// First violating (N, facet) when not tame.
  std::optional<std::pair<std::int64_t, std::size_t>> witness;
  /// Order found at the witness (expected 0).
  std::int64_t witness_order = 0;
};

/// Checks vanishing_order(alpha_N, j) == 0 for every j with k_j = 0 and every N
/// in [n_first, n_last].
TamenessReport is_tame(const SectionSequence& seq, std::int64_t n_first, std::int64_t n_last);

}  // namespace toriclab

#endif  // TORICLAB_RAYS_HPP
