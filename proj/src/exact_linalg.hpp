#ifndef TORICLAB_SRC_EXACT_LINALG_HPP
#define TORICLAB_SRC_EXACT_LINALG_HPP

#include "toriclab/lattice.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace toriclab::detail {

using RationalMatrix = std::vector<std::vector<Rational>>;
using IntMatrix = std::vector<std::vector<std::int64_t>>;

/// Row-reduces in place; returns the rank.
std::size_t row_reduce(RationalMatrix& a);

std::size_t rank(RationalMatrix a);
std::size_t rank(const IntMatrix& a);

/// Unique solution of a square system, or nullopt if singular.
std::optional<std::vector<Rational>> solve_square(RationalMatrix a, std::vector<Rational> b);

/// Solution x of A x = b for A with full column rank (possibly tall), or
/// nullopt if b is not in the column space.
std::optional<std::vector<Rational>> solve_full_column_rank(const RationalMatrix& a,
                                                            const std::vector<Rational>& b);

/// Basis of the saturated lattice Z^n ∩ ker(A) via unimodular column
/// reduction; each vector has its first nonzero entry positive.
std::vector<std::vector<std::int64_t>> integer_kernel(const IntMatrix& a, std::size_t n);

/// Dimension of the affine hull of the points.
std::size_t affine_dimension(const std::vector<std::vector<Rational>>& points);

Rational determinant(RationalMatrix a);

}  // namespace toriclab::detail

#endif  // TORICLAB_SRC_EXACT_LINALG_HPP
