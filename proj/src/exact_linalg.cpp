#include "exact_linalg.hpp"

#include "toriclab/errors.hpp"

#include <algorithm>
#include <numeric>

namespace toriclab::detail {

std::size_t row_reduce(RationalMatrix& a) {
  if (a.empty()) return 0;
  const std::size_t rows = a.size();
  const std::size_t cols = a[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && a[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(a[piv], a[r]);
    const Rational inv = 1 / a[r][c];
    for (std::size_t k = c; k < cols; ++k) a[r][k] *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][c] == 0) continue;
      const Rational f = a[i][c];
      for (std::size_t k = c; k < cols; ++k) a[i][k] -= f * a[r][k];
    }
    ++r;
  }
  return r;
}

std::size_t rank(RationalMatrix a) { return row_reduce(a); }

std::size_t rank(const IntMatrix& a) {
  RationalMatrix r;
  r.reserve(a.size());
  for (const auto& row : a) r.emplace_back(row.begin(), row.end());
  return row_reduce(r);
}

std::optional<std::vector<Rational>> solve_square(RationalMatrix a, std::vector<Rational> b) {
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i) a[i].push_back(b[i]);
  const std::size_t r = row_reduce(a);
  if (r < n) return std::nullopt;
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i][i] != 1) return std::nullopt;  // pivot landed in the augmented column
  }
  std::vector<Rational> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = a[i][n];
  return x;
}

std::optional<std::vector<Rational>> solve_full_column_rank(const RationalMatrix& a,
                                                            const std::vector<Rational>& b) {
  const std::size_t rows = a.size();
  if (rows == 0) return std::vector<Rational>{};
  const std::size_t cols = a[0].size();
  RationalMatrix aug = a;
  for (std::size_t i = 0; i < rows; ++i) aug[i].push_back(b[i]);
  const std::size_t r = row_reduce(aug);
  // Consistent iff no pivot in the augmented column.
  for (std::size_t i = 0; i < r; ++i) {
    bool zero_row = true;
    for (std::size_t k = 0; k < cols; ++k) {
      if (aug[i][k] != 0) {
        zero_row = false;
        break;
      }
    }
    if (zero_row) return std::nullopt;
  }
  if (r != cols) return std::nullopt;
  std::vector<Rational> x(cols);
  for (std::size_t i = 0; i < cols; ++i) x[i] = aug[i][cols];
  return x;
}

std::vector<std::vector<std::int64_t>> integer_kernel(const IntMatrix& a, std::size_t n) {
  // Column operations A U = [H | 0]; the trailing columns of the unimodular U
  // span Z^n ∩ ker(A).
  IntMatrix m = a;
  IntMatrix u(n, std::vector<std::int64_t>(n, 0));
  for (std::size_t i = 0; i < n; ++i) u[i][i] = 1;

  auto col_axpy = [&](std::size_t dst, std::size_t src, std::int64_t q) {
    // column dst -= q * column src
    for (auto& row : m) row[dst] -= q * row[src];
    for (auto& row : u) row[dst] -= q * row[src];
  };
  auto col_swap = [&](std::size_t x, std::size_t y) {
    for (auto& row : m) std::swap(row[x], row[y]);
    for (auto& row : u) std::swap(row[x], row[y]);
  };

  std::size_t pivot = 0;
  for (std::size_t r = 0; r < m.size() && pivot < n; ++r) {
    // Euclid across columns pivot..n-1 of row r.
    while (true) {
      std::size_t best = n;
      for (std::size_t c = pivot; c < n; ++c) {
        if (m[r][c] != 0 && (best == n || std::abs(m[r][c]) < std::abs(m[r][best]))) best = c;
      }
      if (best == n) break;  // row already zero on the free columns
      col_swap(pivot, best);
      bool done = true;
      for (std::size_t c = pivot + 1; c < n; ++c) {
        if (m[r][c] != 0) {
          col_axpy(c, pivot, m[r][c] / m[r][pivot]);
          if (m[r][c] != 0) done = false;
        }
      }
      if (done) {
        ++pivot;
        break;
      }
    }
  }

  std::vector<std::vector<std::int64_t>> basis;
  for (std::size_t c = pivot; c < n; ++c) {
    std::vector<std::int64_t> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = u[i][c];
    auto first = std::find_if(v.begin(), v.end(), [](std::int64_t x) { return x != 0; });
    if (first != v.end() && *first < 0) {
      for (auto& x : v) x = -x;
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

std::size_t affine_dimension(const std::vector<std::vector<Rational>>& points) {
  if (points.size() <= 1) return 0;
  RationalMatrix diffs;
  for (std::size_t i = 1; i < points.size(); ++i) {
    std::vector<Rational> d(points[0].size());
    for (std::size_t k = 0; k < d.size(); ++k) d[k] = points[i][k] - points[0][k];
    diffs.push_back(std::move(d));
  }
  return rank(std::move(diffs));
}

Rational determinant(RationalMatrix a) {
  const std::size_t n = a.size();
  Rational det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && a[piv][c] == 0) ++piv;
    if (piv == n) return 0;
    if (piv != c) {
      std::swap(a[piv], a[c]);
      det = -det;
    }
    det *= a[c][c];
    for (std::size_t i = c + 1; i < n; ++i) {
      if (a[i][c] == 0) continue;
      const Rational f = a[i][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[i][k] -= f * a[c][k];
    }
  }
  return det;
}

}  // namespace toriclab::detail
