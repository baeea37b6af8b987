#ifndef TORICLAB_LATTICE_HPP
#define TORICLAB_LATTICE_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace toriclab {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Parses "p/q", "p" or "-p/q" into a rational in lowest terms.
Rational parse_rational(const std::string& text);
std::string to_string(const Rational& r);
double to_double(const Rational& r);
Rational floor(const Rational& r);
Rational ceil(const Rational& r);

namespace detail {
struct WeightTag {};
struct CoWeightTag {};
}  // namespace detail

/// Integer vector in Z^m. The tag separates weights (characters, points of
/// the dual lattice) from coweights (one-parameter subgroups, facet normals).
template <class Tag>
class IntegerVector {
 public:
  IntegerVector() = default;
  explicit IntegerVector(std::vector<std::int64_t> coords) : coords_(std::move(coords)) {}
  IntegerVector(std::initializer_list<std::int64_t> coords) : coords_(coords) {}

  std::size_t dim() const noexcept { return coords_.size(); }
  std::int64_t operator[](std::size_t i) const { return coords_[i]; }
  std::span<const std::int64_t> coords() const noexcept { return coords_; }
  const std::vector<std::int64_t>& data() const noexcept { return coords_; }

  IntegerVector operator+(const IntegerVector& o) const;
  IntegerVector operator-(const IntegerVector& o) const;
  IntegerVector operator*(std::int64_t s) const;

  friend bool operator==(const IntegerVector&, const IntegerVector&) = default;
  friend auto operator<=>(const IntegerVector&, const IntegerVector&) = default;

 private:
  std::vector<std::int64_t> coords_;
};

using Weight = IntegerVector<detail::WeightTag>;
using CoWeight = IntegerVector<detail::CoWeightTag>;

/// Exact rational vector, e.g. a ray direction xi.
class RationalPoint {
 public:
  RationalPoint() = default;
  explicit RationalPoint(std::vector<Rational> coords) : coords_(std::move(coords)) {}
  explicit RationalPoint(const Weight& w);

  /// Parses {"1/2", "0"} style coordinates.
  static RationalPoint parse(const std::vector<std::string>& coords);

  std::size_t dim() const noexcept { return coords_.size(); }
  const Rational& operator[](std::size_t i) const { return coords_[i]; }
  const std::vector<Rational>& coords() const noexcept { return coords_; }

  RationalPoint operator+(const RationalPoint& o) const;
  RationalPoint operator-(const RationalPoint& o) const;
  RationalPoint operator*(const Rational& s) const;

  std::vector<double> to_doubles() const;
  std::vector<std::string> to_strings() const;
  /// True when every coordinate is an integer.
  bool is_integral() const;
  /// Requires is_integral().
  Weight to_weight() const;

  friend bool operator==(const RationalPoint&, const RationalPoint&) = default;

 private:
  std::vector<Rational> coords_;
};

/// <u, v> for a weight and a coweight; exact integer.
std::int64_t pair(const Weight& u, const CoWeight& v);
/// <u, v> for a rational point and a coweight; exact.
Rational pair(const RationalPoint& u, const CoWeight& v);

/// log |chi_alpha|^2 at the point with logarithmic coordinates u_j = log|t_j|^2,
/// i.e. the linear form <alpha, u>.
double log_char_modulus(const Weight& alpha, std::span<const double> u);

/// gcd of the absolute values of the entries (0 for the zero vector).
std::int64_t content(std::span<const std::int64_t> v);

std::string to_string(const Weight& w);
std::string to_string(const CoWeight& v);
std::string to_string(const RationalPoint& p);

}  // namespace toriclab

#endif  // TORICLAB_LATTICE_HPP
