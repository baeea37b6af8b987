#include "toriclab/lattice.hpp"

#include "toriclab/errors.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace toriclab {

namespace {

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw ValidationError("integer overflow in lattice arithmetic");
  return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw ValidationError("integer overflow in lattice arithmetic");
  return r;
}

void require_same_dim(std::size_t a, std::size_t b) {
  if (a != b) {
    throw ValidationError("dimension mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
  }
}

bool is_integer_literal(const std::string& s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
  }
  return true;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t");
  auto e = s.find_last_not_of(" \t");
  return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
}

}  // namespace

Rational parse_rational(const std::string& text) {
  const std::string t = trim(text);
  const auto slash = t.find('/');
  const std::string num = trim(t.substr(0, slash));
  const std::string den = slash == std::string::npos ? "1" : trim(t.substr(slash + 1));
  if (!is_integer_literal(num) || !is_integer_literal(den) || den[0] == '-' || den[0] == '+') {
    throw ValidationError("malformed rational '" + text + "', expected \"p/q\" with q > 0");
  }
  BigInt q(den);
  if (q == 0) throw ValidationError("zero denominator in '" + text + "'");
  return Rational(BigInt(num), q);
}

std::string to_string(const Rational& r) {
  std::ostringstream os;
  os << numerator(r);
  if (denominator(r) != 1) os << '/' << denominator(r);
  return os.str();
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

Rational floor(const Rational& r) {
  BigInt q = numerator(r) / denominator(r);  // truncates toward zero
  if (numerator(r) < 0 && q * denominator(r) != numerator(r)) q -= 1;
  return Rational(q);
}

Rational ceil(const Rational& r) { return -floor(-r); }

template <class Tag>
IntegerVector<Tag> IntegerVector<Tag>::operator+(const IntegerVector& o) const {
  require_same_dim(dim(), o.dim());
  std::vector<std::int64_t> r(dim());
  for (std::size_t i = 0; i < dim(); ++i) r[i] = checked_add(coords_[i], o.coords_[i]);
  return IntegerVector(std::move(r));
}

template <class Tag>
IntegerVector<Tag> IntegerVector<Tag>::operator-(const IntegerVector& o) const {
  require_same_dim(dim(), o.dim());
  std::vector<std::int64_t> r(dim());
  for (std::size_t i = 0; i < dim(); ++i) r[i] = checked_add(coords_[i], checked_mul(-1, o.coords_[i]));
  return IntegerVector(std::move(r));
}

template <class Tag>
IntegerVector<Tag> IntegerVector<Tag>::operator*(std::int64_t s) const {
  std::vector<std::int64_t> r(dim());
  for (std::size_t i = 0; i < dim(); ++i) r[i] = checked_mul(coords_[i], s);
  return IntegerVector(std::move(r));
}

template class IntegerVector<detail::WeightTag>;
template class IntegerVector<detail::CoWeightTag>;

RationalPoint::RationalPoint(const Weight& w) {
  coords_.reserve(w.dim());
  for (auto c : w.coords()) coords_.emplace_back(c);
}

RationalPoint RationalPoint::parse(const std::vector<std::string>& coords) {
  std::vector<Rational> r;
  r.reserve(coords.size());
  for (const auto& c : coords) r.push_back(parse_rational(c));
  return RationalPoint(std::move(r));
}

RationalPoint RationalPoint::operator+(const RationalPoint& o) const {
  require_same_dim(dim(), o.dim());
  std::vector<Rational> r(dim());
  for (std::size_t i = 0; i < dim(); ++i) r[i] = coords_[i] + o.coords_[i];
  return RationalPoint(std::move(r));
}

RationalPoint RationalPoint::operator-(const RationalPoint& o) const {
  require_same_dim(dim(), o.dim());
  std::vector<Rational> r(dim());
  for (std::size_t i = 0; i < dim(); ++i) r[i] = coords_[i] - o.coords_[i];
  return RationalPoint(std::move(r));
}

RationalPoint RationalPoint::operator*(const Rational& s) const {
  std::vector<Rational> r(dim());
  for (std::size_t i = 0; i < dim(); ++i) r[i] = coords_[i] * s;
  return RationalPoint(std::move(r));
}

std::vector<double> RationalPoint::to_doubles() const {
  std::vector<double> r;
  r.reserve(dim());
  for (const auto& c : coords_) r.push_back(to_double(c));
  return r;
}

std::vector<std::string> RationalPoint::to_strings() const {
  std::vector<std::string> r;
  r.reserve(dim());
  for (const auto& c : coords_) r.push_back(to_string(c));
  return r;
}

bool RationalPoint::is_integral() const {
  for (const auto& c : coords_) {
    if (denominator(c) != 1) return false;
  }
  return true;
}

Weight RationalPoint::to_weight() const {
  std::vector<std::int64_t> r;
  r.reserve(dim());
  for (const auto& c : coords_) {
    if (denominator(c) != 1) throw ValidationError("point " + toriclab::to_string(*this) + " is not integral");
    const BigInt& n = numerator(c);
    if (n > std::numeric_limits<std::int64_t>::max() || n < std::numeric_limits<std::int64_t>::min()) {
      throw ValidationError("coordinate out of 64-bit range");
    }
    r.push_back(n.convert_to<std::int64_t>());
  }
  return Weight(std::move(r));
}

std::int64_t pair(const Weight& u, const CoWeight& v) {
  require_same_dim(u.dim(), v.dim());
  std::int64_t s = 0;
  for (std::size_t i = 0; i < u.dim(); ++i) s = checked_add(s, checked_mul(u[i], v[i]));
  return s;
}

Rational pair(const RationalPoint& u, const CoWeight& v) {
  require_same_dim(u.dim(), v.dim());
  Rational s = 0;
  for (std::size_t i = 0; i < u.dim(); ++i) s += u[i] * v[i];
  return s;
}

double log_char_modulus(const Weight& alpha, std::span<const double> u) {
  require_same_dim(alpha.dim(), u.size());
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += static_cast<double>(alpha[i]) * u[i];
  return s;
}

std::int64_t content(std::span<const std::int64_t> v) {
  std::int64_t g = 0;
  for (auto x : v) g = std::gcd(g, x < 0 ? -x : x);
  return g;
}

namespace {
template <class Range>
std::string join(const Range& r) {
  std::ostringstream os;
  os << '(';
  bool first = true;
  for (const auto& x : r) {
    if (!first) os << ',';
    os << x;
    first = false;
  }
  os << ')';
  return os.str();
}
}  // namespace

std::string to_string(const Weight& w) { return join(w.coords()); }
std::string to_string(const CoWeight& v) { return join(v.coords()); }
std::string to_string(const RationalPoint& p) { return join(p.to_strings()); }

}  // namespace toriclab
