#ifndef TORICLAB_ERRORS_HPP
#define TORICLAB_ERRORS_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace toriclab {

/// Bad input: malformed data, dimension mismatch, a point outside the polytope.
/// Maps to exit code 1 in the command line tool.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& msg) : std::invalid_argument(msg) {}
};

/// A numerical procedure did not reach its tolerance. Exit code 2.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

/// No admissible lattice point for this dilation; `suggested_n` is the
/// smallest N found by scanning for which the construction succeeds (0 if none).
class RetryAtLargerN : public ValidationError {
 public:
  RetryAtLargerN(const std::string& msg, std::int64_t suggested_n)
      : ValidationError(msg), suggested_n_(suggested_n) {}
  std::int64_t suggested_n() const noexcept { return suggested_n_; }

 private:
  std::int64_t suggested_n_;
};

/// Newton iteration ran out of iterations; carries the last iterate.
class NonConvergence : public NumericError {
 public:
  NonConvergence(const std::string& msg, std::vector<double> last_iterate, double gradient_norm)
      : NumericError(msg), last_iterate_(std::move(last_iterate)), gradient_norm_(gradient_norm) {}
  const std::vector<double>& last_iterate() const noexcept { return last_iterate_; }
  double gradient_norm() const noexcept { return gradient_norm_; }

 private:
  std::vector<double> last_iterate_;
  double gradient_norm_;
};

/// A user supplied quadrature box cuts off non-negligible mass.
class BoxTooSmall : public NumericError {
 public:
  BoxTooSmall(const std::string& msg, std::vector<std::pair<double, double>> suggested)
      : NumericError(msg), suggested_(std::move(suggested)) {}
  const std::vector<std::pair<double, double>>& suggested_box() const noexcept { return suggested_; }

 private:
  std::vector<std::pair<double, double>> suggested_;
};

}  // namespace toriclab

#endif  // TORICLAB_ERRORS_HPP
