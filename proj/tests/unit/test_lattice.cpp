#include <doctest.h>

#include "toriclab/errors.hpp"
#include "toriclab/lattice.hpp"

#include <cmath>
#include <random>

using namespace toriclab;

TEST_CASE("pair on integer and rational points") {
  CHECK(pair(Weight{1, 0}, CoWeight{0, 1}) == 0);
  CHECK(pair(Weight{2, 3}, CoWeight{1, -1}) == -1);
  CHECK(pair(RationalPoint::parse({"1/2", "0"}), CoWeight{2, 0}) == Rational(1));
  CHECK_THROWS_AS(pair(Weight{1, 2}, CoWeight{1}), ValidationError);
}

TEST_CASE("log_char_modulus is the linear form <alpha, u>") {
  const double u0[] = {0.3, -7.0, 2.5};
  CHECK(log_char_modulus(Weight{0, 0, 0}, u0) == 0.0);
  const double u1[] = {std::log(4.0)};
  CHECK(log_char_modulus(Weight{1}, u1) == doctest::Approx(std::log(4.0)));
  const double u2[] = {1.0, -1.0};
  CHECK(log_char_modulus(Weight{2, 1}, u2) == doctest::Approx(1.0));
}

TEST_CASE("pairing is bilinear and integral on random triples") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::int64_t> d(-50, 50);
  for (int trial = 0; trial < 200; ++trial) {
    Weight u{d(rng), d(rng), d(rng)}, w{d(rng), d(rng), d(rng)};
    CoWeight v{d(rng), d(rng), d(rng)};
    CHECK(pair(u + w, v) == pair(u, v) + pair(w, v));
    const RationalPoint half = RationalPoint(u) * Rational(1, 2);
    CHECK(pair(half, v) * 2 == Rational(pair(u, v)));
    const double x[] = {0.1 * static_cast<double>(d(rng)), 0.01 * static_cast<double>(d(rng)), -0.3};
    CHECK(std::abs(log_char_modulus(u + w, x) - log_char_modulus(u, x) - log_char_modulus(w, x)) < 1e-11);
  }
}

TEST_CASE("rational parsing") {
  CHECK(parse_rational("2/4") == Rational(1, 2));
  CHECK(parse_rational("-3") == Rational(-3));
  CHECK(parse_rational(" 7/21 ") == Rational(1, 3));
  CHECK(to_string(Rational(-3, 6)) == "-1/2");
  CHECK_THROWS_AS(parse_rational("1/0"), ValidationError);
  CHECK_THROWS_AS(parse_rational("1/-2"), ValidationError);
  CHECK_THROWS_AS(parse_rational("x"), ValidationError);
}
