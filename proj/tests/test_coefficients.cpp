#include <doctest.h>

#include <cmath>
#include <numbers>

#include "sfkit/coefficients.hpp"
#include "sfkit/errors.hpp"

using namespace sfkit;

namespace {

// coefficients of prod_{l<m} (z + l + 1/2), expanded in floating point
std::vector<double> expand(int m) {
  std::vector<double> c{1.0};
  for (int l = 0; l < m; ++l) {
    std::vector<double> next(c.size() + 1, 0.0);
    for (std::size_t j = 0; j < c.size(); ++j) {
      next[j] += (l + 0.5) * c[j];
      next[j + 1] += c[j];
    }
    c = next;
  }
  return c;
}

double to_double(const Rational& r) { return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator()); }

}  // namespace

TEST_SUITE("coefficients") {

TEST_CASE("alpha on hand-computed multi-indices") {
  CHECK(alpha_coefficient({0}) == Rational(1));
  CHECK(alpha_coefficient({1}) == Rational(1, 2));
  CHECK(alpha_coefficient({0, 0, 0}) == Rational(1, 6));
  CHECK(alpha_coefficient({1, 0, 2}) == Rational(1, 72));
  CHECK(alpha_coefficient({2}) == Rational(1, 6));
  CHECK_THROWS_AS(alpha_coefficient({-1}), DomainError);
}

TEST_CASE("alpha of the zero multi-index is 1/n!") {
  Rational fact(1);
  for (int n = 1; n <= 9; ++n) {
    fact *= n;
    CHECK(alpha_coefficient(std::vector<int>(static_cast<std::size_t>(n), 0)) == Rational(1) / fact);
  }
}

TEST_CASE("alpha matches the simplex integral for single entries") {
  // alpha((k)) = int_0^1 s^k / k! ds
  double fact = 1.0;
  for (int k = 0; k <= 8; ++k) {
    if (k > 0) fact *= k;
    CHECK(to_double(alpha_coefficient({k})) == doctest::Approx(1.0 / (fact * (k + 1))).epsilon(1e-15));
  }
}

TEST_CASE("sigma against floating point expansion") {
  for (int m = 0; m <= 8; ++m) {
    const auto c = expand(m);
    for (int j = 0; j <= m; ++j)
      CHECK(to_double(sigma_coefficient(m, j)) == doctest::Approx(c[static_cast<std::size_t>(j)]).epsilon(1e-14));
    CHECK(sigma_coefficient(m, m + 1) == Rational(0));
  }
  CHECK(sigma_coefficient(0, 0) == Rational(1));
  CHECK_THROWS_AS(sigma_coefficient(-1, 0), DomainError);
}

TEST_CASE("coefficient identities for odd n") {
  for (int n : {1, 3, 5, 7, 9, 11, 13, 15}) {
    const CoefficientTable t = local_index_coefficients(n);
    CHECK(t.checks.sigma_gamma_residual <= 1e-12);
    CHECK(t.checks.duplication_residual <= 1e-12);
    CHECK(t.checks.alpha_zero_is_inverse_factorial);
    CHECK(t.checks.pairing_constant_residual <= 1e-12);
    // independent evaluation of the two identities
    const int m = (n - 1) / 2;
    CHECK(to_double(t.sigma.at({m, 0})) ==
          doctest::Approx(std::tgamma(n / 2.0) / std::sqrt(std::numbers::pi)).epsilon(1e-13));
    const double lhs = std::tgamma(n / 2.0) * std::tgamma(n / 2.0 + 0.5);
    const double rhs = std::sqrt(std::numbers::pi) * std::tgamma(n) * std::pow(2.0, 1 - n);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-13));
  }
}

TEST_CASE("theorem constant") {
  const double pi = std::numbers::pi;
  // n = 1: i; n = 3: pi/3
  CHECK(std::abs(theorem_constant(1) - Complex(0.0, 1.0)) < 1e-15);
  CHECK(std::abs(theorem_constant(3) - Complex(pi / 3.0, 0.0)) < 1e-14);
  for (int n = 1; n <= 9; n += 2) {
    const Complex c = theorem_constant(n);
    const double mag = std::pow(pi, n / 2.0) / (std::tgamma(1.0 + n / 2.0) * std::pow(2.0, (n + 1) / 2.0));
    CHECK(std::abs(c) == doctest::Approx(mag).epsilon(1e-14));
  }
  CHECK_THROWS_AS(theorem_constant(2), DomainError);
}

TEST_CASE("table validation and serialisation") {
  CHECK_THROWS_AS(local_index_coefficients(2), DomainError);
  CHECK_THROWS_AS(local_index_coefficients(17), DomainError);
  CHECK_THROWS_AS(local_index_coefficients(-1), DomainError);
  const CoefficientTable t = local_index_coefficients(3);
  const auto j = t.to_json();
  CHECK(j["n"] == 3);
  CHECK(j.contains("checks"));
  // every stored alpha agrees with a fresh evaluation
  for (const auto& [k, v] : t.alpha) CHECK(v == alpha_coefficient(k));
}

}
