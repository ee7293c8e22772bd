#include <doctest.h>

#include <cmath>
#include <numbers>

#include "sfkit/errors.hpp"
#include "sfkit/symbols.hpp"

using namespace sfkit;

namespace {

const double kPi = std::numbers::pi;

double norm2(const std::vector<double>& z) {
  double s = 0.0;
  for (double c : z) s += c * c;
  return s;
}

APSymbol bessel(int n) {
  return APSymbol::radial(
      n, -n, [n](const std::vector<double>& z) { return std::pow(1.0 + norm2(z), -0.5 * n); },
      [n](const std::vector<double>& z) { return std::pow(norm2(z), -0.5 * n); });
}

}  // namespace

TEST_SUITE("symbols") {

TEST_CASE("sphere rules") {
  auto one = [](const std::vector<double>&) { return 1.0; };
  CHECK(sphere_integral(1, one) == doctest::Approx(2.0));
  CHECK(sphere_integral(2, one) == doctest::Approx(2 * kPi).epsilon(1e-13));
  CHECK(sphere_integral(3, one) == doctest::Approx(4 * kPi).epsilon(1e-13));
  CHECK(sphere_integral(3, [](const std::vector<double>& z) { return z[2] * z[2]; }) ==
        doctest::Approx(4 * kPi / 3).epsilon(1e-12));
  CHECK(sphere_integral(2, [](const std::vector<double>& z) { return z[0] * z[0] * z[1] * z[1]; }) ==
        doctest::Approx(kPi / 4).epsilon(1e-12));
  CHECK_THROWS_AS(sphere_rule(4), DomainError);
}

TEST_CASE("dixmier density of the Bessel-type symbol") {
  CHECK(dixmier_density(bessel(1)) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(dixmier_density(bessel(2)) == doctest::Approx(kPi).epsilon(1e-12));
  CHECK(std::abs(dixmier_density(bessel(3)) - 4 * kPi / 3) <= 1e-6);
}

TEST_CASE("density is linear and sees only the mean in x") {
  APSymbol a = bessel(3);
  const double base = dixmier_density(a);
  APSymbol doubled = a;
  doubled.principal.push_back(a.principal[0]);
  CHECK(dixmier_density(doubled) == doctest::Approx(2 * base));
  // adding e^{i x_1} x principal term changes nothing: its mean vanishes
  APSymbol oscillating = a;
  const TrigPolynomial wave = TrigPolynomial::monomial(
      {Frequency::rational(1), Frequency::rational(0), Frequency::rational(0)}, Matrix::Identity(1, 1));
  oscillating.principal.push_back({wave, a.principal[0].zeta_part});
  CHECK(dixmier_density(oscillating) == doctest::Approx(base));
  // scaling the x-part scales the density
  APSymbol scaled = a;
  scaled.principal[0].x_part = TrigPolynomial::constant(3, Matrix::Constant(1, 1, 2.5));
  CHECK(dixmier_density(scaled) == doctest::Approx(2.5 * base));
}

TEST_CASE("homogeneity is enforced") {
  const APSymbol bad = APSymbol::radial(
      3, -3, [](const std::vector<double>& z) { return std::pow(1.0 + norm2(z), -1.5); },
      [](const std::vector<double>& z) { return std::pow(norm2(z), -1.0); });
  CHECK_THROWS_AS(dixmier_density(bad), DomainError);
  const APSymbol none = APSymbol::radial(3, -3, [](const std::vector<double>&) { return 1.0; });
  CHECK_THROWS_AS(dixmier_density(none), DomainError);
}

TEST_CASE("counting function against the exact sublevel volume") {
  // {(1+r^2)^{-n/2} > s} is a ball of radius sqrt(s^{-2/n} - 1)
  const double unit_ball[4] = {0.0, 2.0, kPi, 4 * kPi / 3};
  for (int n = 1; n <= 3; ++n)
    for (double s : {0.5, 1e-2, 1e-4}) {
      const double r = std::sqrt(std::pow(s, -2.0 / n) - 1.0);
      const double exact = unit_ball[n] * std::pow(r, n);
      CHECK(counting_function(bessel(n), s) == doctest::Approx(exact).epsilon(1e-9));
    }
  CHECK(counting_function(bessel(3), 2.0) == 0.0);
  CHECK_THROWS_AS(counting_function(bessel(3), 0.0), DomainError);
}

TEST_CASE("scaled counting tends to the density") {
  const double d = dixmier_density(bessel(3));
  CHECK(std::abs(scaled_counting(bessel(3), 1e-4) - d) <= 0.02 * d);
  // the approach is monotone here: s N(s) = (4 pi/3)(1 - s^{2/3})^{3/2}
  CHECK(scaled_counting(bessel(3), 1e-6) > scaled_counting(bessel(3), 1e-4));
}

TEST_CASE("weyl trace of Gaussians") {
  for (int n = 1; n <= 3; ++n) {
    const APSymbol g = APSymbol::radial(n, -50, [](const std::vector<double>& z) { return std::exp(-norm2(z)); });
    CHECK(weyl_trace(g) == doctest::Approx(std::pow(kPi, n / 2.0)).epsilon(1e-8));
  }
  CHECK_THROWS_AS(weyl_trace(bessel(3)), DomainError);
}

}
