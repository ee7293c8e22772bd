#include "sfkit/coefficients.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "sfkit/errors.hpp"

namespace sfkit {
namespace {

std::int64_t factorial(int k) {
  std::int64_t f = 1;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

// all compositions k in N^m with |k| <= budget
void enumerate(int m, int budget, std::vector<int>& prefix,
               std::vector<std::vector<int>>& out) {
  if (static_cast<int>(prefix.size()) == m) {
    out.push_back(prefix);
    return;
  }
  for (int v = 0; v <= budget; ++v) {
    prefix.push_back(v);
    enumerate(m, budget - v, prefix, out);
    prefix.pop_back();
  }
}

std::string to_string(const Rational& r) {
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

}  // namespace

Rational alpha_coefficient(const std::vector<int>& k) {
  std::int64_t denom = 1;
  int partial = 0;
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (k[i] < 0) throw DomainError("alpha: multi-index entries must be nonnegative");
    partial += k[i];
    denom *= factorial(k[i]) * (partial + static_cast<int>(i) + 1);
  }
  return Rational(1, denom);
}

Rational sigma_coefficient(int m, int j) {
  if (m < 0 || j < 0) throw DomainError("sigma: indices must be nonnegative");
  if (j > m) return Rational(0);
  // expand prod (z + l + 1/2) one factor at a time
  std::vector<Rational> poly{Rational(1)};
  for (int l = 0; l < m; ++l) {
    const Rational root(2 * l + 1, 2);
    std::vector<Rational> next(poly.size() + 1, Rational(0));
    for (std::size_t d = 0; d < poly.size(); ++d) {
      next[d + 1] += poly[d];
      next[d] += poly[d] * root;
    }
    poly = std::move(next);
  }
  return poly[static_cast<std::size_t>(j)];
}

Complex theorem_constant(int n) {
  if (n < 1 || n % 2 == 0) throw DomainError("theorem constant needs odd n >= 1");
  const int e = (n + 1) / 2;
  // i^{-e}
  static const Complex powers[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
  const Complex ipow = powers[e % 4];
  const double mag = std::pow(std::numbers::pi, 0.5 * n) /
                     (std::tgamma(1.0 + 0.5 * n) * std::pow(2.0, 0.5 * (n + 1)));
  return -ipow * mag;
}

CoefficientTable local_index_coefficients(int n) {
  if (n < 1 || n > 15 || n % 2 == 0)
    throw DomainError("local_index_coefficients: n must be odd with 1 <= n <= 15, got " +
                      std::to_string(n));
  CoefficientTable table;
  table.n = n;
  for (int m = 1; m <= n; m += 2) {
    std::vector<std::vector<int>> ks;
    std::vector<int> prefix;
    enumerate(m, n - m, prefix, ks);
    for (const auto& k : ks) table.alpha.emplace(k, alpha_coefficient(k));
  }
  for (int h = 0; h <= n; ++h)
    for (int j = 0; j <= h; ++j) table.sigma.emplace(std::pair{h, j}, sigma_coefficient(h, j));
  table.theorem_constant = theorem_constant(n);

  const double sqrt_pi = std::sqrt(std::numbers::pi);
  const Rational s = table.sigma.at({(n - 1) / 2, 0});
  table.checks.sigma_gamma_residual =
      std::abs(static_cast<double>(s.numerator()) / static_cast<double>(s.denominator()) -
               std::tgamma(0.5 * n) / sqrt_pi);
  table.checks.duplication_residual =
      std::abs(std::tgamma(0.5 * n) * std::tgamma(0.5 * n + 0.5) -
               sqrt_pi * static_cast<double>(factorial(n - 1)) * std::pow(2.0, 1.0 - n));
  table.checks.alpha_zero_is_inverse_factorial =
      table.alpha.at(std::vector<int>(static_cast<std::size_t>(n), 0)) == Rational(1, factorial(n));
  const double sign = ((n - 1) / 2) % 2 == 0 ? 1.0 : -1.0;
  const double via_gamma = sign * std::tgamma(0.5 * n) * std::tgamma(0.5 * (n + 1)) /
                           (sqrt_pi * static_cast<double>(factorial(n)));
  const double closed = sign / (n * std::pow(2.0, n - 1));
  table.checks.pairing_constant_residual = std::abs(via_gamma - closed);
  return table;
}

nlohmann::json CoefficientTable::to_json() const {
  nlohmann::json j;
  j["n"] = n;
  nlohmann::json a = nlohmann::json::array();
  for (const auto& [k, v] : alpha) a.push_back({{"k", k}, {"value", to_string(v)}});
  j["alpha"] = a;
  nlohmann::json s = nlohmann::json::array();
  for (const auto& [key, v] : sigma)
    s.push_back({{"m", key.first}, {"j", key.second}, {"value", to_string(v)}});
  j["sigma"] = s;
  j["theorem_constant"] = {theorem_constant.real(), theorem_constant.imag()};
  j["checks"] = {{"sigma_gamma_residual", checks.sigma_gamma_residual},
                 {"duplication_residual", checks.duplication_residual},
                 {"alpha_zero_is_inverse_factorial", checks.alpha_zero_is_inverse_factorial},
                 {"pairing_constant_residual", checks.pairing_constant_residual}};
  return j;
}

}  // namespace sfkit
