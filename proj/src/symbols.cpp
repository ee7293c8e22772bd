#include "sfkit/symbols.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "sfkit/errors.hpp"
#include "sfkit/toeplitz.hpp"

namespace sfkit {
namespace {

void require_dimension(int n) {
  if (n < 1 || n > 3) throw DomainError("symbol dimension must be 1, 2 or 3");
}

double constant_mean(const TrigPolynomial& x_part) { return bohr_mean(x_part).trace().real(); }

bool x_independent(const SymbolTerm& t) {
  for (const auto& term : t.x_part.terms())
    for (const auto& f : term.freq)
      if (!same(f, Frequency::rational(0))) return false;
  return true;
}

void check_homogeneity(const ZetaFunction& h, int n) {
  const SphereRule rule = sphere_rule(n);
  const std::size_t stride = std::max<std::size_t>(1, rule.points.size() / 17);
  for (std::size_t i = 0; i < rule.points.size(); i += stride)
    for (double r : {0.5, 2.0, 3.7}) {
      std::vector<double> scaled = rule.points[i];
      for (double& c : scaled) c *= r;
      const double base = h(rule.points[i]);
      const double got = h(scaled);
      const double want = std::pow(r, -n) * base;
      if (std::abs(got - want) > 1e-9 * std::max(1.0, std::abs(want)))
        throw DomainError("principal symbol is not homogeneous of degree -" + std::to_string(n));
    }
}

}  // namespace

APSymbol APSymbol::radial(int n, double order, ZetaFunction full, ZetaFunction principal) {
  require_dimension(n);
  APSymbol a;
  a.n = n;
  a.order = order;
  const TrigPolynomial one = TrigPolynomial::identity(1, n);
  if (full) a.full.push_back({one, std::move(full)});
  if (principal) a.principal.push_back({one, std::move(principal)});
  return a;
}

SphereRule sphere_rule(int n) {
  require_dimension(n);
  SphereRule rule;
  if (n == 1) {
    rule.points = {{1.0}, {-1.0}};
    rule.weights = {1.0, 1.0};
    return rule;
  }
  constexpr int kPhi = 64;
  const double dphi = 2.0 * std::numbers::pi / kPhi;
  if (n == 2) {
    for (int k = 0; k < kPhi; ++k) {
      rule.points.push_back({std::cos(k * dphi), std::sin(k * dphi)});
      rule.weights.push_back(dphi);
    }
    return rule;
  }
  std::vector<double> z, w;
  gauss_legendre(32, z, w);
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double rho = std::sqrt(1.0 - z[i] * z[i]);
    for (int k = 0; k < kPhi; ++k) {
      rule.points.push_back({rho * std::cos(k * dphi), rho * std::sin(k * dphi), z[i]});
      rule.weights.push_back(w[i] * dphi);
    }
  }
  return rule;
}

double sphere_integral(int n, const ZetaFunction& f) {
  const SphereRule rule = sphere_rule(n);
  double total = 0.0;
  for (std::size_t i = 0; i < rule.points.size(); ++i) total += rule.weights[i] * f(rule.points[i]);
  return total;
}

double dixmier_density(const APSymbol& a) {
  require_dimension(a.n);
  if (a.principal.empty()) throw DomainError("dixmier_density needs the -n homogeneous part");
  double total = 0.0;
  for (const auto& t : a.principal) {
    if (t.x_part.N() != 1 || t.x_part.n() != a.n)
      throw StructuralError("symbol x-part must be a scalar trig polynomial on R^n");
    check_homogeneity(t.zeta_part, a.n);
    total += constant_mean(t.x_part) * sphere_integral(a.n, t.zeta_part);
  }
  return total / a.n;
}

double counting_function(const APSymbol& a, double s) {
  require_dimension(a.n);
  if (!(s > 0.0)) throw DomainError("counting_function needs s > 0");
  for (const auto& t : a.full)
    if (!x_independent(t)) throw DomainError("counting_function needs an x-independent symbol");
  auto value = [&a](const std::vector<double>& zeta) {
    double v = 0.0;
    for (const auto& t : a.full) v += constant_mean(t.x_part) * t.zeta_part(zeta);
    return v;
  };
  const SphereRule rule = sphere_rule(a.n);
  double volume = 0.0;
  for (std::size_t i = 0; i < rule.points.size(); ++i) {
    const auto& omega = rule.points[i];
    auto along = [&](double r) {
      std::vector<double> z = omega;
      for (double& c : z) c *= r;
      return value(z);
    };
    if (!(along(0.0) > s)) continue;
    double lo = 0.0, hi = 1.0;
    while (along(hi) > s) {
      lo = hi;
      hi *= 2.0;
      if (hi > 1e300) throw DomainError("symbol does not decay along a ray");
    }
    for (int it = 0; it < 200 && hi - lo > 1e-13 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      (along(mid) > s ? lo : hi) = mid;
    }
    const double radius = 0.5 * (lo + hi);
    volume += rule.weights[i] * std::pow(radius, a.n) / a.n;
  }
  return volume;
}

double scaled_counting(const APSymbol& a, double s) { return s * counting_function(a, s); }

double weyl_trace(const APSymbol& a, const QuadratureOptions& quad) {
  require_dimension(a.n);
  if (!(a.order < -a.n))
    throw DomainError("weyl_trace needs order < -n for zeta-integrability");
  double total = 0.0;
  for (const auto& t : a.full) {
    if (t.x_part.N() != 1 || t.x_part.n() != a.n)
      throw StructuralError("symbol x-part must be a scalar trig polynomial on R^n");
    const double mean = constant_mean(t.x_part);
    if (mean == 0.0) continue;
    double integral = 0.0;
    if (a.n == 1) {
      integral = integrate_real_line([&](double z) { return t.zeta_part({z}); }, quad).value;
    } else {
      integral = sphere_integral(a.n, [&](const std::vector<double>& omega) {
        return integrate_to_infinity(
                   [&](double r) {
                     std::vector<double> z = omega;
                     for (double& c : z) c *= r;
                     return std::pow(r, a.n - 1) * t.zeta_part(z);
                   },
                   0.0, quad)
            .value;
      });
    }
    total += mean * integral;
  }
  return total;
}

}  // namespace sfkit
