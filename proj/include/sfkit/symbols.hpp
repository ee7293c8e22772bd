#pragma once

#include <functional>
#include <vector>

#include "sfkit/quadrature.hpp"
#include "sfkit/trig.hpp"

namespace sfkit {

using ZetaFunction = std::function<double(const std::vector<double>&)>;

/// x_part(x) * zeta_part(zeta) with a scalar trig polynomial in x.
struct SymbolTerm {
  TrigPolynomial x_part;
  ZetaFunction zeta_part;
};

/// Almost periodic symbol a(x, zeta) = sum of separable terms. `principal`
/// holds the -n homogeneous part when it is known; `full` the whole symbol.
struct APSymbol {
  int n = 1;
  double order = 0.0;
  std::vector<SymbolTerm> full;
  std::vector<SymbolTerm> principal;

  /// x-independent symbol k(zeta) on R^n
  static APSymbol radial(int n, double order, ZetaFunction full, ZetaFunction principal = nullptr);
};

/// Fixed quadrature on the unit sphere S^{n-1}, n in {1, 2, 3}.
struct SphereRule {
  std::vector<std::vector<double>> points;
  std::vector<double> weights;
};
SphereRule sphere_rule(int n);

/// integral of f over S^{n-1}
double sphere_integral(int n, const ZetaFunction& f);

/// (1/n) sum over principal terms of Re tr bohr_mean(x_part) * int_{S^{n-1}} h.
/// Throws DomainError when a principal term fails h(r zeta) = r^{-n} h(zeta).
double dixmier_density(const APSymbol& a);

/// vol{zeta : a(zeta) > s} for an x-independent symbol that decreases along
/// rays beyond the origin.
double counting_function(const APSymbol& a, double s);

/// s * N(s), which tends to the density as s -> 0
double scaled_counting(const APSymbol& a, double s);

/// sum over full terms of Re tr bohr_mean(x_part) * int_{R^n} k(zeta) d zeta.
/// Requires order < -n.
double weyl_trace(const APSymbol& a, const QuadratureOptions& quad = {});

}  // namespace sfkit
