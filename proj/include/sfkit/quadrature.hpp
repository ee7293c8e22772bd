#pragma once

#include <functional>
#include <vector>

#include "sfkit/linalg.hpp"

namespace sfkit {

struct QuadratureOptions {
  double abs_tol = 1e-9;
  double rel_tol = 0.0;
  int max_subdivisions = 1 << 14;
};

template <class T>
struct QuadratureResult {
  T value{};
  double error = 0.0;
  int intervals = 0;
  int evaluations = 0;
};

// Globally adaptive Gauss-Kronrod (7/15) quadrature on [a, b]. Optional
// interior breakpoints seed the initial partition. The final sum runs over
// intervals in ascending order so results do not depend on refinement order.
// Throws ConvergenceError when the subdivision budget runs out.
QuadratureResult<double> integrate(const std::function<double(double)>& f, double a, double b,
                                   const QuadratureOptions& opts = {},
                                   const std::vector<double>& breakpoints = {});

QuadratureResult<Complex> integrate_complex(const std::function<Complex(double)>& f, double a,
                                            double b, const QuadratureOptions& opts = {},
                                            const std::vector<double>& breakpoints = {});

/// integral over [a, inf) via t = a + s/(1-s)
QuadratureResult<double> integrate_to_infinity(const std::function<double(double)>& f, double a,
                                               const QuadratureOptions& opts = {});

/// integral over the real line via x = s/(1-s^2)
QuadratureResult<double> integrate_real_line(const std::function<double(double)>& f,
                                             const QuadratureOptions& opts = {});

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace sfkit
