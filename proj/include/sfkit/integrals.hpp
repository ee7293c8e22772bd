#pragma once

#include <string>

#include "sfkit/path.hpp"
#include "sfkit/quadrature.hpp"

namespace sfkit {

struct SummabilityParams {
  double n = 2.0;    // p-summable order, > 1
  double eps = 1.0;  // heat parameter, > 0
  QuadratureOptions quad;

  void validate() const;
};

/// F = D (1 + D^2)^{-1/2}
BlockOperator bounded_transform(const BlockOperator& d);

/// tau(B f(D)) computed from the eigendecomposition of D, with a scalar path
/// for 1x1 blocks.
double trace_weighted_function(const BlockOperator& b, const BlockOperator& d,
                               const std::function<double(double)>& f);

/// C_{n/2} = integral of (1+x^2)^{-n/2} over the line, closed form.
double psummable_constant(double n);
/// Same constant by quadrature.
double psummable_constant_numeric(double n, const QuadratureOptions& quad = {});

struct IntegralReport {
  double value = 0.0;
  double quad_error = 0.0;
  int evaluations = 0;
  /// tau(chi(D0)) == tau(chi(D0 + B)); otherwise the value omits the
  /// endpoint correction terms.
  bool endpoints_matched = true;
  std::string note;
};

/// (1/C_{n/2}) int_0^1 tau(B (1 + (D0 + tB)^2)^{-n/2}) dt
IntegralReport cp_integral_psummable(const BlockOperator& d0, const BlockOperator& b, double n,
                                     const QuadratureOptions& quad = {});

/// (1/sqrt(pi)) int_0^1 tau(B exp(-(D0 + tB)^2)) dt
IntegralReport cp_integral_theta(const BlockOperator& d0, const BlockOperator& b,
                                 const QuadratureOptions& quad = {});

/// eta_eps(D) = sum w sign(lambda) erfc(|lambda| sqrt(eps))
double eta_approx(const BlockOperator& d, double eps);
/// eta_eps(D) by integrating (1/sqrt(pi)) int_eps^inf tau(D e^{-tD^2}) t^{-1/2} dt.
double eta_approx_quadrature(const BlockOperator& d, double eps, const QuadratureOptions& quad = {});

inline constexpr double kInvertibilityTol = 1e-6;

struct GetzlerReport {
  double value = 0.0;
  double integral_term = 0.0;
  double eta_a = 0.0;
  double eta_b = 0.0;
  double quad_error = 0.0;
};

/// sqrt(eps/pi) int tau(D' e^{-eps D^2}) dt + eta_eps(D_b)/2 - eta_eps(D_a)/2.
/// Throws DomainError when an endpoint has an eigenvalue within 1e-6 of 0.
GetzlerReport getzler_flow(const OperatorPath& path, double eps, const QuadratureOptions& quad = {});

/// sqrt(t/pi) int tau(B'_u e^{-t B_u^2}) du over the path interval. The
/// endpoints must be unitarily conjugate; this overload compares weighted
/// spectra (1e-9) and throws DomainError on mismatch.
IntegralReport eaf_trace_formula(const OperatorPath& path, double t,
                                 const QuadratureOptions& quad = {});
/// Variant with an explicit gauge g: requires ||B_b g - g B_a|| <= 1e-9 and g
/// a partial isometry (truncated models need not have g unitary).
IntegralReport eaf_trace_formula(const OperatorPath& path, double t, const BlockOperator& g,
                                 const QuadratureOptions& quad = {});

/// Truncated Fourier model on the circle: modes m in [-modes, modes],
/// B_0 = diag(m + offset), B_u = diag(m + offset + winding * cutoff(u)),
/// g e_m = e_{m - winding} (zero when that mode falls off the window).
/// With D = i d/dx and g multiplication by e^{i winding x}, g D g* = D + winding.
struct CircleModel {
  OperatorPath path;
  BlockOperator gauge;
};
CircleModel circle_model(int modes = 64, double offset = 0.3, int winding = 1);

/// tau(F' |1 - F^2|^{-r} exp(-|1 - F^2|^{-sigma})), the integrand of the
/// bounded-operator heuristic. For commuting paths with r = 3/2, sigma = 1,
/// (e/sqrt(pi)) times its integral equals the theta-summable formula.
double bounded_heuristic_integrand(const BlockOperator& f, const BlockOperator& f_dot,
                                   double r = 1.5, double sigma = 1.0);

}  // namespace sfkit
