#pragma once

#include <string>
#include <vector>

#include "sfkit/path.hpp"

namespace sfkit {

struct FlowSegment {
  double t_lo = 0.0;
  double t_hi = 0.0;
  double contribution = 0.0;
  double cumulative = 0.0;
};

struct FlowReport {
  double value = 0.0;
  std::string method;
  std::vector<FlowSegment> segments;
  /// Brackets [t_lo, t_hi] of segments with a nonzero contribution.
  std::vector<std::pair<double, double>> crossings;
  double min_gap = 0.0;  // smallest |eigenvalue| seen at a sample point
  int refinement_depth = 0;

  nlohmann::json to_json() const;
  /// One row per segment: t_lo,t_hi,ec,cumulative
  std::string to_csv() const;
};

struct FlowOptions {
  int initial_segments = 8;
  int max_depth = 24;
  double stability_tol = 1e-12;
  double kernel_tol = kDefaultKernelTol;
  double rank_tol = kDefaultRankTol;
};

/// tau(chi(B)) together with the smallest |eigenvalue| of B.
struct ChiTrace {
  double trace = 0.0;
  double min_abs_eigenvalue = 0.0;
};
ChiTrace chi_trace(const BlockOperator& b, double kernel_tol = kDefaultKernelTol);

/// Sum of essential codimensions ec(chi(B_{t_i-1}), chi(B_{t_i})) over an
/// adaptively bisected partition. A subinterval is accepted once one more
/// bisection changes its value by less than stability_tol.
FlowReport spectral_flow_phillips(const OperatorPath& path, const FlowOptions& opts = {});

/// Accumulates tau(chi(B_{t_i+1})) - tau(chi(B_{t_i})) over a uniform grid of
/// `samples` points, bisecting segments that carry a contribution next to a
/// near-zero eigenvalue (|lambda| < 10 kernel_tol).
FlowReport spectral_flow_crossing_oracle(const OperatorPath& path, int samples,
                                         const FlowOptions& opts = {});

/// B(t) = (1-t)(2Q-1) + t(2P-1) on [0,1].
OperatorPath involution_path(const Projection& p, const Projection& q);

/// Odd real function used in tau(f(P-Q))/f(1).
class OddFunction {
 public:
  static OddFunction identity();
  static OddFunction cube();
  static OddFunction fifth();
  static OddFunction half_pi_sine();
  /// sum_k coeffs[k] x^k; even coefficients must vanish.
  static OddFunction polynomial(std::vector<double> coeffs);
  static OddFunction named(const std::string& name);

  double operator()(double x) const;
  const std::string& name() const { return name_; }

 private:
  enum class Kind { polynomial, sine };
  OddFunction(std::string name, Kind kind, std::vector<double> coeffs);
  void validate() const;

  std::string name_;
  Kind kind_;
  std::vector<double> coeffs_;
};

/// (1/f(1)) tau(f(P - Q)).
double odd_function_flow(const Projection& p, const Projection& q, const OddFunction& f);

struct KernelDecomposition {
  std::vector<Matrix> ker_q_in_ran_p;  // ker(Q) ∩ ran(P), per block
  std::vector<Matrix> ker_p_in_ran_q;  // ker(P) ∩ ran(Q), per block
  double dim_ker_q_in_ran_p = 0.0;     // tau-dimensions
  double dim_ker_p_in_ran_q = 0.0;
};
KernelDecomposition kernel_decomposition(const Projection& p, const Projection& q,
                                         double rank_tol = kDefaultRankTol);

struct IntertwinerDiagnostics {
  BlockOperator u;
  double max_residual = 0.0;  // max_t ||U B(t) - B(1-t) U||
};
IntertwinerDiagnostics intertwiner_check(const Projection& p, const Projection& q, int grid = 21);

}  // namespace sfkit
