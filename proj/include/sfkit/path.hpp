#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "sfkit/semifinite.hpp"

namespace sfkit {

/// A norm-continuous family t -> B_t of Hermitian operators on [a, b],
/// represented by an evaluator rather than stored samples.
class OperatorPath {
 public:
  using Evaluator = std::function<BlockOperator(double)>;

  OperatorPath(AlgebraPtr algebra, Evaluator evaluator, double a, double b,
               std::optional<Evaluator> derivative = std::nullopt,
               std::vector<double> breakpoints = {}, bool piecewise_c1 = true);

  const AlgebraPtr& algebra() const { return algebra_; }
  double a() const { return a_; }
  double b() const { return b_; }
  bool piecewise_c1() const { return piecewise_c1_; }
  bool has_exact_derivative() const { return derivative_.has_value(); }
  /// Interior points where the path may fail to be C^1.
  const std::vector<double>& breakpoints() const { return breakpoints_; }

  /// B_t; throws DomainError if the sample is not Hermitian.
  BlockOperator at(double t) const;

  /// dB/dt: exact when an evaluator was supplied, otherwise central
  /// differences with step 1e-5 (b - a), one-sided at the ends.
  BlockOperator derivative(double t) const;

  /// max ||B_{t_i+1} - B_{t_i}|| / |t_i+1 - t_i| over a uniform grid
  double lipschitz_estimate(int samples = 64) const;

  /// t -> B(a + b - t)
  OperatorPath reversed() const;

 private:
  AlgebraPtr algebra_;
  Evaluator evaluator_;
  double a_, b_;
  std::optional<Evaluator> derivative_;
  std::vector<double> breakpoints_;
  bool piecewise_c1_;
};

/// B(t) = B0 + (t - a)/(b - a) (B1 - B0)
OperatorPath linear_path(const BlockOperator& start, const BlockOperator& end, double a = 0.0,
                         double b = 1.0);

/// Piecewise-linear interpolation through (knots[i], ops[i]).
OperatorPath piecewise_linear_path(std::vector<double> knots, std::vector<BlockOperator> ops);

/// Gauge path D + t u[D,u*] on [0,1]; ends at u D u*.
OperatorPath gauge_path(const BlockOperator& d, const BlockOperator& u);

/// Smooth step: 0 for u <= 1/4, 1 for u >= 3/4, C^infinity in between.
double smooth_cutoff(double u);
double smooth_cutoff_derivative(double u);

/// Translated clamp-function model: multiplication by B_0(r) = clamp(r, -1, 1)
/// sampled on the grid lo, lo+h, ..., hi with trace weight h per point, and
/// B_t(r) = B_0(r + t*shift) on [0,1]. The flow approximates `shift`.
OperatorPath step_translation_path(double lo, double hi, double h, double shift);

}  // namespace sfkit
