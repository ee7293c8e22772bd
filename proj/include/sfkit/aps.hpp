#pragma once

#include <vector>

#include "sfkit/path.hpp"

namespace sfkit {

struct MonodromyOptions {
  int steps = 64;           // starting step count, >= 64
  int max_steps = 1 << 16;
  double tol = 1e-8;        // accepted once halving the step changes Phi by less
};

/// Phi(t_end) for Phi' = -B(t) Phi, Phi(a) = 1, classical RK4 with a fixed
/// step count.
BlockOperator propagate(const OperatorPath& path, double t_end, int steps);

/// Phi(b), doubling the step count until two successive results agree.
BlockOperator monodromy(const OperatorPath& path, const MonodromyOptions& opts = {});

/// w' + B(t) w = 0 on the path interval with w(a) in ker Q and w(b) in ran P.
struct BoundaryValueProblem {
  OperatorPath path;
  Projection q;
  Projection p;
  MonodromyOptions integrator;
};

struct ApsReport {
  double index = 0.0;
  double kernel = 0.0;    // tau-dimension of solutions
  double cokernel = 0.0;  // tau-dimension of adjoint solutions
  /// smallest sine above the containment threshold, across both counts
  double min_separated_sine = 1.0;
};

inline constexpr double kContainmentSine = 1e-7;
inline constexpr double kSeparationSine = 1e-4;

/// Kernel: dim{w0 in ker Q : Phi(b) w0 in ran P}, counted from the sines of
/// the principal angles between Phi(b)(ker Q) and ran P. Cokernel: the same
/// count for the reversed path with the roles of P and Q swapped. Sines in
/// (1e-7, 1e-4] raise PrecisionError.
ApsReport aps_index(const BoundaryValueProblem& bvp);

}  // namespace sfkit
