#include "sfkit/aps.hpp"

#include <algorithm>
#include <sstream>

#include "sfkit/errors.hpp"

namespace sfkit {
namespace {

struct Count {
  double dim = 0.0;
  double min_separated = 1.0;
};

// tau-dim of {w0 in ker q : phi w0 in ran p}
Count count_solutions(const BlockOperator& phi, const Projection& q, const Projection& p) {
  const auto ker_q = q.complement().range_bases();
  const auto& w = phi.algebra()->weights();
  Count out;
  for (std::size_t k = 0; k < phi.block_count(); ++k) {
    if (ker_q[k].cols() == 0) continue;
    const Matrix image = orthonormal_columns(phi.block(k) * ker_q[k], 1e-12);
    if (image.cols() != ker_q[k].cols())
      throw PrecisionError("propagator lost rank on ker Q", static_cast<double>(image.cols()));
    const Matrix off = (Matrix::Identity(image.rows(), image.rows()) - p.op().block(k)) * image;
    const RealVector sines = singular_values(off);
    int contained = 0;
    for (Eigen::Index i = 0; i < sines.size(); ++i) {
      const double s = sines(i);
      if (s <= kContainmentSine) {
        ++contained;
      } else if (s <= kSeparationSine) {
        std::ostringstream msg;
        msg << "aps_index: principal angle sine " << s
            << " is neither contained nor separated (block " << k << ")";
        throw PrecisionError(msg.str(), s);
      } else {
        out.min_separated = std::min(out.min_separated, s);
      }
    }
    out.dim += w[k] * contained;
  }
  return out;
}

}  // namespace

BlockOperator propagate(const OperatorPath& path, double t_end, int steps) {
  if (steps < 1) throw DomainError("propagate needs a positive step count");
  const double h = (t_end - path.a()) / steps;
  BlockOperator phi = BlockOperator::identity(path.algebra());
  BlockOperator b0 = path.at(path.a());
  for (int i = 0; i < steps; ++i) {
    const double t = path.a() + h * i;
    const BlockOperator bm = path.at(t + 0.5 * h);
    const BlockOperator b1 = path.at(i + 1 == steps ? t_end : t + h);
    const BlockOperator k1 = -1.0 * (b0 * phi);
    const BlockOperator k2 = -1.0 * (bm * (phi + (0.5 * h) * k1));
    const BlockOperator k3 = -1.0 * (bm * (phi + (0.5 * h) * k2));
    const BlockOperator k4 = -1.0 * (b1 * (phi + h * k3));
    phi += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    b0 = b1;
  }
  return phi;
}

BlockOperator monodromy(const OperatorPath& path, const MonodromyOptions& opts) {
  if (opts.steps < 64) throw DomainError("monodromy needs at least 64 steps");
  int steps = opts.steps;
  BlockOperator previous = propagate(path, path.b(), steps);
  double change = 0.0;
  while (2 * steps <= opts.max_steps) {
    steps *= 2;
    BlockOperator next = propagate(path, path.b(), steps);
    change = (next - previous).norm();
    if (change < opts.tol) return next;
    previous = std::move(next);
  }
  throw ConvergenceError("monodromy did not converge within the step budget", change);
}

ApsReport aps_index(const BoundaryValueProblem& bvp) {
  if (!(*bvp.q.algebra() == *bvp.path.algebra()) || !(*bvp.p.algebra() == *bvp.path.algebra()))
    throw StructuralError("aps_index: projections and path live on different algebras");
  const BlockOperator phi = monodromy(bvp.path, bvp.integrator);
  // adjoint problem z' = B z with z(b) in ker P, z(a) in ran Q, read backwards in time
  const BlockOperator phi_back = monodromy(bvp.path.reversed(), bvp.integrator);
  const Count kernel = count_solutions(phi, bvp.q, bvp.p);
  const Count cokernel = count_solutions(phi_back, bvp.p, bvp.q);
  ApsReport out;
  out.kernel = kernel.dim;
  out.cokernel = cokernel.dim;
  out.index = kernel.dim - cokernel.dim;
  out.min_separated_sine = std::min(kernel.min_separated, cokernel.min_separated);
  return out;
}

}  // namespace sfkit
