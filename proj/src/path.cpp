#include "sfkit/path.hpp"

#include <algorithm>
#include <cmath>

#include "sfkit/errors.hpp"

namespace sfkit {

OperatorPath::OperatorPath(AlgebraPtr algebra, Evaluator evaluator, double a, double b,
                           std::optional<Evaluator> derivative, std::vector<double> breakpoints,
                           bool piecewise_c1)
    : algebra_(std::move(algebra)),
      evaluator_(std::move(evaluator)),
      a_(a),
      b_(b),
      derivative_(std::move(derivative)),
      breakpoints_(std::move(breakpoints)),
      piecewise_c1_(piecewise_c1) {
  if (!(b_ > a_)) throw DomainError("path interval must satisfy a < b");
  if (!evaluator_) throw DomainError("path has no evaluator");
  std::sort(breakpoints_.begin(), breakpoints_.end());
}

BlockOperator OperatorPath::at(double t) const {
  BlockOperator op = evaluator_(t);
  if (!op.is_hermitian()) throw DomainError("path sample at t=" + std::to_string(t) + " is not Hermitian");
  return op;
}

BlockOperator OperatorPath::derivative(double t) const {
  if (derivative_) return (*derivative_)(t);
  const double h = 1e-5 * (b_ - a_);
  const double lo = std::max(a_, t - h);
  const double hi = std::min(b_, t + h);
  return (1.0 / (hi - lo)) * (evaluator_(hi) - evaluator_(lo));
}

double OperatorPath::lipschitz_estimate(int samples) const {
  double best = 0.0;
  const double step = (b_ - a_) / samples;
  BlockOperator prev = evaluator_(a_);
  for (int i = 1; i <= samples; ++i) {
    BlockOperator cur = evaluator_(a_ + i * step);
    best = std::max(best, (cur - prev).norm() / step);
    prev = std::move(cur);
  }
  return best;
}

OperatorPath OperatorPath::reversed() const {
  const double a = a_, b = b_;
  Evaluator eval = [e = evaluator_, a, b](double t) { return e(a + b - t); };
  std::optional<Evaluator> deriv;
  if (derivative_) deriv = [d = *derivative_, a, b](double t) { return -1.0 * d(a + b - t); };
  std::vector<double> bps;
  for (double p : breakpoints_) bps.push_back(a + b - p);
  return OperatorPath(algebra_, std::move(eval), a, b, std::move(deriv), std::move(bps), piecewise_c1_);
}

OperatorPath linear_path(const BlockOperator& start, const BlockOperator& end, double a, double b) {
  require_same_algebra(start, end, "linear_path");
  const BlockOperator diff = end - start;
  const double len = b - a;
  auto eval = [start, diff, a, len](double t) { return start + ((t - a) / len) * diff; };
  auto deriv = [scaled = (1.0 / len) * diff](double) { return scaled; };
  return OperatorPath(start.algebra(), eval, a, b, deriv);
}

OperatorPath piecewise_linear_path(std::vector<double> knots, std::vector<BlockOperator> ops) {
  if (knots.size() < 2 || knots.size() != ops.size())
    throw DomainError("piecewise path needs matching knots and operators (at least two)");
  for (std::size_t i = 1; i < knots.size(); ++i) {
    if (!(knots[i] > knots[i - 1])) throw DomainError("piecewise path knots must increase");
    require_same_algebra(ops[0], ops[i], "piecewise_linear_path");
  }
  auto segment = [knots](double t) {
    auto it = std::upper_bound(knots.begin(), knots.end(), t);
    std::size_t i = it == knots.begin() ? 0 : static_cast<std::size_t>(it - knots.begin()) - 1;
    return std::min(i, knots.size() - 2);
  };
  auto eval = [knots, ops, segment](double t) {
    const std::size_t i = segment(t);
    const double s = (t - knots[i]) / (knots[i + 1] - knots[i]);
    return (1.0 - s) * ops[i] + s * ops[i + 1];
  };
  auto deriv = [knots, ops, segment](double t) {
    const std::size_t i = segment(t);
    return (1.0 / (knots[i + 1] - knots[i])) * (ops[i + 1] - ops[i]);
  };
  std::vector<double> interior(knots.begin() + 1, knots.end() - 1);
  const double a = knots.front(), b = knots.back();
  return OperatorPath(ops[0].algebra(), eval, a, b, deriv, std::move(interior));
}

OperatorPath gauge_path(const BlockOperator& d, const BlockOperator& u) {
  require_same_algebra(d, u, "gauge_path");
  if (!d.is_hermitian()) throw DomainError("gauge_path: D is not Hermitian");
  // u[D,u*] = u D u* - D for unitary u
  const BlockOperator step = (u * d * u.adjoint() - d).hermitian_part();
  return linear_path(d, d + step, 0.0, 1.0);
}

namespace {
double bump(double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; }
double bump_derivative(double s) { return s > 0.0 ? std::exp(-1.0 / s) / (s * s) : 0.0; }
}  // namespace

double smooth_cutoff(double u) {
  const double s = 2.0 * (u - 0.25);
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  const double p = bump(s), q = bump(1.0 - s);
  return p / (p + q);
}

double smooth_cutoff_derivative(double u) {
  const double s = 2.0 * (u - 0.25);
  if (s <= 0.0 || s >= 1.0) return 0.0;
  const double p = bump(s), q = bump(1.0 - s);
  const double dp = bump_derivative(s), dq = -bump_derivative(1.0 - s);
  return 2.0 * (dp * q - p * dq) / ((p + q) * (p + q));
}

OperatorPath step_translation_path(double lo, double hi, double h, double shift) {
  if (!(h > 0.0) || !(hi > lo)) throw DomainError("step translation: need lo < hi and h > 0");
  const auto count = static_cast<std::size_t>(std::llround((hi - lo) / h)) + 1;
  std::vector<double> grid(count);
  for (std::size_t i = 0; i < count; ++i) grid[i] = lo + static_cast<double>(i) * h;
  auto algebra = WeightedBlockAlgebra::make(std::vector<int>(count, 1), std::vector<double>(count, h));
  auto eval = [grid, algebra, shift](double t) {
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) v[i] = std::clamp(grid[i] + t * shift, -1.0, 1.0);
    return BlockOperator::diagonal(algebra, v);
  };
  auto deriv = [grid, algebra, shift](double t) {
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
      v[i] = std::abs(grid[i] + t * shift) < 1.0 ? shift : 0.0;
    return BlockOperator::diagonal(algebra, v);
  };
  return OperatorPath(algebra, eval, 0.0, 1.0, deriv, {}, true);
}

}  // namespace sfkit
