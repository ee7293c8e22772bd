#include "sfkit/random.hpp"

#include <cmath>
#include <numbers>

#include "sfkit/errors.hpp"

namespace sfkit {

// Distributions are written out by hand: std::uniform_real_distribution and
// std::normal_distribution are implementation-defined, which would make
// seeded instances differ between standard libraries.

double Random::uniform(double lo, double hi) {
  const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

int Random::integer(int lo, int hi) {
  if (hi < lo) throw DomainError("empty integer range");
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<int>(engine_() % span);
}

double Random::normal() {
  // Box-Muller, one value per call
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Matrix Random::gaussian(int rows, int cols) {
  Matrix m(rows, cols);
  const double s = std::sqrt(0.5);
  for (int c = 0; c < cols; ++c)
    for (int r = 0; r < rows; ++r) {
      const double re = normal();
      const double im = normal();
      m(r, c) = Complex(s * re, s * im);
    }
  return m;
}

Matrix Random::haar_unitary(int n) {
  const Matrix z = gaussian(n, n);
  Eigen::HouseholderQR<Matrix> qr(z);
  Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

Matrix Random::hermitian(int n, double scale) {
  const Matrix g = gaussian(n, n);
  return (0.5 * scale) * (g + g.adjoint());
}

Matrix Random::projection(int n, int rank) {
  if (rank < 0 || rank > n) throw DomainError("projection rank out of range");
  const Matrix u = haar_unitary(n);
  const Matrix v = u.leftCols(rank);
  Matrix p = v * v.adjoint();
  return 0.5 * (p + p.adjoint());
}

AlgebraPtr Random::algebra(int max_blocks, int max_dim) {
  static const double choices[3] = {0.5, 1.0, std::sqrt(2.0)};
  const int blocks = integer(1, max_blocks);
  std::vector<int> dims;
  std::vector<double> weights;
  for (int k = 0; k < blocks; ++k) {
    dims.push_back(integer(1, max_dim));
    weights.push_back(choices[integer(0, 2)]);
  }
  return WeightedBlockAlgebra::make(std::move(dims), std::move(weights));
}

BlockOperator Random::hermitian(const AlgebraPtr& algebra, double scale) {
  std::vector<Matrix> blocks;
  for (int d : algebra->block_dims()) blocks.push_back(hermitian(d, scale));
  return BlockOperator(algebra, std::move(blocks));
}

BlockOperator Random::unitary(const AlgebraPtr& algebra) {
  std::vector<Matrix> blocks;
  for (int d : algebra->block_dims()) blocks.push_back(haar_unitary(d));
  return BlockOperator(algebra, std::move(blocks));
}

Projection Random::projection(const AlgebraPtr& algebra) {
  std::vector<int> ranks;
  for (int d : algebra->block_dims()) ranks.push_back(integer(0, d));
  return projection(algebra, ranks);
}

Projection Random::projection(const AlgebraPtr& algebra, const std::vector<int>& ranks) {
  if (ranks.size() != algebra->block_count()) throw StructuralError("one rank per block expected");
  std::vector<Matrix> blocks;
  for (std::size_t k = 0; k < ranks.size(); ++k)
    blocks.push_back(projection(algebra->block_dims()[k], ranks[k]));
  return Projection(BlockOperator(algebra, std::move(blocks)));
}

OperatorPath Random::piecewise_path(const AlgebraPtr& algebra, int knots, double scale) {
  if (knots < 2) throw DomainError("a path needs at least two knots");
  std::vector<double> ts;
  std::vector<BlockOperator> ops;
  for (int i = 0; i < knots; ++i) {
    ts.push_back(static_cast<double>(i) / (knots - 1));
    ops.push_back(hermitian(algebra, scale));
  }
  return piecewise_linear_path(std::move(ts), std::move(ops));
}

}  // namespace sfkit
