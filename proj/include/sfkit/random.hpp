#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "sfkit/path.hpp"

namespace sfkit {

/// Seeded generator for random test instances. Same seed, same instances.
class Random {
 public:
  explicit Random(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo = 0.0, double hi = 1.0);
  int integer(int lo, int hi);  // inclusive
  double normal();
  std::mt19937_64& engine() { return engine_; }

  /// complex Gaussian entries with E|z|^2 = 1
  Matrix gaussian(int rows, int cols);
  /// Haar unitary: QR of a Gaussian matrix with the phases of R's diagonal removed
  Matrix haar_unitary(int n);
  Matrix hermitian(int n, double scale = 1.0);
  /// U diag(1,..,1,0,..,0) U* with the given rank
  Matrix projection(int n, int rank);

  /// 1..max_blocks blocks of size 1..max_dim, weights drawn from {0.5, 1, sqrt 2}
  AlgebraPtr algebra(int max_blocks, int max_dim);
  BlockOperator hermitian(const AlgebraPtr& algebra, double scale = 1.0);
  BlockOperator unitary(const AlgebraPtr& algebra);
  /// per block rank uniform in [0, dim]
  Projection projection(const AlgebraPtr& algebra);
  /// per block ranks fixed by the caller
  Projection projection(const AlgebraPtr& algebra, const std::vector<int>& ranks);

  /// piecewise-linear path through `knots` random Hermitian operators on [0,1]
  OperatorPath piecewise_path(const AlgebraPtr& algebra, int knots, double scale = 1.0);

 private:
  std::mt19937_64 engine_;
};

}  // namespace sfkit
