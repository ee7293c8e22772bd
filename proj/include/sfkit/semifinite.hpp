#pragma once

// Finite model of a semifinite von Neumann algebra: a direct sum of matrix
// blocks, each carrying a positive trace weight. Non-integer weights make
// dimensions (and hence indices and flows) real-valued.

#include <memory>
#include <vector>

#include <json.hpp>

#include "sfkit/linalg.hpp"

namespace sfkit {

inline constexpr double kDefaultRankTol = 1e-8;    // relative, on singular values
inline constexpr double kDefaultKernelTol = 1e-8;  // absolute, on eigenvalues
inline constexpr double kHermitianTol = 1e-12;

class WeightedBlockAlgebra {
 public:
  WeightedBlockAlgebra(std::vector<int> block_dims, std::vector<double> weights);

  /// Single block of size n with weight 1 (the type I case).
  static std::shared_ptr<const WeightedBlockAlgebra> matrices(int n);
  static std::shared_ptr<const WeightedBlockAlgebra> make(std::vector<int> block_dims,
                                                          std::vector<double> weights);

  const std::vector<int>& block_dims() const { return dims_; }
  const std::vector<double>& weights() const { return weights_; }
  std::size_t block_count() const { return dims_.size(); }
  int total_dim() const;
  /// trace of the identity
  double total_weight() const;

  bool operator==(const WeightedBlockAlgebra& other) const {
    return dims_ == other.dims_ && weights_ == other.weights_;
  }

 private:
  std::vector<int> dims_;
  std::vector<double> weights_;
};

using AlgebraPtr = std::shared_ptr<const WeightedBlockAlgebra>;

class BlockOperator {
 public:
  BlockOperator(AlgebraPtr algebra, std::vector<Matrix> blocks);

  static BlockOperator zero(AlgebraPtr algebra);
  static BlockOperator identity(AlgebraPtr algebra);
  static BlockOperator scalar(AlgebraPtr algebra, Complex value);
  /// Diagonal operator on an algebra of 1x1 blocks.
  static BlockOperator diagonal(AlgebraPtr algebra, const std::vector<double>& values);

  const AlgebraPtr& algebra() const { return algebra_; }
  const std::vector<Matrix>& blocks() const { return blocks_; }
  const Matrix& block(std::size_t k) const { return blocks_[k]; }
  std::size_t block_count() const { return blocks_.size(); }

  BlockOperator adjoint() const;
  bool is_hermitian(double tol = kHermitianTol) const;
  /// max over blocks of the operator norm
  double norm() const;
  /// Replace each block by (A + A*)/2.
  BlockOperator hermitian_part() const;

  BlockOperator& operator+=(const BlockOperator& other);
  BlockOperator& operator-=(const BlockOperator& other);
  BlockOperator& operator*=(Complex s);

  friend BlockOperator operator+(BlockOperator a, const BlockOperator& b) { return a += b; }
  friend BlockOperator operator-(BlockOperator a, const BlockOperator& b) { return a -= b; }
  friend BlockOperator operator*(BlockOperator a, Complex s) { return a *= s; }
  friend BlockOperator operator*(Complex s, BlockOperator a) { return a *= s; }
  friend BlockOperator operator*(double s, BlockOperator a) { return a *= Complex(s, 0.0); }
  friend BlockOperator operator*(const BlockOperator& a, const BlockOperator& b);

 private:
  AlgebraPtr algebra_;
  std::vector<Matrix> blocks_;
};

/// Throws StructuralError unless both operators live on equal algebras.
void require_same_algebra(const BlockOperator& a, const BlockOperator& b, const char* where);

/// A self-adjoint idempotent. Construction validates the invariants.
class Projection {
 public:
  explicit Projection(BlockOperator op);

  const BlockOperator& op() const { return op_; }
  const AlgebraPtr& algebra() const { return op_.algebra(); }
  Projection complement() const;
  /// Orthonormal basis of the range, per block.
  std::vector<Matrix> range_bases() const;

 private:
  BlockOperator op_;
};

/// tau(A) = sum_k weight_k * Tr(A_k)
Complex trace(const BlockOperator& a);

/// Hermitian functional calculus f(B), per block.
BlockOperator apply_function(const BlockOperator& b, const std::function<double(double)>& f);

/// Weighted, sorted eigenvalues of a Hermitian operator.
struct WeightedSpectrum {
  std::vector<double> values;
  std::vector<double> weights;
};
WeightedSpectrum weighted_spectrum(const BlockOperator& b);

/// chi_[0,inf)(B). Eigenvalues with |lambda| <= kernel_tol count as zero and
/// are included in the range.
Projection spectral_projection_nonneg(const BlockOperator& b, double kernel_tol = kDefaultKernelTol);

/// (P.Q)-index of T in the corner P N Q: tau[ker_Q(T)] - tau[ker_P(T*)].
/// Singular values at or below rank_tol * ||T|| count as zero.
double skew_corner_index(const BlockOperator& t, const Projection& p, const Projection& q,
                         double rank_tol = kDefaultRankTol);

/// ec(P,Q) = skew_corner_index(PQ, P, Q), with the zero threshold taken
/// as rank_tol itself (PQ has scale 1).
double essential_codimension(const Projection& p, const Projection& q,
                             double rank_tol = kDefaultRankTol);

/// V from T = V|T|. Singular values at or below max(rank_tol * ||T||, abs_tol)
/// are dropped.
BlockOperator polar_partial_isometry(const BlockOperator& t, double rank_tol = kDefaultRankTol,
                                     double abs_tol = 0.0);

nlohmann::json to_json(const BlockOperator& op);
BlockOperator block_operator_from_json(const nlohmann::json& j);
AlgebraPtr algebra_from_json(const nlohmann::json& j);
nlohmann::json to_json(const WeightedBlockAlgebra& algebra);

}  // namespace sfkit
