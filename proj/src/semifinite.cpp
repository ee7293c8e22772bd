#include "sfkit/semifinite.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "sfkit/errors.hpp"

namespace sfkit {

WeightedBlockAlgebra::WeightedBlockAlgebra(std::vector<int> block_dims, std::vector<double> weights)
    : dims_(std::move(block_dims)), weights_(std::move(weights)) {
  if (dims_.empty()) throw StructuralError("algebra needs at least one block");
  if (dims_.size() != weights_.size())
    throw StructuralError("algebra: block_dims and weights differ in length");
  for (int d : dims_)
    if (d < 1) throw StructuralError("algebra: block dimensions must be >= 1");
  for (double w : weights_)
    if (!(w > 0.0) || !std::isfinite(w)) throw StructuralError("algebra: weights must be positive");
}

AlgebraPtr WeightedBlockAlgebra::matrices(int n) {
  return std::make_shared<const WeightedBlockAlgebra>(std::vector<int>{n}, std::vector<double>{1.0});
}

AlgebraPtr WeightedBlockAlgebra::make(std::vector<int> block_dims, std::vector<double> weights) {
  return std::make_shared<const WeightedBlockAlgebra>(std::move(block_dims), std::move(weights));
}

int WeightedBlockAlgebra::total_dim() const { return std::accumulate(dims_.begin(), dims_.end(), 0); }

double WeightedBlockAlgebra::total_weight() const {
  double s = 0.0;
  for (std::size_t k = 0; k < dims_.size(); ++k) s += weights_[k] * dims_[k];
  return s;
}

BlockOperator::BlockOperator(AlgebraPtr algebra, std::vector<Matrix> blocks)
    : algebra_(std::move(algebra)), blocks_(std::move(blocks)) {
  if (!algebra_) throw StructuralError("block operator without algebra");
  if (blocks_.size() != algebra_->block_count())
    throw StructuralError("block operator: block count does not match algebra");
  for (std::size_t k = 0; k < blocks_.size(); ++k) {
    const int n = algebra_->block_dims()[k];
    if (blocks_[k].rows() != n || blocks_[k].cols() != n) {
      std::ostringstream os;
      os << "block " << k << " has shape " << blocks_[k].rows() << "x" << blocks_[k].cols()
         << ", expected " << n << "x" << n;
      throw StructuralError(os.str());
    }
  }
}

BlockOperator BlockOperator::zero(AlgebraPtr algebra) { return scalar(std::move(algebra), 0.0); }

BlockOperator BlockOperator::identity(AlgebraPtr algebra) { return scalar(std::move(algebra), 1.0); }

BlockOperator BlockOperator::scalar(AlgebraPtr algebra, Complex value) {
  std::vector<Matrix> blocks;
  blocks.reserve(algebra->block_count());
  for (int n : algebra->block_dims()) blocks.push_back(value * Matrix::Identity(n, n));
  return BlockOperator(std::move(algebra), std::move(blocks));
}

BlockOperator BlockOperator::diagonal(AlgebraPtr algebra, const std::vector<double>& values) {
  if (values.size() != algebra->block_count())
    throw StructuralError("diagonal operator: value count does not match block count");
  std::vector<Matrix> blocks;
  blocks.reserve(values.size());
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (algebra->block_dims()[k] != 1) throw StructuralError("diagonal operator needs 1x1 blocks");
    blocks.push_back(Matrix::Constant(1, 1, Complex(values[k], 0.0)));
  }
  return BlockOperator(std::move(algebra), std::move(blocks));
}

BlockOperator BlockOperator::adjoint() const {
  std::vector<Matrix> out;
  out.reserve(blocks_.size());
  for (const auto& b : blocks_) out.push_back(b.adjoint());
  return BlockOperator(algebra_, std::move(out));
}

bool BlockOperator::is_hermitian(double tol) const {
  return std::all_of(blocks_.begin(), blocks_.end(),
                     [tol](const Matrix& b) { return sfkit::is_hermitian(b, tol); });
}

double BlockOperator::norm() const {
  double n = 0.0;
  for (const auto& b : blocks_) n = std::max(n, operator_norm(b));
  return n;
}

BlockOperator BlockOperator::hermitian_part() const {
  std::vector<Matrix> out;
  out.reserve(blocks_.size());
  for (const auto& b : blocks_) out.push_back(0.5 * (b + b.adjoint()));
  return BlockOperator(algebra_, std::move(out));
}

void require_same_algebra(const BlockOperator& a, const BlockOperator& b, const char* where) {
  if (a.algebra() != b.algebra() && !(*a.algebra() == *b.algebra()))
    throw StructuralError(std::string(where) + ": operands live on different algebras");
}

BlockOperator& BlockOperator::operator+=(const BlockOperator& other) {
  require_same_algebra(*this, other, "operator+");
  for (std::size_t k = 0; k < blocks_.size(); ++k) blocks_[k] += other.blocks_[k];
  return *this;
}

BlockOperator& BlockOperator::operator-=(const BlockOperator& other) {
  require_same_algebra(*this, other, "operator-");
  for (std::size_t k = 0; k < blocks_.size(); ++k) blocks_[k] -= other.blocks_[k];
  return *this;
}

BlockOperator& BlockOperator::operator*=(Complex s) {
  for (auto& b : blocks_) b *= s;
  return *this;
}

BlockOperator operator*(const BlockOperator& a, const BlockOperator& b) {
  require_same_algebra(a, b, "operator*");
  std::vector<Matrix> out;
  out.reserve(a.block_count());
  for (std::size_t k = 0; k < a.block_count(); ++k) out.push_back(a.block(k) * b.block(k));
  return BlockOperator(a.algebra(), std::move(out));
}

namespace {

void validate_projection(const BlockOperator& p) {
  for (std::size_t k = 0; k < p.block_count(); ++k) {
    const Matrix& b = p.block(k);
    if (!is_hermitian(b, kHermitianTol))
      throw DomainError("projection: block " + std::to_string(k) + " is not self-adjoint");
    if (operator_norm(b * b - b) > 1e-10)
      throw DomainError("projection: block " + std::to_string(k) + " is not idempotent");
    const HermitianEigen eig = hermitian_eigen(b);
    for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
      const double l = eig.values(i);
      if (std::abs(l) > 1e-8 && std::abs(l - 1.0) > 1e-8)
        throw DomainError("projection: eigenvalue outside {0,1}");
    }
  }
}

}  // namespace

Projection::Projection(BlockOperator op) : op_(std::move(op)) { validate_projection(op_); }

Projection Projection::complement() const {
  return Projection(BlockOperator::identity(op_.algebra()) - op_);
}

std::vector<Matrix> Projection::range_bases() const {
  std::vector<Matrix> out;
  out.reserve(op_.block_count());
  for (const auto& b : op_.blocks()) out.push_back(projection_range(b));
  return out;
}

Complex trace(const BlockOperator& a) {
  Complex s = 0.0;
  const auto& w = a.algebra()->weights();
  for (std::size_t k = 0; k < a.block_count(); ++k) s += w[k] * a.block(k).trace();
  return s;
}

BlockOperator apply_function(const BlockOperator& b, const std::function<double(double)>& f) {
  std::vector<Matrix> out;
  out.reserve(b.block_count());
  for (const auto& blk : b.blocks()) out.push_back(hermitian_function(blk, f));
  return BlockOperator(b.algebra(), std::move(out));
}

WeightedSpectrum weighted_spectrum(const BlockOperator& b) {
  std::vector<std::pair<double, double>> pairs;
  const auto& w = b.algebra()->weights();
  for (std::size_t k = 0; k < b.block_count(); ++k) {
    const HermitianEigen eig = hermitian_eigen(b.block(k));
    for (Eigen::Index i = 0; i < eig.values.size(); ++i) pairs.emplace_back(eig.values(i), w[k]);
  }
  std::sort(pairs.begin(), pairs.end());
  WeightedSpectrum out;
  for (const auto& [v, wt] : pairs) {
    out.values.push_back(v);
    out.weights.push_back(wt);
  }
  return out;
}

Projection spectral_projection_nonneg(const BlockOperator& b, double kernel_tol) {
  if (!b.is_hermitian()) throw DomainError("spectral_projection_nonneg: operator is not Hermitian");
  std::vector<Matrix> out;
  out.reserve(b.block_count());
  for (const auto& blk : b.blocks()) {
    Matrix p = hermitian_function(blk, [kernel_tol](double l) { return l >= -kernel_tol ? 1.0 : 0.0; });
    out.push_back(0.5 * (p + p.adjoint()));
  }
  return Projection(BlockOperator(b.algebra(), std::move(out)));
}

namespace {

// tau-dimension of {x in ran(basis) : A x = 0}, per block.
double restricted_kernel_dimension(const BlockOperator& a, const std::vector<Matrix>& bases,
                                   double rank_tol, double abs_tol) {
  double dim = 0.0;
  const auto& w = a.algebra()->weights();
  for (std::size_t k = 0; k < a.block_count(); ++k) {
    const Matrix& basis = bases[k];
    if (basis.cols() == 0) continue;
    const int rank = numerical_rank(a.block(k) * basis, rank_tol, abs_tol);
    dim += w[k] * static_cast<double>(basis.cols() - rank);
  }
  return dim;
}

double corner_index(const BlockOperator& t, const Projection& p, const Projection& q,
                    double rank_tol, double abs_tol) {
  return restricted_kernel_dimension(t, q.range_bases(), rank_tol, abs_tol) -
         restricted_kernel_dimension(t.adjoint(), p.range_bases(), rank_tol, abs_tol);
}

}  // namespace

double skew_corner_index(const BlockOperator& t, const Projection& p, const Projection& q,
                         double rank_tol) {
  require_same_algebra(t, p.op(), "skew_corner_index");
  require_same_algebra(t, q.op(), "skew_corner_index");
  const BlockOperator corner = p.op() * t * q.op();
  const double scale = std::max(1.0, t.norm());
  if ((t - corner).norm() > 1e-10 * scale)
    throw DomainError("skew_corner_index: T is not in the corner P N Q");
  return corner_index(t, p, q, rank_tol, rank_tol * t.norm());
}

double essential_codimension(const Projection& p, const Projection& q, double rank_tol) {
  // PQ has natural scale 1, so small singular values are judged absolutely
  return corner_index(p.op() * q.op(), p, q, rank_tol, rank_tol);
}

BlockOperator polar_partial_isometry(const BlockOperator& t, double rank_tol, double abs_tol) {
  // singular values are compared against the norm of the whole operator, so a
  // block that is numerically zero does not get a spurious phase
  const double cutoff = std::max(rank_tol * t.norm(), abs_tol);
  std::vector<Matrix> out;
  out.reserve(t.block_count());
  for (const auto& blk : t.blocks()) {
    const Eigen::Index n = blk.rows();
    if (n == 1) {
      const double a = std::abs(blk(0, 0));
      out.push_back(Matrix::Constant(1, 1, a > cutoff ? blk(0, 0) / a : Complex(0.0)));
      continue;
    }
    Eigen::BDCSVD<Matrix> svd(blk, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const RealVector& s = svd.singularValues();
    Matrix v = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i < s.size(); ++i)
      if (s(i) > cutoff) v += svd.matrixU().col(i) * svd.matrixV().col(i).adjoint();
    out.push_back(std::move(v));
  }
  return BlockOperator(t.algebra(), std::move(out));
}

nlohmann::json to_json(const WeightedBlockAlgebra& algebra) {
  return {{"dims", algebra.block_dims()}, {"weights", algebra.weights()}};
}

nlohmann::json to_json(const BlockOperator& op) {
  nlohmann::json j = to_json(*op.algebra());
  nlohmann::json blocks = nlohmann::json::array();
  for (const auto& b : op.blocks()) {
    nlohmann::json entries = nlohmann::json::array();
    for (Eigen::Index r = 0; r < b.rows(); ++r)
      for (Eigen::Index c = 0; c < b.cols(); ++c) entries.push_back({b(r, c).real(), b(r, c).imag()});
    blocks.push_back(std::move(entries));
  }
  j["blocks"] = std::move(blocks);
  return j;
}

AlgebraPtr algebra_from_json(const nlohmann::json& j) {
  try {
    return WeightedBlockAlgebra::make(j.at("dims").get<std::vector<int>>(),
                                      j.at("weights").get<std::vector<double>>());
  } catch (const nlohmann::json::exception& e) {
    throw StructuralError(std::string("algebra JSON: ") + e.what());
  }
}

namespace {

Complex complex_from_json(const nlohmann::json& e) {
  if (e.is_number()) return {e.get<double>(), 0.0};
  if (e.is_array() && e.size() == 2) return {e[0].get<double>(), e[1].get<double>()};
  throw StructuralError("complex entry must be a number or [re, im]");
}

}  // namespace

BlockOperator block_operator_from_json(const nlohmann::json& j) {
  AlgebraPtr algebra = algebra_from_json(j);
  try {
    const auto& blocks_j = j.at("blocks");
    if (!blocks_j.is_array() || blocks_j.size() != algebra->block_count())
      throw StructuralError("operator JSON: block count does not match dims");
    std::vector<Matrix> blocks;
    for (std::size_t k = 0; k < blocks_j.size(); ++k) {
      const int n = algebra->block_dims()[k];
      const auto& entries = blocks_j[k];
      if (!entries.is_array() || entries.size() != static_cast<std::size_t>(n) * n)
        throw StructuralError("operator JSON: block " + std::to_string(k) + " needs n*n entries");
      Matrix m(n, n);
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) m(r, c) = complex_from_json(entries[r * n + c]);
      blocks.push_back(std::move(m));
    }
    return BlockOperator(std::move(algebra), std::move(blocks));
  } catch (const nlohmann::json::exception& e) {
    throw StructuralError(std::string("operator JSON: ") + e.what());
  }
}

}  // namespace sfkit
