#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "sfkit/errors.hpp"
#include "sfkit/random.hpp"
#include "sfkit/semifinite.hpp"

using namespace sfkit;

namespace {

AlgebraPtr two_three() { return WeightedBlockAlgebra::make({2, 3}, {1.0, 0.5}); }

BlockOperator diag1(const std::vector<double>& v, double w = 1.0) {
  auto alg = WeightedBlockAlgebra::make({static_cast<int>(v.size())}, {w});
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(v.size()), static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) m(i, i) = v[i];
  return BlockOperator(alg, {m});
}

}  // namespace

TEST_SUITE("semifinite") {

TEST_CASE("algebra validation") {
  CHECK_THROWS_AS(WeightedBlockAlgebra({2}, {0.0}), StructuralError);
  CHECK_THROWS_AS(WeightedBlockAlgebra({0}, {1.0}), StructuralError);
  CHECK_THROWS_AS(WeightedBlockAlgebra({2, 3}, {1.0}), StructuralError);
  auto alg = two_three();
  CHECK(alg->total_dim() == 5);
  CHECK(alg->total_weight() == doctest::Approx(3.5));
}

TEST_CASE("block shapes must match") {
  auto alg = two_three();
  CHECK_THROWS_AS(BlockOperator(alg, {Matrix::Zero(2, 2)}), StructuralError);
  CHECK_THROWS_AS(BlockOperator(alg, {Matrix::Zero(2, 2), Matrix::Zero(2, 2)}), StructuralError);
  auto other = WeightedBlockAlgebra::make({2, 3}, {1.0, 1.0});
  CHECK_THROWS_AS(BlockOperator::identity(alg) + BlockOperator::identity(other), StructuralError);
}

TEST_CASE("trace of identity and zero") {
  auto alg = two_three();
  CHECK(trace(BlockOperator::identity(alg)).real() == doctest::Approx(3.5));
  CHECK(std::abs(trace(BlockOperator::zero(alg))) == 0.0);
}

TEST_CASE("trace is tracial and faithful on random operators") {
  Random rng(101);
  for (int i = 0; i < 20; ++i) {
    auto alg = rng.algebra(3, 5);
    std::vector<Matrix> a, b;
    for (int d : alg->block_dims()) {
      a.push_back(rng.gaussian(d, d));
      b.push_back(rng.gaussian(d, d));
    }
    const BlockOperator A(alg, a), B(alg, b);
    CHECK(std::abs(trace(A * B) - trace(B * A)) <= 1e-12 * A.norm() * B.norm() * alg->total_dim());
    CHECK(trace(A.adjoint() * A).real() > 0.0);
    const BlockOperator H = rng.hermitian(alg);
    CHECK(trace(H * H).real() >= 0.0);
  }
}

TEST_CASE("hermitian tolerance") {
  auto alg = WeightedBlockAlgebra::matrices(2);
  Matrix m = Matrix::Identity(2, 2);
  m(0, 1) = Complex(0.0, 1e-13);
  CHECK(BlockOperator(alg, {m}).is_hermitian());
  m(0, 1) = Complex(0.0, 1e-9);
  CHECK_FALSE(BlockOperator(alg, {m}).is_hermitian());
}

TEST_CASE("projection validation") {
  auto alg = WeightedBlockAlgebra::matrices(2);
  Matrix m = Matrix::Identity(2, 2) * 0.5;
  CHECK_THROWS_AS(Projection(BlockOperator(alg, {m})), DomainError);
  Matrix nh = Matrix::Zero(2, 2);
  nh(0, 1) = 1.0;
  CHECK_THROWS_AS(Projection(BlockOperator(alg, {nh})), DomainError);
  CHECK_NOTHROW(Projection(BlockOperator::identity(alg)));
}

TEST_CASE("spectral projection examples") {
  auto alg = two_three();
  CHECK((spectral_projection_nonneg(BlockOperator::identity(alg)).op() - BlockOperator::identity(alg)).norm() < 1e-14);
  const Projection p = spectral_projection_nonneg(diag1({1.0, -1.0}));
  CHECK(std::abs(p.op().block(0)(0, 0) - 1.0) < 1e-14);
  CHECK(std::abs(p.op().block(0)(1, 1)) < 1e-14);
  // chi(0) = 1
  const Projection z = spectral_projection_nonneg(diag1({0.0}));
  CHECK(std::abs(z.op().block(0)(0, 0) - 1.0) < 1e-14);
  // |lambda| <= kernel_tol counts as zero
  const Projection tiny = spectral_projection_nonneg(diag1({-5e-9}));
  CHECK(std::abs(tiny.op().block(0)(0, 0) - 1.0) < 1e-14);
  const Projection neg = spectral_projection_nonneg(diag1({-2e-8}));
  CHECK(std::abs(neg.op().block(0)(0, 0)) < 1e-14);
  Matrix nh = Matrix::Zero(2, 2);
  nh(0, 1) = 1.0;
  CHECK_THROWS_AS(spectral_projection_nonneg(BlockOperator(WeightedBlockAlgebra::matrices(2), {nh})),
                  DomainError);
}

TEST_CASE("skew corner index examples") {
  Random rng(7);
  auto alg = WeightedBlockAlgebra::make({4, 3}, {1.0, std::sqrt(2.0)});
  const Projection p = rng.projection(alg, {2, 1});
  const Projection q = rng.projection(alg, {3, 2});
  // T = 0: ker_Q(0) = Q(H), ker_P(0) = P(H)
  const double zero_index = skew_corner_index(BlockOperator::zero(alg), p, q);
  CHECK(zero_index == doctest::Approx((trace(q.op()) - trace(p.op())).real()).epsilon(1e-12));
  // P = Q, T unitary on P(H)
  const BlockOperator u = rng.unitary(alg);
  const BlockOperator t = p.op() * u * p.op();
  const BlockOperator v = polar_partial_isometry(t);
  CHECK(skew_corner_index(v, p, p) == doctest::Approx(0.0));
  // T outside the corner
  CHECK_THROWS_AS(skew_corner_index(u, p, q), DomainError);
}

TEST_CASE("skew corner index agrees with elimination rank oracle") {
  Random rng(19);
  for (int trial = 0; trial < 25; ++trial) {
    auto alg = rng.algebra(3, 6);
    const Projection p = rng.projection(alg);
    const Projection q = rng.projection(alg);
    const BlockOperator t = p.op() * q.op();
    double ker_q = 0.0, ker_p = 0.0;
    for (std::size_t k = 0; k < alg->block_count(); ++k) {
      const double w = alg->weights()[k];
      const Matrix rq = oracle::range_basis(q.op().block(k));
      const Matrix rp = oracle::range_basis(p.op().block(k));
      ker_q += w * (rq.cols() - oracle::rank_by_elimination(t.block(k) * rq));
      ker_p += w * (rp.cols() - oracle::rank_by_elimination(t.block(k).adjoint() * rp));
    }
    CHECK(skew_corner_index(t, p, q) == doctest::Approx(ker_q - ker_p).epsilon(1e-12));
  }
}

TEST_CASE("essential codimension examples and identities") {
  Random rng(23);
  auto alg = WeightedBlockAlgebra::make({5, 2}, {0.5, 1.0});
  const Projection q = rng.projection(alg, {4, 2});
  CHECK(essential_codimension(q, q) == doctest::Approx(0.0));
  // P <= Q: a subprojection of Q
  std::vector<Matrix> sub;
  for (std::size_t k = 0; k < alg->block_count(); ++k) {
    const Matrix basis = oracle::range_basis(q.op().block(k));
    const Matrix part = basis.leftCols(basis.cols() / 2);
    sub.push_back(part * part.adjoint());
  }
  const Projection p(BlockOperator(alg, sub));
  CHECK(essential_codimension(p, q) == doctest::Approx((trace(q.op()) - trace(p.op())).real()));

  for (int trial = 0; trial < 30; ++trial) {
    auto a = rng.algebra(3, 6);
    const Projection p1 = rng.projection(a), p2 = rng.projection(a), p3 = rng.projection(a);
    const double e12 = essential_codimension(p1, p2);
    CHECK(e12 == doctest::Approx(-essential_codimension(p2, p1)).epsilon(1e-10));
    CHECK(essential_codimension(p1, p3) ==
          doctest::Approx(e12 + essential_codimension(p2, p3)).epsilon(1e-10));
    CHECK(e12 == doctest::Approx((trace(p2.op()) - trace(p1.op())).real()).epsilon(1e-10));
  }
}

TEST_CASE("nearby projections have zero essential codimension") {
  Random rng(29);
  for (int trial = 0; trial < 20; ++trial) {
    auto alg = rng.algebra(3, 6);
    const Projection p = rng.projection(alg);
    // conjugate by a unitary close to 1
    const BlockOperator h = rng.hermitian(alg, 0.05);
    std::vector<Matrix> ublocks;
    for (const auto& b : h.blocks()) {
      Eigen::SelfAdjointEigenSolver<Matrix> es(b);
      Eigen::VectorXcd ph(es.eigenvalues().size());
      for (Eigen::Index i = 0; i < ph.size(); ++i) ph(i) = std::polar(1.0, es.eigenvalues()(i));
      ublocks.push_back(es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint());
    }
    const BlockOperator w(alg, ublocks);
    BlockOperator moved = w * p.op() * w.adjoint();
    moved = moved.hermitian_part();
    const Projection q(moved);
    if ((p.op() - q.op()).norm() < 1.0) CHECK(essential_codimension(p, q) == doctest::Approx(0.0));
  }
}

TEST_CASE("index is stable under small perturbations in the corner") {
  Random rng(31);
  for (int trial = 0; trial < 15; ++trial) {
    auto alg = rng.algebra(2, 6);
    const Projection p = rng.projection(alg), q = rng.projection(alg);
    const BlockOperator t = p.op() * rng.unitary(alg) * q.op();
    double smallest = std::numeric_limits<double>::infinity();
    for (const auto& b : t.blocks()) {
      const RealVector s = singular_values(b);
      for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > 1e-8 * std::max(1.0, t.norm())) smallest = std::min(smallest, s(i));
    }
    if (!std::isfinite(smallest)) continue;
    BlockOperator noise = p.op() * rng.hermitian(alg) * q.op();
    const double nn = noise.norm();
    if (nn == 0.0) continue;
    noise *= Complex(0.4 * smallest / nn, 0.0);
    CHECK(skew_corner_index(t + noise, p, q) == doctest::Approx(skew_corner_index(t, p, q)));
  }
}

TEST_CASE("polar partial isometry") {
  Random rng(37);
  auto alg = rng.algebra(3, 5);
  // positive invertible -> identity
  const BlockOperator h = rng.hermitian(alg);
  const BlockOperator pos = h * h + BlockOperator::identity(alg);
  CHECK((polar_partial_isometry(pos) - BlockOperator::identity(alg)).norm() < 1e-9);
  CHECK(polar_partial_isometry(BlockOperator::zero(alg)).norm() == 0.0);
  for (int trial = 0; trial < 10; ++trial) {
    auto a = rng.algebra(3, 6);
    const Projection q = rng.projection(a);
    std::vector<Matrix> blocks;
    for (int d : a->block_dims()) blocks.push_back(rng.gaussian(d, d));
    const BlockOperator t = BlockOperator(a, blocks) * q.op();  // has a kernel
    const BlockOperator v = polar_partial_isometry(t);
    const BlockOperator abs_t = apply_function((t.adjoint() * t).hermitian_part(),
                                               [](double x) { return std::sqrt(std::max(x, 0.0)); });
    CHECK((v * abs_t - t).norm() <= 1e-9 * std::max(1.0, t.norm()));
    // V vanishes on ker T = ker Q here (generic Gaussian factor)
    CHECK((v * q.complement().op()).norm() < 1e-9);
  }
}

TEST_CASE("json round trip") {
  Random rng(41);
  auto alg = rng.algebra(3, 4);
  const BlockOperator a = rng.hermitian(alg);
  const BlockOperator b = block_operator_from_json(to_json(a));
  CHECK((a - b).norm() == 0.0);
  CHECK_THROWS_AS(block_operator_from_json(nlohmann::json::parse(R"({"dims":[2],"weights":[1],"blocks":[[1,2,3]]})")),
                  StructuralError);
}

TEST_CASE("weighted and unweighted configurations") {
  // the single-block weight-1 algebra is the type I case: traces are ranks
  Random rng(43);
  auto alg = WeightedBlockAlgebra::matrices(6);
  const Projection p = rng.projection(alg, {4});
  const Projection q = rng.projection(alg, {1});
  CHECK(essential_codimension(p, q) == doctest::Approx(-3.0));
  auto weighted = WeightedBlockAlgebra::make({6}, {0.5});
  const Projection pw(BlockOperator(weighted, p.op().blocks()));
  const Projection qw(BlockOperator(weighted, q.op().blocks()));
  CHECK(essential_codimension(pw, qw) == doctest::Approx(-1.5));
}

}
