#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "sfkit/errors.hpp"
#include "sfkit/flow.hpp"
#include "sfkit/integrals.hpp"
#include "sfkit/random.hpp"

using namespace sfkit;

namespace {

struct Gauge {
  BlockOperator d;
  BlockOperator u;
};

Gauge random_gauge(Random& rng, int max_dim, double min_gap) {
  while (true) {
    auto alg = rng.algebra(2, max_dim);
    BlockOperator d = rng.hermitian(alg);
    double gap = 1e300;
    for (const auto& blk : d.blocks()) gap = std::min(gap, oracle::eigenvalues(blk).cwiseAbs().minCoeff());
    if (gap >= min_gap) return {d, rng.unitary(alg)};
  }
}

QuadratureOptions tight() {
  QuadratureOptions q;
  q.abs_tol = 1e-10;
  return q;
}

}  // namespace

TEST_SUITE("integrals") {

TEST_CASE("p-summable normalising constant") {
  const double pi = std::numbers::pi;
  CHECK(psummable_constant(2) == doctest::Approx(pi).epsilon(1e-14));
  CHECK(psummable_constant(3) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(psummable_constant(4) == doctest::Approx(pi / 2).epsilon(1e-14));
  CHECK(psummable_constant(6) == doctest::Approx(3 * pi / 8).epsilon(1e-14));
  for (double n : {2.0, 2.5, 3.0, 4.0, 6.0, 9.0})
    CHECK(std::abs(psummable_constant_numeric(n) - psummable_constant(n)) <= 1e-9);
  CHECK_THROWS_AS(psummable_constant(1.0), DomainError);
}

TEST_CASE("summability parameters") {
  SummabilityParams ok;
  CHECK_NOTHROW(ok.validate());
  SummabilityParams bad_n;
  bad_n.n = 0.5;
  CHECK_THROWS_AS(bad_n.validate(), DomainError);
  SummabilityParams bad_eps;
  bad_eps.eps = 0.0;
  CHECK_THROWS_AS(bad_eps.validate(), DomainError);
}

TEST_CASE("scalar theta integral without endpoint corrections") {
  // D0 = -1/2, B = 1: the bare integral is erf(1/2) times the weight; the
  // remaining mass sits in the endpoint eta terms.
  for (double w : {1.0, 0.5, std::sqrt(2.0)}) {
    auto alg = WeightedBlockAlgebra::make({1}, {w});
    const IntegralReport r =
        cp_integral_theta(BlockOperator::scalar(alg, -0.5), BlockOperator::scalar(alg, 1.0), tight());
    CHECK(r.value == doctest::Approx(w * std::erf(0.5)).epsilon(1e-10));
    CHECK_FALSE(r.endpoints_matched);
    CHECK_FALSE(r.note.empty());
  }
}

TEST_CASE("getzler adds the eta corrections for the scalar crossing") {
  auto alg = WeightedBlockAlgebra::make({1}, {0.5});
  const OperatorPath path = linear_path(BlockOperator::scalar(alg, -0.5), BlockOperator::scalar(alg, 0.5));
  for (double eps : {0.1, 1.0, 4.0}) {
    const GetzlerReport g = getzler_flow(path, eps, tight());
    CHECK(g.integral_term == doctest::Approx(0.5 * std::erf(0.5 * std::sqrt(eps))).epsilon(1e-9));
    CHECK(g.eta_b == doctest::Approx(0.5 * std::erfc(0.5 * std::sqrt(eps))).epsilon(1e-12));
    CHECK(g.eta_a == doctest::Approx(-g.eta_b).epsilon(1e-12));
    CHECK(g.value == doctest::Approx(0.5).epsilon(1e-9));
  }
}

TEST_CASE("eta approximation: closed form against erf arithmetic and quadrature") {
  auto alg = WeightedBlockAlgebra::make({1, 1, 1}, {1.0, 0.5, 2.0});
  const BlockOperator d = BlockOperator::diagonal(alg, {-1.3, 0.2, 2.5});
  for (double eps : {0.1, 1.0}) {
    const double expected = -std::erfc(1.3 * std::sqrt(eps)) + 0.5 * std::erfc(0.2 * std::sqrt(eps)) +
                            2.0 * std::erfc(2.5 * std::sqrt(eps));
    CHECK(eta_approx(d, eps) == doctest::Approx(expected).epsilon(1e-14));
    CHECK(std::abs(eta_approx_quadrature(d, eps, tight()) - expected) <= 1e-8);
  }
  Random rng(5);
  for (int i = 0; i < 5; ++i) {
    const BlockOperator h = rng.hermitian(rng.algebra(2, 6));
    CHECK(std::abs(eta_approx(h, 0.3) - eta_approx_quadrature(h, 0.3, tight())) <= 1e-8);
  }
}

TEST_CASE("summable integrals on random gauge paths") {
  Random rng(77);
  for (int i = 0; i < 8; ++i) {
    const Gauge g = random_gauge(rng, 6, 0.0);
    const OperatorPath path = gauge_path(g.d, g.u);
    const double expected = oracle::endpoint_flow(path);
    CHECK(spectral_flow_phillips(path).value == doctest::Approx(expected));
    const BlockOperator b = path.at(1.0) - path.at(0.0);
    for (double n : {2.0, 4.0}) {
      const IntegralReport r = cp_integral_psummable(g.d, b, n, tight());
      CHECK(r.endpoints_matched);
      CHECK(std::abs(r.value - expected) <= 1e-6);
    }
    CHECK(std::abs(cp_integral_theta(g.d, b, tight()).value - expected) <= 1e-6);
  }
}

TEST_CASE("getzler formula on random gauge paths is independent of eps") {
  Random rng(78);
  for (int i = 0; i < 6; ++i) {
    const Gauge g = random_gauge(rng, 6, 1e-3);
    const OperatorPath path = gauge_path(g.d, g.u);
    const double expected = spectral_flow_phillips(path).value;
    const double a = getzler_flow(path, 0.1, tight()).value;
    const double b = getzler_flow(path, 1.0, tight()).value;
    CHECK(std::abs(a - expected) <= 1e-6);
    CHECK(std::abs(b - expected) <= 1e-6);
    CHECK(std::abs(a - b) <= 1e-6);
  }
}

TEST_CASE("getzler rejects non-invertible endpoints") {
  auto alg = WeightedBlockAlgebra::matrices(1);
  const OperatorPath path = linear_path(BlockOperator::scalar(alg, 0.0), BlockOperator::scalar(alg, 1.0));
  CHECK_THROWS_AS(getzler_flow(path, 1.0), DomainError);
  const OperatorPath ok = linear_path(BlockOperator::scalar(alg, -1.0), BlockOperator::scalar(alg, 1.0));
  CHECK_THROWS_AS(getzler_flow(ok, 0.0), DomainError);
}

TEST_CASE("heat-trace formula on the truncated circle") {
  const CircleModel cm = circle_model();
  CHECK(spectral_flow_phillips(cm.path).value == doctest::Approx(1.0));
  const IntegralReport r = eaf_trace_formula(cm.path, 1.0, cm.gauge);
  CHECK(std::abs(r.value - 1.0) <= 1e-4);
  // the gauge overload insists on intertwining
  const BlockOperator wrong = BlockOperator::identity(cm.path.algebra());
  CHECK_THROWS_AS(eaf_trace_formula(cm.path, 1.0, wrong), DomainError);
}

TEST_CASE("heat-trace formula with spectral endpoint comparison") {
  Random rng(79);
  const Gauge g = random_gauge(rng, 5, 0.0);
  const OperatorPath path = gauge_path(g.d, g.u);
  const double expected = spectral_flow_phillips(path).value;
  for (double t : {0.5, 2.0}) CHECK(std::abs(eaf_trace_formula(path, t, tight()).value - expected) <= 1e-6);
  const OperatorPath mismatched = linear_path(g.d, g.d + BlockOperator::identity(g.d.algebra()));
  CHECK_THROWS_AS(eaf_trace_formula(mismatched, 1.0), DomainError);
}

TEST_CASE("bounded heuristic integrand matches the theta integrand for commuting paths") {
  auto alg = WeightedBlockAlgebra::make({1, 1, 1}, {1.0, 0.5, 2.0});
  const BlockOperator d0 = BlockOperator::diagonal(alg, {-0.7, 0.4, 1.1});
  const BlockOperator b = BlockOperator::diagonal(alg, {1.5, -0.2, 0.3});
  const double pi = std::numbers::pi;
  double heuristic = 0.0, theta = 0.0;
  const int n = 400;
  for (int i = 0; i < n; ++i) {
    const double t = (i + 0.5) / n;
    const BlockOperator d = d0 + t * b;
    const BlockOperator f = bounded_transform(d);
    // F' = D' (1 + D^2)^{-3/2} for commuting D, D'
    const BlockOperator f_dot =
        b * apply_function(d, [](double x) { return std::pow(1.0 + x * x, -1.5); });
    heuristic += bounded_heuristic_integrand(f, f_dot) / n;
    theta += trace(b * apply_function(d, [](double x) { return std::exp(-x * x); })).real() / n;
  }
  CHECK(std::exp(1.0) / std::sqrt(pi) * heuristic == doctest::Approx(theta / std::sqrt(pi)).epsilon(1e-10));
}

TEST_CASE("bounded transform and weighted traces") {
  auto alg = WeightedBlockAlgebra::make({1, 1}, {1.0, 0.5});
  const BlockOperator d = BlockOperator::diagonal(alg, {3.0, -4.0});
  const BlockOperator f = bounded_transform(d);
  CHECK(f.block(0)(0, 0).real() == doctest::Approx(3.0 / std::sqrt(10.0)));
  CHECK(f.block(1)(0, 0).real() == doctest::Approx(-4.0 / std::sqrt(17.0)));
  const BlockOperator one = BlockOperator::identity(alg);
  CHECK(trace_weighted_function(one, d, [](double x) { return x * x; }) == doctest::Approx(9.0 + 8.0));
}

}
