#include "sfkit/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "sfkit/aps.hpp"
#include "sfkit/coefficients.hpp"
#include "sfkit/flow.hpp"
#include "sfkit/integrals.hpp"
#include "sfkit/random.hpp"
#include "sfkit/symbols.hpp"
#include "sfkit/toeplitz.hpp"

#ifndef SFKIT_SCENARIO_DIR
#define SFKIT_SCENARIO_DIR "scenarios"
#endif

namespace sfkit {
namespace {

using nlohmann::json;

// Collects named tolerance checks; the scenario passes when all do.
class Checks {
 public:
  void add(const std::string& name, double value, double expected, double tol) {
    const double diff = std::abs(value - expected);
    const bool pass = diff <= tol;
    passed_ = passed_ && pass;
    list_.push_back({{"name", name}, {"value", value}, {"expected", expected}, {"tolerance", tol},
                     {"pass", pass}});
  }
  void flag(const std::string& name, bool pass) {
    passed_ = passed_ && pass;
    list_.push_back({{"name", name}, {"pass", pass}});
  }
  void write(json& result) const {
    result["checks"] = list_;
    result["passed"] = passed_;
  }

 private:
  json list_ = json::array();
  bool passed_ = true;
};

struct Context {
  const json& params;
  const RunOptions& opts;
  std::optional<std::uint64_t> seed;
  ScenarioOutput out;

  Random rng() const {
    if (!seed) throw DomainError("scenario generates random instances but has no seed");
    return Random(*seed);
  }
  QuadratureOptions quad() const {
    QuadratureOptions q;
    if (params.contains("quad")) {
      const auto& j = params["quad"];
      q.abs_tol = j.value("abs_tol", q.abs_tol);
      q.rel_tol = j.value("rel_tol", q.rel_tol);
      q.max_subdivisions = j.value("max_subdivisions", q.max_subdivisions);
    }
    if (opts.tol) q.abs_tol = *opts.tol;
    return q;
  }
  FlowOptions flow() const {
    FlowOptions f;
    if (params.contains("flow")) {
      const auto& j = params["flow"];
      f.initial_segments = j.value("initial_segments", f.initial_segments);
      f.max_depth = j.value("max_depth", f.max_depth);
      f.kernel_tol = j.value("kernel_tol", f.kernel_tol);
      f.rank_tol = j.value("rank_tol", f.rank_tol);
    }
    if (opts.tol) f.stability_tol = *opts.tol;
    return f;
  }
};

std::string plot_csv(const OperatorPath& path, int samples) {
  std::ostringstream out;
  out.precision(17);
  out << "t,branch_id,eigenvalue,weight\n";
  const auto& alg = *path.algebra();
  for (int s = 0; s < samples; ++s) {
    const double t = path.a() + (path.b() - path.a()) * s / (samples - 1);
    const BlockOperator b = path.at(t);
    int branch = 0;
    for (std::size_t k = 0; k < b.block_count(); ++k) {
      const HermitianEigen eig = hermitian_eigen(b.block(k));
      for (Eigen::Index i = 0; i < eig.values.size(); ++i)
        out << t << "," << branch++ << "," << eig.values(i) << "," << alg.weights()[k] << "\n";
    }
  }
  return out.str();
}

void emit_path_tables(Context& ctx, const OperatorPath& path, const FlowReport& report) {
  ctx.out.tables["segments.csv"] = report.to_csv();
  const int limit = ctx.params.value("plot_max_dim", 4000);
  if (path.algebra()->total_dim() <= limit)
    ctx.out.tables["plot.csv"] = plot_csv(path, ctx.params.value("plot_samples", 51));
}

double chi_difference(const OperatorPath& path) {
  return chi_trace(path.at(path.b())).trace - chi_trace(path.at(path.a())).trace;
}

// ---- path-flow -------------------------------------------------------------

json run_path_flow(Context& ctx) {
  const auto& p = ctx.params;
  const std::string model = p.at("model").get<std::string>();
  const std::string method = p.value("method", "partition");
  json result;
  Checks checks;
  if (model == "random") {
    Random rng = ctx.rng();
    const int count = p.value("count", 100);
    const int max_blocks = p.value("max_blocks", 4);
    const int max_dim = p.value("max_dim", 8);
    const int knots = p.value("knots", 4);
    double worst_oracle = 0.0, worst_chi = 0.0;
    json values = json::array();
    for (int i = 0; i < count; ++i) {
      const AlgebraPtr alg = rng.algebra(max_blocks, max_dim);
      const OperatorPath path = rng.piecewise_path(alg, knots);
      const double partition = spectral_flow_phillips(path, ctx.flow()).value;
      const double oracle = spectral_flow_crossing_oracle(path, 64, ctx.flow()).value;
      const double chi = chi_difference(path);
      worst_oracle = std::max(worst_oracle, std::abs(partition - oracle));
      worst_chi = std::max(worst_chi, std::abs(partition - chi));
      values.push_back({{"partition", partition}, {"oracle", oracle}, {"chi_difference", chi}});
    }
    result["value"] = worst_oracle;
    result["paths"] = values;
    checks.add("max |partition - oracle|", worst_oracle, 0.0, 1e-9);
    checks.add("max |partition - chi difference|", worst_chi, 0.0, 1e-9);
    checks.write(result);
    return result;
  }

  std::optional<OperatorPath> path;
  std::optional<double> expected;
  double tolerance = 0.0;
  if (model == "step-translation") {
    const double h = p.value("h", 1e-3);
    const double shift = p.value("shift", 1.3);
    path = step_translation_path(p.value("lo", -5.0), p.value("hi", 5.0), h, shift);
    expected = shift;
    tolerance = 2.0 * h;
  } else if (model == "piecewise-linear") {
    std::vector<double> knots = p.at("knots").get<std::vector<double>>();
    std::vector<BlockOperator> ops;
    for (const auto& j : p.at("operators")) ops.push_back(block_operator_from_json(j));
    path = piecewise_linear_path(std::move(knots), std::move(ops));
  } else {
    throw DomainError("unknown path-flow model '" + model + "'");
  }
  FlowReport report;
  if (method == "partition") {
    report = spectral_flow_phillips(*path, ctx.flow());
  } else if (method == "oracle") {
    report = spectral_flow_crossing_oracle(*path, p.value("samples", 64), ctx.flow());
  } else {
    throw DomainError("unknown path-flow method '" + method + "'");
  }
  result = report.to_json();
  result["chi_difference"] = chi_difference(*path);
  if (expected) checks.add("flow vs shift", report.value, *expected, tolerance);
  checks.add("flow vs chi difference", report.value, result["chi_difference"].get<double>(), 1e-9);
  checks.write(result);
  emit_path_tables(ctx, *path, report);
  return result;
}

// ---- involution ------------------------------------------------------------

// P, Q with equal per-block ranks are in generic position, so ker(P+Q-1) = 0.
std::pair<Projection, Projection> random_pair(Random& rng, int max_blocks, int max_dim,
                                              bool equal_ranks) {
  const AlgebraPtr alg = rng.algebra(max_blocks, max_dim);
  if (!equal_ranks) {
    Projection p = rng.projection(alg);
    Projection q = rng.projection(alg);
    return {p, q};
  }
  std::vector<int> ranks;
  for (int d : alg->block_dims()) ranks.push_back(rng.integer(0, d));
  Projection p = rng.projection(alg, ranks);
  Projection q = rng.projection(alg, ranks);
  return {p, q};
}

json involution_record(const Projection& p, const Projection& q,
                       const std::vector<std::string>& functions, const FlowOptions& flow,
                       double& worst_mutual, double& worst_sf, double& worst_residual) {
  json rec;
  const double sf = spectral_flow_phillips(involution_path(p, q), flow).value;
  rec["sf"] = sf;
  rec["trace_difference"] = (trace(p.op()) - trace(q.op())).real();
  json odd = json::object();
  std::vector<double> vals;
  for (const auto& name : functions) {
    const double v = odd_function_flow(p, q, OddFunction::named(name));
    odd[name] = v;
    vals.push_back(v);
    worst_sf = std::max(worst_sf, std::abs(v - sf));
  }
  for (double a : vals)
    for (double b : vals) worst_mutual = std::max(worst_mutual, std::abs(a - b));
  rec["odd_function_flows"] = odd;
  const auto kd = kernel_decomposition(p, q);
  rec["dim_ker_q_in_ran_p"] = kd.dim_ker_q_in_ran_p;
  rec["dim_ker_p_in_ran_q"] = kd.dim_ker_p_in_ran_q;
  const double residual = intertwiner_check(p, q).max_residual;
  rec["intertwiner_residual"] = residual;
  worst_residual = std::max(worst_residual, residual);
  return rec;
}

json run_involution(Context& ctx) {
  const auto& p = ctx.params;
  const auto functions =
      p.value("functions", std::vector<std::string>{"x", "x^3", "x^5"});
  json result;
  Checks checks;
  double mutual = 0.0, vs_sf = 0.0, residual = 0.0;
  json records = json::array();
  if (p.contains("random")) {
    const auto& r = p["random"];
    Random rng = ctx.rng();
    const bool trivial = r.value("trivial_kernel", false);
    double worst_abs_sf = 0.0;
    for (int i = 0, n = r.value("count", 50); i < n; ++i) {
      auto [pp, qq] = random_pair(rng, r.value("max_blocks", 3), r.value("max_dim", 6), trivial);
      records.push_back(involution_record(pp, qq, functions, ctx.flow(), mutual, vs_sf, residual));
      worst_abs_sf = std::max(worst_abs_sf, std::abs(records.back()["sf"].get<double>()));
    }
    if (trivial) {
      checks.flag("sf exactly 0 for every pair", worst_abs_sf == 0.0);
      result["value"] = worst_abs_sf;
    } else {
      result["value"] = vs_sf;
    }
  } else {
    const Projection pp(block_operator_from_json(p.at("P")));
    const Projection qq(block_operator_from_json(p.at("Q")));
    records.push_back(involution_record(pp, qq, functions, ctx.flow(), mutual, vs_sf, residual));
    result["value"] = records.back()["sf"];
  }
  result["pairs"] = records;
  checks.add("odd-function flows mutually", mutual, 0.0, 1e-10);
  checks.add("odd-function flow vs sf", vs_sf, 0.0, 1e-9);
  checks.add("intertwiner residual", residual, 0.0, 1e-9);
  checks.write(result);
  return result;
}

// ---- integral --------------------------------------------------------------

struct GaugeSample {
  BlockOperator d;
  BlockOperator u;
};

GaugeSample random_gauge(Random& rng, int max_blocks, int max_dim, double min_gap) {
  while (true) {
    const AlgebraPtr alg = rng.algebra(max_blocks, max_dim);
    BlockOperator d = rng.hermitian(alg, 1.0);
    const auto spec = weighted_spectrum(d);
    double gap = std::numeric_limits<double>::infinity();
    for (double v : spec.values) gap = std::min(gap, std::abs(v));
    if (gap < min_gap) continue;
    return {std::move(d), rng.unitary(alg)};
  }
}

json run_integral(Context& ctx) {
  const auto& p = ctx.params;
  const std::string method = p.at("method").get<std::string>();
  const std::string model = p.value("model", "random-gauge");
  const QuadratureOptions quad = ctx.quad();
  json result;
  Checks checks;

  if (model == "circle") {
    if (method != "eaf") throw DomainError("circle model supports the eaf method only");
    const CircleModel cm =
        circle_model(p.value("modes", 64), p.value("offset", 0.3), p.value("winding", 1));
    const auto ts = p.value("t", std::vector<double>{0.5, 1.0, 2.0});
    const double oracle = spectral_flow_phillips(cm.path, ctx.flow()).value;
    json values = json::array();
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (double t : ts) {
      const IntegralReport r = eaf_trace_formula(cm.path, t, cm.gauge, quad);
      values.push_back({{"t", t}, {"value", r.value}, {"quad_error", r.quad_error}});
      checks.add("heat trace at t=" + std::to_string(t), r.value, oracle, 1e-4);
      lo = std::min(lo, r.value);
      hi = std::max(hi, r.value);
    }
    result["value"] = values.empty() ? 0.0 : values[0]["value"].get<double>();
    result["values"] = values;
    result["oracle"] = oracle;
    checks.add("oracle", oracle, p.value("winding", 1), 1e-12);
    checks.add("t-variation", hi - lo, 0.0, 1e-4);
    checks.write(result);
    return result;
  }

  if (model == "grid-multiplier") {
    const double h = p.value("h", 2e-3);
    const double R = p.value("radius", 500.0);
    const double theta = p.value("theta", 0.5);
    const double n = p.value("n", 2.0);
    const MultiplierModel mm = MultiplierModel::uniform(-R, R, h);
    auto alg = WeightedBlockAlgebra::make(std::vector<int>(mm.grid().size(), 1), mm.weights());
    const BlockOperator d = BlockOperator::diagonal(alg, mm.values());
    const BlockOperator b = BlockOperator::scalar(alg, theta);
    const IntegralReport r = method == "theta" ? cp_integral_theta(d, b, quad)
                                               : cp_integral_psummable(d, b, n, quad);
    result["value"] = r.value;
    result["quad_error"] = r.quad_error;
    result["endpoints_matched"] = r.endpoints_matched;
    result["note"] = r.note;
    checks.add("integral vs theta", r.value, theta, h + quad.abs_tol + theta * 2.0 / (std::numbers::pi * R));
    checks.write(result);
    return result;
  }

  if (model != "random-gauge") throw DomainError("unknown integral model '" + model + "'");
  Random rng = ctx.rng();
  const int count = p.value("count", 25);
  const int max_blocks = p.value("max_blocks", 2);
  const int max_dim = p.value("max_dim", 8);
  const auto eps_list = p.value("eps", std::vector<double>{0.1, 1.0});
  json records = json::array();
  double worst = 0.0, worst_eps_var = 0.0, worst_eta = 0.0;
  for (int i = 0; i < count; ++i) {
    const GaugeSample g = random_gauge(rng, max_blocks, max_dim, method == "getzler" ? 1e-3 : 0.0);
    const OperatorPath path = gauge_path(g.d, g.u);
    const double oracle = spectral_flow_phillips(path, ctx.flow()).value;
    json rec{{"oracle", oracle}};
    const BlockOperator b = path.at(1.0) - path.at(0.0);
    if (method == "summable" || method == "psummable" || method == "theta") {
      if (method != "theta")
        for (double n : p.value("n", std::vector<double>{2.0, 4.0})) {
          const double v = cp_integral_psummable(g.d, b, n, quad).value;
          rec["psummable_n" + std::to_string(static_cast<int>(n))] = v;
          worst = std::max(worst, std::abs(v - oracle));
        }
      if (method != "psummable") {
        const double v = cp_integral_theta(g.d, b, quad).value;
        rec["theta"] = v;
        worst = std::max(worst, std::abs(v - oracle));
      }
    } else if (method == "getzler") {
      double lo = std::numeric_limits<double>::infinity(), hi = -lo;
      for (double eps : eps_list) {
        const double v = getzler_flow(path, eps, quad).value;
        rec["eps_" + std::to_string(eps)] = v;
        worst = std::max(worst, std::abs(v - oracle));
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        worst_eta = std::max(worst_eta, std::abs(eta_approx(g.d, eps) - eta_approx_quadrature(g.d, eps, quad)));
      }
      worst_eps_var = std::max(worst_eps_var, hi - lo);
    } else {
      throw DomainError("unknown integral method '" + method + "'");
    }
    records.push_back(rec);
  }
  result["paths"] = records;
  result["value"] = worst;
  checks.add("max |integral - oracle|", worst, 0.0, 1e-6);
  if (method == "getzler") {
    checks.add("eps variation", worst_eps_var, 0.0, 1e-6);
    checks.add("eta closed form vs quadrature", worst_eta, 0.0, 1e-8);
  }
  checks.write(result);
  return result;
}

// ---- toeplitz --------------------------------------------------------------

Frequency parse_frequency(const json& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    const auto slash = s.find('/');
    if (slash == std::string::npos) return Frequency::rational(std::stoll(s));
    return Frequency::rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
  }
  if (j.is_number_integer()) return Frequency::rational(j.get<std::int64_t>());
  return Frequency(j.get<double>());
}

json run_toeplitz(Context& ctx) {
  const auto& p = ctx.params;
  const std::string method = p.at("method").get<std::string>();
  json result;
  Checks checks;
  const Matrix one = Matrix::Identity(1, 1);
  if (method == "gohberg-krein") {
    const int window = p.value("window", 200);
    json rows = json::array();
    for (int k : p.value("k", std::vector<int>{-3, -2, -1, 0, 1, 2, 3})) {
      const TrigPolynomial u = TrigPolynomial::monomial({Frequency::rational(k)}, one);
      const double w = winding_number_circle(u, ctx.quad());
      const ToeplitzIndex ti = toeplitz_index_halfline(u, window);
      rows.push_back({{"k", k}, {"winding", w}, {"halfline_index", ti.index}});
      checks.add("winding k=" + std::to_string(k), w, -k, 1e-8);
      checks.add("half-line index k=" + std::to_string(k), ti.index, -k, 0.0);
    }
    result["value"] = rows;
  } else if (method == "multiplier") {
    const double theta = p.value("theta", 0.1416);
    const double step = p.value("step", 1e-3);
    const double reach = std::abs(theta) + 2.0;
    const MultiplierFlow mf =
        multiplier_spectral_flow(MultiplierModel::uniform(-reach, reach, step), theta);
    result["value"] = mf.value;
    result["warnings"] = mf.warnings;
    checks.add("multiplier flow vs theta", mf.value, theta, 1.5e-3);
    json lesch = json::array();
    for (const auto& lj : p.value("lambdas", json::array({0.5, 1.0, -2.0}))) {
      const Frequency lam = parse_frequency(lj);
      const Complex v = lesch_pairing(TrigPolynomial::monomial({lam}, one), {1.0});
      lesch.push_back({{"lambda", lam.value()}, {"value", v.real()}, {"imag", v.imag()}});
      checks.add("lesch lambda=" + std::to_string(lam.value()), v.real(),
                 -lam.value() / (2.0 * std::numbers::pi), 1e-12);
    }
    result["lesch"] = lesch;
    const auto rows = conventions_report(p.value("conventions_lambda", 0.5));
    ctx.out.tables["conventions.csv"] = conventions_csv(rows);
    for (const auto& r : rows)
      if (r.formula == "lesch_pairing")
        checks.add("lesch / oracle ratio", r.ratio, 1.0 / (2.0 * std::numbers::pi), 1e-3);
  } else if (method == "symbol") {
    const TrigPolynomial u = TrigPolynomial::from_json(p.at("symbol"));
    const double w = winding_number_circle(u, ctx.quad());
    const ToeplitzIndex ti = toeplitz_index_halfline(u, p.value("window", 200));
    result["value"] = w;
    result["halfline_index"] = ti.index;
    result["ker_dim"] = ti.ker_dim;
    result["coker_dim"] = ti.coker_dim;
    checks.add("winding vs half-line index", w, ti.index, 1e-8);
  } else {
    throw DomainError("unknown toeplitz method '" + method + "'");
  }
  checks.write(result);
  return result;
}

// ---- ap --------------------------------------------------------------------

TrigPolynomial random_su2_symbol(Random& rng, int factors, int max_freq) {
  TrigPolynomial u = TrigPolynomial::identity(2, 3);
  Matrix e11 = Matrix::Zero(2, 2);
  e11(0, 0) = 1.0;
  for (int f = 0; f < factors; ++f) {
    FrequencyVector xi, minus;
    bool zero = true;
    while (zero) {
      xi.clear();
      minus.clear();
      for (int c = 0; c < 3; ++c) {
        const int v = rng.integer(-max_freq, max_freq);
        zero = zero && v == 0;
        xi.push_back(Frequency::rational(v));
        minus.push_back(Frequency::rational(-v));
      }
    }
    const Matrix v = rng.haar_unitary(2);
    Matrix proj = v * e11 * v.adjoint();
    proj = 0.5 * (proj + proj.adjoint());
    u = u * TrigPolynomial::spectral_monomial(xi, minus, proj);
  }
  return u;
}

json run_ap(Context& ctx) {
  const auto& p = ctx.params;
  json result;
  Checks checks;
  const Matrix one = Matrix::Identity(1, 1);
  if (p.contains("coefficients")) {
    json tables = json::array();
    for (int n : p["coefficients"].get<std::vector<int>>()) {
      const CoefficientTable t = local_index_coefficients(n);
      checks.add("sigma vs Gamma n=" + std::to_string(n), t.checks.sigma_gamma_residual, 0.0, 1e-12);
      checks.add("duplication n=" + std::to_string(n), t.checks.duplication_residual, 0.0, 1e-12);
      checks.flag("alpha(0) = 1/n! n=" + std::to_string(n), t.checks.alpha_zero_is_inverse_factorial);
      tables.push_back({{"n", n},
                        {"theorem_constant", {t.theorem_constant.real(), t.theorem_constant.imag()}},
                        {"checks", t.to_json()["checks"]}});
    }
    result["value"] = tables;
  } else if (p.contains("lambdas")) {
    json rows = json::array();
    for (const auto& lj : p["lambdas"]) {
      const Frequency lam = parse_frequency(lj);
      const ApFlow f = ap_spectral_flow(TrigPolynomial::monomial({lam}, one));
      const double reach = std::abs(lam.value()) + 2.0;
      const double oracle =
          multiplier_spectral_flow(MultiplierModel::uniform(-reach, reach, 1e-4), -lam.value()).value;
      rows.push_back({{"lambda", lam.value()}, {"value", f.value}, {"imag", f.imag_residual},
                      {"oracle", oracle}});
      checks.add("ap flow lambda=" + std::to_string(lam.value()), f.value, -lam.value(), 1e-12);
      checks.add("imaginary residual", f.imag_residual, 0.0, 1e-10);
      checks.add("multiplier oracle", oracle, f.value, 2e-4);
    }
    result["value"] = rows;
  } else if (p.contains("random_su2")) {
    const auto& r = p["random_su2"];
    Random rng = ctx.rng();
    const TrigPolynomial u = random_su2_symbol(rng, r.value("factors", 3), r.value("max_freq", 1));
    const ApFlow f = ap_spectral_flow(u);
    const double degree = degree_integral(u, r.value("grid", 24));
    result["value"] = f.value;
    result["imag_residual"] = f.imag_residual;
    result["degree_integral"] = degree;
    result["terms"] = u.terms().size();
    result["symbol"] = u.to_json();
    checks.add("ap flow vs degree integral", f.value, degree, 0.01 * std::max(1.0, std::abs(degree)));
    checks.add("imaginary residual", f.imag_residual, 0.0, 1e-10);
  } else if (p.contains("symbol")) {
    const TrigPolynomial u = TrigPolynomial::from_json(p["symbol"]);
    const ApFlow f = ap_spectral_flow(u);
    result["value"] = f.value;
    result["imag_residual"] = f.imag_residual;
    checks.add("imaginary residual", f.imag_residual, 0.0, 1e-10);
    if (p.contains("degree_grid")) {
      const double degree = degree_integral(u, p["degree_grid"].get<int>());
      result["degree_integral"] = degree;
      checks.add("ap flow vs degree integral", f.value, degree, 0.01 * std::max(1.0, std::abs(degree)));
    }
  } else {
    throw DomainError("ap scenario needs one of coefficients, lambdas, random_su2, symbol");
  }
  checks.write(result);
  return result;
}

// ---- aps -------------------------------------------------------------------

json run_aps(Context& ctx) {
  const auto& p = ctx.params;
  json result;
  Checks checks;
  std::vector<std::pair<Projection, Projection>> pairs;
  if (p.contains("random")) {
    const auto& r = p["random"];
    Random rng = ctx.rng();
    for (int i = 0, n = r.value("count", 20); i < n; ++i)
      pairs.push_back(random_pair(rng, r.value("max_blocks", 3), r.value("max_dim", 5), false));
  } else {
    pairs.emplace_back(Projection(block_operator_from_json(p.at("P"))),
                       Projection(block_operator_from_json(p.at("Q"))));
  }
  MonodromyOptions mo;
  mo.steps = p.value("steps", 64);
  double worst = 0.0, worst_residual = 0.0;
  int explicit_checked = 0;
  json records = json::array();
  for (const auto& [pp, qq] : pairs) {
    const OperatorPath path = involution_path(pp, qq);
    const ApsReport rep = aps_index(BoundaryValueProblem{path, qq, pp, mo});
    const double sf = spectral_flow_phillips(path, ctx.flow()).value;
    worst = std::max(worst, std::abs(rep.index - sf));
    // explicit solution on ran P ∩ ker Q: w(t) = exp(-(t^2 - t)) w(0)
    const auto kd = kernel_decomposition(pp, qq);
    double residual = 0.0;
    bool any = false;
    for (const auto& basis : kd.ker_q_in_ran_p) any = any || basis.cols() > 0;
    if (any) {
      ++explicit_checked;
      for (int s = 1; s <= 10; ++s) {
        const double t = 0.1 * s;
        const BlockOperator phi = propagate(path, t, 256);
        for (std::size_t k = 0; k < phi.block_count(); ++k) {
          const Matrix& v = kd.ker_q_in_ran_p[k];
          if (v.cols() == 0) continue;
          const Matrix diff = phi.block(k) * v - std::exp(-(t * t - t)) * v;
          residual = std::max(residual, diff.cwiseAbs().maxCoeff());
        }
      }
    }
    worst_residual = std::max(worst_residual, residual);
    records.push_back({{"index", rep.index}, {"kernel", rep.kernel}, {"cokernel", rep.cokernel},
                       {"sf", sf}, {"explicit_residual", residual}});
  }
  result["value"] = worst;
  result["problems"] = records;
  result["explicit_solutions_checked"] = explicit_checked;
  checks.add("max |index - sf|", worst, 0.0, 1e-7);
  checks.add("explicit solution residual", worst_residual, 0.0, 1e-8);
  checks.write(result);
  return result;
}

// ---- dixmier ---------------------------------------------------------------

json run_dixmier(Context& ctx) {
  const auto& p = ctx.params;
  const std::string symbol = p.value("symbol", "bessel");
  const int n = p.value("n", 3);
  if (symbol != "bessel") throw DomainError("unknown dixmier symbol '" + symbol + "'");
  auto norm2 = [](const std::vector<double>& z) {
    double s = 0.0;
    for (double c : z) s += c * c;
    return s;
  };
  // (1 + |zeta|^2)^{-n/2} with principal part |zeta|^{-n}
  const APSymbol a = APSymbol::radial(
      n, -n, [=](const std::vector<double>& z) { return std::pow(1.0 + norm2(z), -0.5 * n); },
      [=](const std::vector<double>& z) { return std::pow(norm2(z), -0.5 * n); });
  const double density = dixmier_density(a);
  const double s = p.value("s", 1e-4);
  const double scaled = scaled_counting(a, s);
  const double sphere = sphere_integral(n, [](const std::vector<double>&) { return 1.0; });
  json result{{"value", density}, {"scaled_counting", scaled}, {"s", s}};
  Checks checks;
  checks.add("density vs Vol(S^{n-1})/n", density, sphere / n, 1e-6);
  checks.add("s N(s) vs density", scaled, density, 0.02 * density);
  checks.write(result);
  return result;
}

// ---- conventions -----------------------------------------------------------

json run_conventions(Context& ctx) {
  const auto rows = conventions_report(ctx.params.value("lambda", 0.5));
  ctx.out.tables["conventions.csv"] = conventions_csv(rows);
  json list = json::array();
  for (const auto& r : rows)
    list.push_back({{"formula", r.formula}, {"paper_ref", r.paper_ref}, {"raw_value", r.raw_value},
                    {"oracle_value", r.oracle_value}, {"ratio", r.ratio}});
  return {{"value", list}};
}

}  // namespace

std::string scenario_directory() { return SFKIT_SCENARIO_DIR; }

json load_scenario(const std::string& file_or_name) {
  namespace fs = std::filesystem;
  std::vector<fs::path> candidates{file_or_name};
  const fs::path dir(scenario_directory());
  candidates.push_back(dir / file_or_name);
  candidates.push_back(dir / (file_or_name + ".json"));
  for (const auto& c : candidates) {
    std::error_code ec;
    if (!fs::is_regular_file(c, ec)) continue;
    std::ifstream in(c);
    try {
      return json::parse(in);
    } catch (const json::exception& e) {
      throw DomainError("scenario " + c.string() + " is not valid JSON: " + e.what());
    }
  }
  throw DomainError("scenario '" + file_or_name + "' not found");
}

ScenarioOutput run_scenario(const json& scenario, const RunOptions& opts) {
  if (!scenario.is_object()) throw DomainError("scenario must be a JSON object");
  const std::string version = scenario.value("version", std::string(kScenarioVersion));
  if (version != kScenarioVersion) throw DomainError("unsupported scenario version '" + version + "'");
  if (!scenario.contains("kind")) throw DomainError("scenario has no kind");
  const std::string kind = scenario["kind"].get<std::string>();
  static const json empty = json::object();
  const json& params = scenario.contains("params") ? scenario["params"] : empty;
  Context ctx{params, opts, std::nullopt, {}};
  if (opts.seed) ctx.seed = opts.seed;
  else if (scenario.contains("seed")) ctx.seed = scenario["seed"].get<std::uint64_t>();

  json result;
  try {
    if (kind == "path-flow") result = run_path_flow(ctx);
    else if (kind == "involution") result = run_involution(ctx);
    else if (kind == "integral") result = run_integral(ctx);
    else if (kind == "toeplitz") result = run_toeplitz(ctx);
    else if (kind == "ap") result = run_ap(ctx);
    else if (kind == "aps") result = run_aps(ctx);
    else if (kind == "dixmier") result = run_dixmier(ctx);
    else if (kind == "conventions") result = run_conventions(ctx);
    else throw DomainError("unknown scenario kind '" + kind + "'");
  } catch (const json::exception& e) {
    throw DomainError(std::string("invalid scenario parameters: ") + e.what());
  }
  ctx.out.result = {{"version", kScenarioVersion},
                    {"kind", kind},
                    {"name", scenario.value("name", std::string())},
                    {"result", result}};
  if (ctx.seed) ctx.out.result["seed"] = *ctx.seed;
  return std::move(ctx.out);
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::structural:
    case ErrorKind::domain: return 1;
    case ErrorKind::convergence: return 2;
    case ErrorKind::precision: return 3;
  }
  return 1;
}

json error_json(const Error& e) {
  json j{{"kind", to_string(e.kind())}, {"message", e.what()}, {"exit_code", exit_code(e.kind())}};
  if (const auto* c = dynamic_cast<const ConvergenceError*>(&e)) j["achieved"] = c->achieved();
  if (const auto* p = dynamic_cast<const PrecisionError*>(&e)) j["value"] = p->value();
  return {{"error", j}};
}

}  // namespace sfkit
