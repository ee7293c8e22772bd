#include "sfkit/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "sfkit/errors.hpp"
#include "sfkit/parallel.hpp"

namespace sfkit {

nlohmann::json FlowReport::to_json() const {
  nlohmann::json segs = nlohmann::json::array();
  for (const auto& s : segments)
    segs.push_back({{"t_lo", s.t_lo}, {"t_hi", s.t_hi}, {"ec", s.contribution}, {"cumulative", s.cumulative}});
  nlohmann::json cross = nlohmann::json::array();
  for (const auto& [lo, hi] : crossings) cross.push_back({lo, hi});
  return {{"value", value},
          {"method", method},
          {"segments", segs},
          {"crossings", cross},
          {"diagnostics", {{"min_gap", min_gap}, {"refinement_depth", refinement_depth}}}};
}

std::string FlowReport::to_csv() const {
  std::ostringstream os;
  os.precision(17);
  os << "t_lo,t_hi,ec,cumulative\n";
  for (const auto& s : segments) os << s.t_lo << ',' << s.t_hi << ',' << s.contribution << ',' << s.cumulative << '\n';
  return os.str();
}

ChiTrace chi_trace(const BlockOperator& b, double kernel_tol) {
  if (!b.is_hermitian()) throw DomainError("chi_trace: operator is not Hermitian");
  ChiTrace out;
  out.min_abs_eigenvalue = std::numeric_limits<double>::infinity();
  const auto& w = b.algebra()->weights();
  for (std::size_t k = 0; k < b.block_count(); ++k) {
    const HermitianEigen eig = hermitian_eigen(b.block(k));
    for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
      const double l = eig.values(i);
      if (l >= -kernel_tol) out.trace += w[k];
      out.min_abs_eigenvalue = std::min(out.min_abs_eigenvalue, std::abs(l));
    }
  }
  return out;
}

namespace {

struct Sample {
  double t;
  Projection chi;
  double min_gap;
};

Sample sample_projection(const OperatorPath& path, double t, const FlowOptions& opts) {
  const BlockOperator b = path.at(t);
  const ChiTrace ct = chi_trace(b, opts.kernel_tol);
  return {t, spectral_projection_nonneg(b, opts.kernel_tol), ct.min_abs_eigenvalue};
}

struct PartitionPiece {
  std::vector<FlowSegment> segments;
  double min_gap = std::numeric_limits<double>::infinity();
  int depth = 0;
};

void partition_refine(const OperatorPath& path, const Sample& lo, const Sample& hi, int depth,
                     const FlowOptions& opts, PartitionPiece& out) {
  const double whole = essential_codimension(lo.chi, hi.chi, opts.rank_tol);
  const Sample mid = sample_projection(path, 0.5 * (lo.t + hi.t), opts);
  out.min_gap = std::min(out.min_gap, mid.min_gap);
  const double left = essential_codimension(lo.chi, mid.chi, opts.rank_tol);
  const double right = essential_codimension(mid.chi, hi.chi, opts.rank_tol);
  if (std::abs(whole - (left + right)) < opts.stability_tol) {
    out.segments.push_back({lo.t, hi.t, whole, 0.0});
    out.depth = std::max(out.depth, depth);
    return;
  }
  if (depth + 1 > opts.max_depth) {
    std::ostringstream os;
    os.precision(17);
    os << "partition did not stabilise on [" << lo.t << ", " << hi.t << "]";
    throw ConvergenceError(os.str(), std::abs(whole - (left + right)));
  }
  partition_refine(path, lo, mid, depth + 1, opts, out);
  partition_refine(path, mid, hi, depth + 1, opts, out);
}

void finish(FlowReport& report) {
  double cum = 0.0;
  for (auto& s : report.segments) {
    cum += s.contribution;
    s.cumulative = cum;
    if (std::abs(s.contribution) > 1e-12) report.crossings.emplace_back(s.t_lo, s.t_hi);
  }
  report.value = cum;
}

}  // namespace

FlowReport spectral_flow_phillips(const OperatorPath& path, const FlowOptions& opts) {
  const int n = std::max(1, opts.initial_segments);
  const double a = path.a(), b = path.b();
  std::vector<double> knots(n + 1);
  for (int i = 0; i <= n; ++i) knots[i] = i == n ? b : a + (b - a) * i / n;

  std::vector<std::optional<Sample>> samples(knots.size());
  parallel_for(knots.size(), [&](std::size_t i) { samples[i] = sample_projection(path, knots[i], opts); });

  std::vector<PartitionPiece> pieces(n);
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
    partition_refine(path, *samples[i], *samples[i + 1], 0, opts, pieces[i]);
  });

  FlowReport report;
  report.method = "partition";
  report.min_gap = std::numeric_limits<double>::infinity();
  for (const auto& s : samples) report.min_gap = std::min(report.min_gap, s->min_gap);
  for (auto& piece : pieces) {
    report.segments.insert(report.segments.end(), piece.segments.begin(), piece.segments.end());
    report.min_gap = std::min(report.min_gap, piece.min_gap);
    report.refinement_depth = std::max(report.refinement_depth, piece.depth);
  }
  finish(report);
  return report;
}

namespace {

struct OraclePoint {
  double t;
  ChiTrace chi;
};

void oracle_refine(const OperatorPath& path, const OraclePoint& lo, const OraclePoint& hi, int depth,
                   const FlowOptions& opts, std::vector<FlowSegment>& out, int& max_depth,
                   double& min_gap) {
  const double contribution = hi.chi.trace - lo.chi.trace;
  const double small = 10.0 * opts.kernel_tol;
  const bool near_zero = lo.chi.min_abs_eigenvalue < small || hi.chi.min_abs_eigenvalue < small;
  if (contribution == 0.0 || !near_zero || depth >= opts.max_depth) {
    out.push_back({lo.t, hi.t, contribution, 0.0});
    max_depth = std::max(max_depth, depth);
    return;
  }
  const double tm = 0.5 * (lo.t + hi.t);
  const OraclePoint mid{tm, chi_trace(path.at(tm), opts.kernel_tol)};
  min_gap = std::min(min_gap, mid.chi.min_abs_eigenvalue);
  oracle_refine(path, lo, mid, depth + 1, opts, out, max_depth, min_gap);
  oracle_refine(path, mid, hi, depth + 1, opts, out, max_depth, min_gap);
}

}  // namespace

FlowReport spectral_flow_crossing_oracle(const OperatorPath& path, int samples, const FlowOptions& opts) {
  if (samples < 2) throw DomainError("crossing oracle needs at least 2 samples");
  const double a = path.a(), b = path.b();
  const auto n = static_cast<std::size_t>(samples);
  std::vector<OraclePoint> points(n);
  parallel_for(n, [&](std::size_t i) {
    const double t = i + 1 == n ? b : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    points[i] = {t, chi_trace(path.at(t), opts.kernel_tol)};
  });

  FlowReport report;
  report.method = "crossing-oracle";
  report.min_gap = std::numeric_limits<double>::infinity();
  for (const auto& p : points) report.min_gap = std::min(report.min_gap, p.chi.min_abs_eigenvalue);

  std::vector<std::vector<FlowSegment>> pieces(n - 1);
  std::vector<int> depths(n - 1, 0);
  std::vector<double> gaps(n - 1, std::numeric_limits<double>::infinity());
  parallel_for(n - 1, [&](std::size_t i) {
    oracle_refine(path, points[i], points[i + 1], 0, opts, pieces[i], depths[i], gaps[i]);
  });
  for (std::size_t i = 0; i + 1 < n; ++i) {
    report.segments.insert(report.segments.end(), pieces[i].begin(), pieces[i].end());
    report.refinement_depth = std::max(report.refinement_depth, depths[i]);
    report.min_gap = std::min(report.min_gap, gaps[i]);
  }
  finish(report);
  return report;
}

OperatorPath involution_path(const Projection& p, const Projection& q) {
  require_same_algebra(p.op(), q.op(), "involution_path");
  const BlockOperator one = BlockOperator::identity(p.algebra());
  return linear_path(2.0 * q.op() - one, 2.0 * p.op() - one, 0.0, 1.0);
}

OddFunction::OddFunction(std::string name, Kind kind, std::vector<double> coeffs)
    : name_(std::move(name)), kind_(kind), coeffs_(std::move(coeffs)) {
  validate();
}

OddFunction OddFunction::identity() { return {"x", Kind::polynomial, {0.0, 1.0}}; }
OddFunction OddFunction::cube() { return {"x^3", Kind::polynomial, {0.0, 0.0, 0.0, 1.0}}; }
OddFunction OddFunction::fifth() { return {"x^5", Kind::polynomial, {0.0, 0.0, 0.0, 0.0, 0.0, 1.0}}; }
OddFunction OddFunction::half_pi_sine() { return {"sin(pi x/2)", Kind::sine, {}}; }
OddFunction OddFunction::polynomial(std::vector<double> coeffs) {
  return {"polynomial", Kind::polynomial, std::move(coeffs)};
}

OddFunction OddFunction::named(const std::string& name) {
  if (name == "x") return identity();
  if (name == "x^3" || name == "x3") return cube();
  if (name == "x^5" || name == "x5") return fifth();
  if (name == "sin" || name == "sin(pi x/2)") return half_pi_sine();
  throw DomainError("unknown odd function '" + name + "'");
}

double OddFunction::operator()(double x) const {
  if (kind_ == Kind::sine) return std::sin(0.5 * std::numbers::pi * x);
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

void OddFunction::validate() const {
  for (int i = 0; i <= 40; ++i) {
    const double x = -1.0 + i / 20.0;
    const double fx = (*this)(x), fm = (*this)(-x);
    if (std::abs(fx + fm) > 1e-12 * (1.0 + std::abs(fx)))
      throw DomainError("function '" + name_ + "' is not odd");
  }
  if (std::abs((*this)(1.0)) <= 1e-12) throw DomainError("function '" + name_ + "' vanishes at 1");
}

double odd_function_flow(const Projection& p, const Projection& q, const OddFunction& f) {
  require_same_algebra(p.op(), q.op(), "odd_function_flow");
  const BlockOperator diff = (p.op() - q.op()).hermitian_part();
  return trace(apply_function(diff, [&f](double x) { return f(x); })).real() / f(1.0);
}

KernelDecomposition kernel_decomposition(const Projection& p, const Projection& q, double rank_tol) {
  require_same_algebra(p.op(), q.op(), "kernel_decomposition");
  KernelDecomposition out;
  const auto& w = p.algebra()->weights();
  const auto ran_p = p.range_bases();
  const auto ran_q = q.range_bases();
  for (std::size_t k = 0; k < p.op().block_count(); ++k) {
    auto restricted = [rank_tol](const Matrix& proj, const Matrix& basis) -> Matrix {
      if (basis.cols() == 0) return Matrix(basis.rows(), 0);
      return basis * null_space(proj * basis, rank_tol, rank_tol);
    };
    out.ker_q_in_ran_p.push_back(restricted(q.op().block(k), ran_p[k]));
    out.ker_p_in_ran_q.push_back(restricted(p.op().block(k), ran_q[k]));
    out.dim_ker_q_in_ran_p += w[k] * static_cast<double>(out.ker_q_in_ran_p.back().cols());
    out.dim_ker_p_in_ran_q += w[k] * static_cast<double>(out.ker_p_in_ran_q.back().cols());
  }
  return out;
}

IntertwinerDiagnostics intertwiner_check(const Projection& p, const Projection& q, int grid) {
  const OperatorPath path = involution_path(p, q);
  const BlockOperator sum = path.at(0.0) + path.at(1.0);
  // B0 + B1 has scale 2; rounding noise in a vanishing block must not get a phase
  IntertwinerDiagnostics out{polar_partial_isometry(sum, kDefaultRankTol, 2.0 * kDefaultRankTol), 0.0};
  for (int i = 0; i < grid; ++i) {
    const double t = grid == 1 ? 0.0 : static_cast<double>(i) / (grid - 1);
    const double r = (out.u * path.at(t) - path.at(1.0 - t) * out.u).norm();
    out.max_residual = std::max(out.max_residual, r);
  }
  return out;
}

}  // namespace sfkit
