#include "sfkit/integrals.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "sfkit/errors.hpp"
#include "sfkit/flow.hpp"

namespace sfkit {
namespace {

constexpr double kSqrtPi = 1.772453850905516027298167483341145;

// tau(B f(D0 + sB)) without materialising D0 + sB as an operator.
double trace_along_line(const BlockOperator& d0, const BlockOperator& b, double s,
                        const std::function<double(double)>& f) {
  const auto& w = d0.algebra()->weights();
  double total = 0.0;
  for (std::size_t k = 0; k < d0.block_count(); ++k) {
    const Matrix& bk = b.block(k);
    const Matrix& dk = d0.block(k);
    if (dk.rows() == 1) {
      const double bv = bk(0, 0).real();
      if (bv != 0.0) total += w[k] * bv * f(dk(0, 0).real() + s * bv);
      continue;
    }
    const Matrix dt = dk + s * bk;
    const HermitianEigen eig = hermitian_eigen(dt);
    const Matrix rotated = eig.vectors.adjoint() * bk * eig.vectors;
    double block_sum = 0.0;
    for (Eigen::Index i = 0; i < rotated.rows(); ++i)
      block_sum += f(eig.values(i)) * rotated(i, i).real();
    total += w[k] * block_sum;
  }
  return total;
}

void require_hermitian(const BlockOperator& op, const char* what) {
  if (!op.is_hermitian(1e-10)) throw DomainError(std::string(what) + " must be Hermitian");
}

// Merges equal eigenvalues so spectra can be compared as measures.
std::vector<std::pair<double, double>> spectral_measure(const BlockOperator& b) {
  const WeightedSpectrum spec = weighted_spectrum(b);
  std::vector<std::pair<double, double>> out;
  for (std::size_t i = 0; i < spec.values.size(); ++i) {
    if (!out.empty() && std::abs(spec.values[i] - out.back().first) <= 1e-9)
      out.back().second += spec.weights[i];
    else
      out.emplace_back(spec.values[i], spec.weights[i]);
  }
  return out;
}

IntegralReport heat_integral(const OperatorPath& path, double t, const QuadratureOptions& quad) {
  if (!(t > 0.0)) throw DomainError("heat parameter t must be positive");
  auto integrand = [&](double u) {
    return trace_weighted_function(path.derivative(u), path.at(u),
                                   [t](double x) { return std::exp(-t * x * x); });
  };
  const auto r = integrate(integrand, path.a(), path.b(), quad, path.breakpoints());
  IntegralReport out;
  const double scale = std::sqrt(t) / kSqrtPi;
  out.value = scale * r.value;
  out.quad_error = scale * r.error;
  out.evaluations = r.evaluations;
  return out;
}

}  // namespace

void SummabilityParams::validate() const {
  if (!(n > 1.0)) throw DomainError("summability order n must exceed 1");
  if (!(eps > 0.0)) throw DomainError("heat parameter eps must be positive");
}

BlockOperator bounded_transform(const BlockOperator& d) {
  require_hermitian(d, "bounded_transform input");
  return apply_function(d, [](double x) { return x / std::sqrt(1.0 + x * x); });
}

double trace_weighted_function(const BlockOperator& b, const BlockOperator& d,
                               const std::function<double(double)>& f) {
  require_same_algebra(b, d, "trace_weighted_function");
  return trace_along_line(d, b, 0.0, f);
}

double psummable_constant(double n) {
  if (!(n > 1.0)) throw DomainError("C_{n/2} needs n > 1");
  return kSqrtPi * std::exp(std::lgamma(0.5 * (n - 1.0)) - std::lgamma(0.5 * n));
}

double psummable_constant_numeric(double n, const QuadratureOptions& quad) {
  if (!(n > 1.0)) throw DomainError("C_{n/2} needs n > 1");
  // x = tan(phi) turns the integrand into cos(phi)^{n-2} on (-pi/2, pi/2)
  const auto r = integrate([n](double phi) { return std::pow(std::cos(phi), n - 2.0); },
                           -0.5 * std::numbers::pi, 0.5 * std::numbers::pi, quad);
  return r.value;
}

IntegralReport cp_integral_psummable(const BlockOperator& d0, const BlockOperator& b, double n,
                                     const QuadratureOptions& quad) {
  SummabilityParams{n, 1.0, quad}.validate();
  require_same_algebra(d0, b, "cp_integral_psummable");
  require_hermitian(d0, "D0");
  require_hermitian(b, "B");
  const double half = 0.5 * n;
  auto kernel = [half](double x) { return std::pow(1.0 + x * x, -half); };
  const auto r = integrate([&](double s) { return trace_along_line(d0, b, s, kernel); }, 0.0, 1.0,
                           quad);
  const double c = psummable_constant(n);
  IntegralReport out;
  out.value = r.value / c;
  out.quad_error = r.error / c;
  out.evaluations = r.evaluations;
  out.endpoints_matched =
      std::abs(chi_trace(d0).trace - chi_trace(d0 + b).trace) <= 1e-9 * d0.algebra()->total_weight();
  if (!out.endpoints_matched) out.note = "correction terms omitted";
  return out;
}

IntegralReport cp_integral_theta(const BlockOperator& d0, const BlockOperator& b,
                                 const QuadratureOptions& quad) {
  require_same_algebra(d0, b, "cp_integral_theta");
  require_hermitian(d0, "D0");
  require_hermitian(b, "B");
  auto kernel = [](double x) { return std::exp(-x * x); };
  const auto r = integrate([&](double s) { return trace_along_line(d0, b, s, kernel); }, 0.0, 1.0,
                           quad);
  IntegralReport out;
  out.value = r.value / kSqrtPi;
  out.quad_error = r.error / kSqrtPi;
  out.evaluations = r.evaluations;
  out.endpoints_matched =
      std::abs(chi_trace(d0).trace - chi_trace(d0 + b).trace) <= 1e-9 * d0.algebra()->total_weight();
  if (!out.endpoints_matched) out.note = "correction terms omitted";
  return out;
}

double eta_approx(const BlockOperator& d, double eps) {
  if (!(eps > 0.0)) throw DomainError("eta_eps needs eps > 0");
  require_hermitian(d, "eta_eps input");
  const WeightedSpectrum spec = weighted_spectrum(d);
  double total = 0.0;
  for (std::size_t i = 0; i < spec.values.size(); ++i) {
    const double lam = spec.values[i];
    if (lam == 0.0) continue;
    total += spec.weights[i] * (lam > 0 ? 1.0 : -1.0) * std::erfc(std::abs(lam) * std::sqrt(eps));
  }
  return total;
}

double eta_approx_quadrature(const BlockOperator& d, double eps, const QuadratureOptions& quad) {
  if (!(eps > 0.0)) throw DomainError("eta_eps needs eps > 0");
  require_hermitian(d, "eta_eps input");
  const WeightedSpectrum spec = weighted_spectrum(d);
  // t = s^2: (1/sqrt(pi)) int_eps^inf tau(D e^{-tD^2}) t^{-1/2} dt
  //        = (2/sqrt(pi)) int_{sqrt(eps)}^inf tau(D e^{-s^2 D^2}) ds
  auto integrand = [&](double s) {
    double acc = 0.0;
    for (std::size_t i = 0; i < spec.values.size(); ++i) {
      const double lam = spec.values[i];
      acc += spec.weights[i] * lam * std::exp(-s * s * lam * lam);
    }
    return acc;
  };
  const auto r = integrate_to_infinity(integrand, std::sqrt(eps), quad);
  return 2.0 * r.value / kSqrtPi;
}

GetzlerReport getzler_flow(const OperatorPath& path, double eps, const QuadratureOptions& quad) {
  if (!(eps > 0.0)) throw DomainError("getzler_flow needs eps > 0");
  const BlockOperator da = path.at(path.a());
  const BlockOperator db = path.at(path.b());
  for (const auto& [label, t, op] :
       {std::tuple{"start", path.a(), &da}, std::tuple{"end", path.b(), &db}}) {
    const WeightedSpectrum spec = weighted_spectrum(*op);
    for (double lam : spec.values)
      if (std::abs(lam) <= kInvertibilityTol) {
        std::ostringstream msg;
        msg << "getzler_flow: " << label << " endpoint t=" << t
            << " is not invertible (eigenvalue " << lam << ")";
        throw DomainError(msg.str());
      }
  }
  auto integrand = [&](double t) {
    return trace_weighted_function(path.derivative(t), path.at(t),
                                   [eps](double x) { return std::exp(-eps * x * x); });
  };
  const auto r = integrate(integrand, path.a(), path.b(), quad, path.breakpoints());
  GetzlerReport out;
  const double scale = std::sqrt(eps) / kSqrtPi;
  out.integral_term = scale * r.value;
  out.quad_error = scale * r.error;
  out.eta_a = eta_approx(da, eps);
  out.eta_b = eta_approx(db, eps);
  out.value = out.integral_term + 0.5 * out.eta_b - 0.5 * out.eta_a;
  return out;
}

IntegralReport eaf_trace_formula(const OperatorPath& path, double t, const QuadratureOptions& quad) {
  const auto sa = spectral_measure(path.at(path.a()));
  const auto sb = spectral_measure(path.at(path.b()));
  bool same = sa.size() == sb.size();
  for (std::size_t i = 0; same && i < sa.size(); ++i)
    same = std::abs(sa[i].first - sb[i].first) <= 1e-9 && std::abs(sa[i].second - sb[i].second) <= 1e-12;
  if (!same)
    throw DomainError("eaf_trace_formula: endpoint spectra differ; the endpoints must be conjugate");
  return heat_integral(path, t, quad);
}

IntegralReport eaf_trace_formula(const OperatorPath& path, double t, const BlockOperator& g,
                                 const QuadratureOptions& quad) {
  const BlockOperator ba = path.at(path.a());
  const BlockOperator bb = path.at(path.b());
  require_same_algebra(ba, g, "eaf_trace_formula");
  const double scale = std::max(1.0, std::max(ba.norm(), bb.norm()));
  const double residual = (bb * g - g * ba).norm();
  if (residual > 1e-9 * scale) {
    std::ostringstream msg;
    msg << "eaf_trace_formula: gauge does not intertwine the endpoints (residual " << residual << ")";
    throw DomainError(msg.str());
  }
  if ((g * g.adjoint() * g - g).norm() > 1e-9)
    throw DomainError("eaf_trace_formula: gauge is not a partial isometry");
  return heat_integral(path, t, quad);
}

CircleModel circle_model(int modes, double offset, int winding) {
  if (modes < 1) throw DomainError("circle_model needs at least one mode");
  const int size = 2 * modes + 1;
  auto algebra = WeightedBlockAlgebra::matrices(size);
  auto diag_op = [algebra, size](auto&& entry) {
    Matrix m = Matrix::Zero(size, size);
    for (int i = 0; i < size; ++i) m(i, i) = entry(i);
    return BlockOperator(algebra, {m});
  };
  auto eval = [=](double u) {
    const double shift = winding * smooth_cutoff(u);
    return diag_op([&](int i) { return (i - modes) + offset + shift; });
  };
  auto deriv = [=](double u) {
    const double ds = winding * smooth_cutoff_derivative(u);
    return diag_op([&](int) { return ds; });
  };
  Matrix g = Matrix::Zero(size, size);
  for (int i = 0; i < size; ++i) {
    const int target = i - winding;
    if (target >= 0 && target < size) g(target, i) = 1.0;
  }
  return {OperatorPath(algebra, eval, 0.0, 1.0, deriv, {0.25, 0.75}),
          BlockOperator(algebra, {g})};
}

double bounded_heuristic_integrand(const BlockOperator& f, const BlockOperator& f_dot, double r,
                                   double sigma) {
  require_hermitian(f, "F");
  if (f.norm() >= 1.0) throw DomainError("bounded heuristic needs ||F|| < 1");
  return trace_weighted_function(f_dot, f, [r, sigma](double x) {
    const double gap = std::abs(1.0 - x * x);
    return std::pow(gap, -r) * std::exp(-std::pow(gap, -sigma));
  });
}

}  // namespace sfkit
