#include "sfkit/toeplitz.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <limits>
#include <optional>
#include <sstream>

#include "sfkit/errors.hpp"
#include "sfkit/parallel.hpp"

namespace sfkit {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_scalar(const TrigPolynomial& u, const char* what) {
  if (u.N() != 1) throw StructuralError(std::string(what) + " needs a scalar symbol (N = 1)");
}

// min |u| over a uniform sample of [lo, hi] (n = 1)
void require_nonvanishing(const TrigPolynomial& u, double lo, double hi, int samples,
                          const char* what) {
  double worst = std::numeric_limits<double>::infinity();
  double where = lo;
  for (int i = 0; i <= samples; ++i) {
    const double x = lo + (hi - lo) * i / samples;
    const double m = std::abs(u.evaluate({x})(0, 0));
    if (m < worst) {
      worst = m;
      where = x;
    }
  }
  if (worst <= 1e-9) {
    std::ostringstream msg;
    msg << what << ": symbol nearly vanishes at x = " << where << " (|u| = " << worst << ")";
    throw DomainError(msg.str());
  }
}

std::map<long, Complex> integer_coefficients(const TrigPolynomial& u) {
  std::map<long, Complex> out;
  for (const auto& t : u.terms()) {
    const auto k = t.freq[0].as_integer();
    if (!k) throw DomainError("symbol has a non-integer frequency");
    out[*k] += t.coeff(0, 0);
  }
  return out;
}

int count_kernel(const RealVector& sv, const char* which, int window) {
  int kernel = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    const double s = sv(i);
    if (s >= 1e-10 && s <= 1e-6) {
      std::ostringstream msg;
      msg << "toeplitz_index_halfline: singular value " << s << " of the " << which
          << " section is in the dead zone [1e-10, 1e-6]; increase the window (M = " << window
          << ")";
      throw PrecisionError(msg.str(), s);
    }
    if (s < 1e-8) ++kernel;
  }
  return kernel;
}

}  // namespace

Matrix bohr_mean(const TrigPolynomial& u) { return u.zero_frequency(); }

Matrix bohr_mean_numeric(const TrigPolynomial& u, double T) {
  if (!(T > 0.0)) throw DomainError("bohr_mean_numeric needs T > 0");
  std::vector<double> gx, gw;
  gauss_legendre(8, gx, gw);
  const double width = std::min(1.0, std::numbers::pi / std::max(1.0, u.max_frequency()));
  const int panels = static_cast<int>(std::ceil(2.0 * T / width));
  const double h = 2.0 * T / panels;
  std::vector<double> nodes, weights;
  for (int p = 0; p < panels; ++p)
    for (std::size_t q = 0; q < gx.size(); ++q) {
      nodes.push_back(-T + h * (p + 0.5 * (gx[q] + 1.0)));
      weights.push_back(0.5 * h * gw[q]);
    }
  const int n = u.n();
  const double total = std::pow(static_cast<double>(nodes.size()), n);
  if (total > 2e7)
    throw DomainError("bohr_mean_numeric: sample grid too large; lower T or the dimension");
  const std::size_t m = nodes.size();
  // one tile per node of the first coordinate, reduced in order
  std::vector<Matrix> tiles(m);
  parallel_for(m, [&](std::size_t i0) {
    Matrix acc = Matrix::Zero(u.N(), u.N());
    std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
    idx[0] = i0;
    std::vector<double> x(static_cast<std::size_t>(n));
    while (true) {
      double w = 1.0;
      for (int c = 0; c < n; ++c) {
        x[c] = nodes[idx[c]];
        w *= weights[idx[c]];
      }
      acc += w * u.evaluate(x);
      int c = n - 1;
      while (c >= 1 && ++idx[c] == m) idx[c--] = 0;
      if (c < 1) break;
    }
    tiles[i0] = acc;
  });
  Matrix sum = Matrix::Zero(u.N(), u.N());
  for (const auto& t : tiles) sum += t;
  return sum / std::pow(2.0 * T, n);
}

double winding_number_circle(const TrigPolynomial& u, const QuadratureOptions& quad) {
  require_scalar(u, "winding_number_circle");
  if (u.n() != 1) throw StructuralError("winding_number_circle needs n = 1");
  if (!u.has_integer_frequencies())
    throw DomainError("winding_number_circle needs integer frequencies (a symbol on the circle)");
  require_nonvanishing(u, 0.0, kTwoPi, 10000, "winding_number_circle");
  const TrigPolynomial du = u.derivative(0);
  const auto r = integrate_complex(
      [&](double x) { return du.evaluate({x})(0, 0) / u.evaluate({x})(0, 0); }, 0.0, kTwoPi, quad);
  const Complex w = -r.value / (Complex(0.0, 1.0) * kTwoPi);
  return w.real();
}

double mean_winding_ap(const TrigPolynomial& u, MeanMode mode, double T) {
  require_scalar(u, "mean_winding_ap");
  if (u.n() != 1) throw StructuralError("mean_winding_ap needs n = 1");
  if (mode == MeanMode::exact) {
    if (u.terms().size() != 1)
      throw DomainError("mean_winding_ap exact mode needs a unimodular monomial; use numeric mode");
    const auto& t = u.terms().front();
    if (std::abs(std::abs(t.coeff(0, 0)) - 1.0) > 1e-12)
      throw DomainError("mean_winding_ap: monomial is not unimodular");
    return -t.freq[0].value() / kTwoPi;
  }
  if (!(T > 0.0)) throw DomainError("mean_winding_ap needs T > 0");
  require_nonvanishing(u, -T, T, std::max(1000, static_cast<int>(20 * T)), "mean_winding_ap");
  const TrigPolynomial du = u.derivative(0);
  std::vector<double> breaks;
  for (double x = -T + 1.0; x < T; x += 1.0) breaks.push_back(x);
  QuadratureOptions quad;
  quad.abs_tol = 1e-9 * std::max(1.0, T);
  quad.max_subdivisions = std::max(quad.max_subdivisions, 4 * static_cast<int>(breaks.size()) + 64);
  const auto r = integrate_complex(
      [&](double x) { return du.evaluate({x})(0, 0) / u.evaluate({x})(0, 0); }, -T, T, quad, breaks);
  const Complex w = -r.value / (Complex(0.0, 4.0 * std::numbers::pi * T));
  return w.real();
}

Complex lesch_pairing(const TrigPolynomial& u, const std::vector<double>& direction) {
  if (static_cast<int>(direction.size()) != u.n())
    throw StructuralError("lesch_pairing: direction has wrong length");
  if (!u.is_unitary()) throw DomainError("lesch_pairing needs a unitary symbol");
  const TrigPolynomial prod = u * u.adjoint().directional_derivative(direction);
  return bohr_mean(prod).trace() / Complex(0.0, kTwoPi);
}

MultiplierModel::MultiplierModel(std::vector<double> grid, std::vector<double> weights,
                                 std::vector<double> values)
    : grid_(std::move(grid)), weights_(std::move(weights)), values_(std::move(values)) {
  if (grid_.empty()) throw StructuralError("multiplier model needs a nonempty grid");
  if (weights_.size() != grid_.size() || values_.size() != grid_.size())
    throw StructuralError("multiplier grid, weights and values differ in length");
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    if (!(weights_[i] > 0.0)) throw DomainError("multiplier weights must be positive");
    if (i > 0 && !(grid_[i] > grid_[i - 1]))
      throw DomainError("multiplier grid must be strictly increasing");
  }
}

MultiplierModel MultiplierModel::uniform(double lo, double hi, double step) {
  if (!(step > 0.0) || !(hi > lo)) throw DomainError("uniform multiplier grid needs lo < hi, step > 0");
  const long count = std::lround(std::floor((hi - lo) / step + 1e-9)) + 1;
  std::vector<double> grid(static_cast<std::size_t>(count));
  for (long i = 0; i < count; ++i) grid[static_cast<std::size_t>(i)] = lo + step * static_cast<double>(i);
  std::vector<double> weights(grid.size(), step);
  std::vector<double> values = grid;
  return MultiplierModel(std::move(grid), std::move(weights), std::move(values));
}

MultiplierFlow multiplier_spectral_flow(const MultiplierModel& model, double theta) {
  MultiplierFlow out;
  const double need_lo = -std::abs(theta) - 1.0;
  if (model.grid().front() > need_lo || model.grid().back() < 1.0) {
    std::ostringstream msg;
    msg << "multiplier grid must cover [" << need_lo << ", 1]";
    throw DomainError(msg.str());
  }
  // D + t theta is monotone in t, so each point crosses at most once
  double total = 0.0;
  int moving = 0;
  for (std::size_t i = 0; i < model.values().size(); ++i) {
    const double v = model.values()[i];
    const double before = v >= 0.0 ? 1.0 : 0.0;
    const double after = v + theta >= 0.0 ? 1.0 : 0.0;
    if (before != after) {
      total += model.weights()[i] * (after - before);
      ++moving;
    }
  }
  out.value = total;
  if (theta != 0.0 && moving < 10)
    out.warnings.push_back("grid too coarse: fewer than 10 cells cross zero");
  return out;
}

ToeplitzIndex toeplitz_index_halfline(const TrigPolynomial& u, int window, int band) {
  require_scalar(u, "toeplitz_index_halfline");
  if (u.n() != 1) throw StructuralError("toeplitz_index_halfline needs n = 1");
  const auto coeffs = integer_coefficients(u);
  long width = 0;
  for (const auto& [k, c] : coeffs) width = std::max(width, std::abs(k));
  if (band <= 0) band = static_cast<int>(width);
  if (band < width) throw DomainError("band is smaller than the symbol bandwidth");
  if (window < 1 || window < 20 * band)
    throw DomainError("toeplitz_index_halfline needs M >= 20 b (M = " + std::to_string(window) +
                      ", b = " + std::to_string(band) + ")");
  require_nonvanishing(u, 0.0, kTwoPi, 10000, "toeplitz_index_halfline");
  auto coeff = [&coeffs](long k) {
    const auto it = coeffs.find(k);
    return it == coeffs.end() ? Complex(0.0) : it->second;
  };
  const int rows = window + band;
  Matrix tu(rows, window), tv(rows, window);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < window; ++j) {
      tu(i, j) = coeff(i - j);
      tv(i, j) = std::conj(coeff(j - i));
    }
  ToeplitzIndex out;
  out.window = window;
  out.band = band;
  out.ker_dim = count_kernel(singular_values(tu), "T_u", window);
  out.coker_dim = count_kernel(singular_values(tv), "T_u*", window);
  out.index = out.ker_dim - out.coker_dim;
  return out;
}

TrigPolynomial omega_form(const TrigPolynomial& u) {
  const int n = u.n();
  if (n % 2 == 0) throw DomainError("omega_form needs odd ambient dimension");
  if (n > 7) throw DomainError("omega_form supports n <= 7");
  if (!u.is_unitary()) throw DomainError("omega_form needs an exactly unitary symbol");
  const TrigPolynomial ustar = u.adjoint();
  std::vector<TrigPolynomial> f;
  for (int j = 0; j < n; ++j) f.push_back(u.derivative(j) * ustar);

  std::vector<std::vector<int>> perms;
  std::vector<int> sigma(static_cast<std::size_t>(n));
  std::iota(sigma.begin(), sigma.end(), 0);
  do perms.push_back(sigma);
  while (std::next_permutation(sigma.begin(), sigma.end()));

  auto sign = [](const std::vector<int>& p) {
    int inversions = 0;
    for (std::size_t a = 0; a < p.size(); ++a)
      for (std::size_t b = a + 1; b < p.size(); ++b)
        if (p[a] > p[b]) ++inversions;
    return inversions % 2 == 0 ? 1.0 : -1.0;
  };
  std::vector<std::optional<TrigPolynomial>> parts(perms.size());
  parallel_for(perms.size(), [&](std::size_t i) {
    TrigPolynomial prod = f[perms[i][0]];
    for (int j = 1; j < n; ++j) prod = prod * f[perms[i][j]];
    prod *= Complex(sign(perms[i]), 0.0);
    parts[i] = std::move(prod);
  });
  TrigPolynomial omega(u.N(), n);
  for (const auto& p : parts) omega += *p;
  return omega;
}

ApFlow ap_spectral_flow(const TrigPolynomial& u) {
  const TrigPolynomial omega = omega_form(u);
  ApFlow out;
  out.mean_trace_omega = bohr_mean(omega).trace();
  const Complex v = theorem_constant(u.n()) * out.mean_trace_omega;
  out.value = v.real();
  out.imag_residual = std::abs(v.imag());
  return out;
}

double degree_integral(const TrigPolynomial& u, int grid) {
  if (u.n() != 3) throw StructuralError("degree_integral needs n = 3");
  if (!u.has_integer_frequencies()) throw DomainError("degree_integral needs integer frequencies");
  if (grid < 4) throw DomainError("degree_integral needs at least 4 points per axis");
  const TrigPolynomial du[3] = {u.derivative(0), u.derivative(1), u.derivative(2)};
  const double h = kTwoPi / grid;
  std::vector<double> slabs(static_cast<std::size_t>(grid), 0.0);
  parallel_for(slabs.size(), [&](std::size_t i) {
    double acc = 0.0;
    for (int j = 0; j < grid; ++j)
      for (int k = 0; k < grid; ++k) {
        const std::vector<double> x{h * static_cast<double>(i), h * j, h * k};
        const Matrix inv = u.evaluate(x).inverse();
        Matrix a[3];
        for (int c = 0; c < 3; ++c) a[c] = inv * du[c].evaluate(x);
        // antisymmetrised a_0 a_1 a_2
        const Complex density = (a[0] * a[1] * a[2] - a[0] * a[2] * a[1] + a[1] * a[2] * a[0] -
                                 a[1] * a[0] * a[2] + a[2] * a[0] * a[1] - a[2] * a[1] * a[0])
                                    .trace();
        acc += density.real();
      }
    slabs[i] = acc;
  });
  double total = 0.0;
  for (double s : slabs) total += s;
  return total * h * h * h / (24.0 * std::numbers::pi * std::numbers::pi);
}

std::vector<ConventionRow> conventions_report(double lambda) {
  std::vector<ConventionRow> rows;
  auto push = [&rows](std::string formula, std::string ref, double raw, double oracle) {
    rows.push_back({std::move(formula), std::move(ref), raw, oracle, oracle != 0.0 ? raw / oracle : 0.0});
  };
  const Matrix one = Matrix::Identity(1, 1);

  // circle: u = e^{ix}; oracle is the flow of diag(m) -> diag(m - 1) over integer modes
  const TrigPolynomial shift = TrigPolynomial::monomial({Frequency::rational(1)}, one);
  std::vector<double> modes, unit;
  for (int m = -50; m <= 50; ++m) {
    modes.push_back(m);
    unit.push_back(1.0);
  }
  const double circle_oracle = multiplier_spectral_flow(MultiplierModel(modes, unit, modes), -1.0).value;
  push("winding_number_circle", "Gohberg-Krein winding formula", winding_number_circle(shift),
       circle_oracle);
  push("toeplitz_index_halfline", "Toeplitz index via projection compression",
       toeplitz_index_halfline(shift, 200).index, circle_oracle);

  // line: u = e^{i lambda x}; oracle is the flow of D -> D - lambda for D = -i d/dx
  const TrigPolynomial wave = TrigPolynomial::monomial({Frequency(lambda)}, one);
  const double reach = std::abs(lambda) + 2.0;
  const double line_oracle =
      multiplier_spectral_flow(MultiplierModel::uniform(-reach, reach, 1e-4), -lambda).value;
  push("mean_winding_ap", "Coburn-Douglas-Schaeffer-Singer mean winding",
       mean_winding_ap(wave, MeanMode::exact), line_oracle);
  push("lesch_pairing", "Lesch pairing tau(u delta(u*))/(2 pi i)", lesch_pairing(wave, {1.0}).real(),
       line_oracle);
  push("ap_spectral_flow", "top-degree local index formula, n = 1", ap_spectral_flow(wave).value,
       line_oracle);
  return rows;
}

std::string conventions_csv(const std::vector<ConventionRow>& rows) {
  std::ostringstream out;
  out.precision(17);
  out << "formula,paper_ref,raw_value,oracle_value,ratio\n";
  for (const auto& r : rows)
    out << r.formula << ",\"" << r.paper_ref << "\"," << r.raw_value << "," << r.oracle_value << ","
        << r.ratio << "\n";
  return out.str();
}

}  // namespace sfkit
