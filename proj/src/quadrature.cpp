#include "sfkit/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <queue>

#include "sfkit/errors.hpp"
#include "sfkit/parallel.hpp"

namespace sfkit {
namespace {

constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

double magnitude(double v) { return std::abs(v); }
double magnitude(const Complex& v) { return std::abs(v); }

template <class T>
struct Interval {
  double a, b;
  T value;
  double error;
};

template <class T>
Interval<T> gauss_kronrod(const std::function<T(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  // node 0..6 left, 7 center, 8..14 right; values filled in parallel
  std::array<T, 15> fx;
  parallel_for(15, [&](std::size_t j) {
    if (j < 7) fx[j] = f(center - half * kKronrodNodes[j]);
    else if (j == 7) fx[j] = f(center);
    else fx[j] = f(center + half * kKronrodNodes[j - 8]);
  });
  T kronrod = fx[7] * kKronrodWeights[7];
  T gauss = fx[7] * kGaussWeights[3];
  for (int i = 0; i < 7; ++i) {
    const T pair = fx[i] + fx[i + 8];
    kronrod += pair * kKronrodWeights[i];
    if (i % 2 == 1) gauss += pair * kGaussWeights[i / 2];
  }
  kronrod *= half;
  gauss *= half;
  return {a, b, kronrod, magnitude(kronrod - gauss)};
}

template <class T>
QuadratureResult<T> adaptive(const std::function<T(double)>& f, double a, double b,
                             const QuadratureOptions& opts, const std::vector<double>& breakpoints) {
  QuadratureResult<T> result;
  if (a == b) return result;
  const double sign = b > a ? 1.0 : -1.0;
  const double lo = std::min(a, b);
  const double hi = std::max(a, b);

  std::vector<double> cuts{lo};
  for (double p : breakpoints)
    if (p > lo && p < hi) cuts.push_back(p);
  cuts.push_back(hi);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  auto worse = [](const Interval<T>& x, const Interval<T>& y) { return x.error < y.error; };
  std::priority_queue<Interval<T>, std::vector<Interval<T>>, decltype(worse)> queue(worse);
  double total_error = 0.0;
  T total{};
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    Interval<T> iv = gauss_kronrod(f, cuts[i], cuts[i + 1]);
    total_error += iv.error;
    total += iv.value;
    queue.push(iv);
    result.evaluations += 15;
  }

  auto converged = [&] {
    return total_error <= std::max(opts.abs_tol, opts.rel_tol * magnitude(total));
  };
  while (!converged()) {
    if (static_cast<int>(queue.size()) >= opts.max_subdivisions)
      throw ConvergenceError("quadrature did not reach tolerance within the subdivision budget",
                             total_error);
    Interval<T> worst = queue.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b))
      throw ConvergenceError("quadrature interval collapsed below machine resolution", total_error);
    queue.pop();
    Interval<T> left = gauss_kronrod(f, worst.a, mid);
    Interval<T> right = gauss_kronrod(f, mid, worst.b);
    result.evaluations += 30;
    total_error += left.error + right.error - worst.error;
    total += left.value + right.value - worst.value;
    queue.push(left);
    queue.push(right);
  }

  std::vector<Interval<T>> intervals;
  intervals.reserve(queue.size());
  while (!queue.empty()) {
    intervals.push_back(queue.top());
    queue.pop();
  }
  std::sort(intervals.begin(), intervals.end(),
            [](const Interval<T>& x, const Interval<T>& y) { return x.a < y.a; });
  T sum{};
  double err = 0.0;
  for (const auto& iv : intervals) {
    sum += iv.value;
    err += iv.error;
  }
  result.value = sum * sign;
  result.error = err;
  result.intervals = static_cast<int>(intervals.size());
  return result;
}

}  // namespace

QuadratureResult<double> integrate(const std::function<double(double)>& f, double a, double b,
                                   const QuadratureOptions& opts,
                                   const std::vector<double>& breakpoints) {
  return adaptive<double>(f, a, b, opts, breakpoints);
}

QuadratureResult<Complex> integrate_complex(const std::function<Complex(double)>& f, double a,
                                            double b, const QuadratureOptions& opts,
                                            const std::vector<double>& breakpoints) {
  return adaptive<Complex>(f, a, b, opts, breakpoints);
}

QuadratureResult<double> integrate_to_infinity(const std::function<double(double)>& f, double a,
                                               const QuadratureOptions& opts) {
  auto g = [&f, a](double s) {
    if (s >= 1.0) return 0.0;
    const double one_minus = 1.0 - s;
    return f(a + s / one_minus) / (one_minus * one_minus);
  };
  return adaptive<double>(g, 0.0, 1.0, opts, {});
}

QuadratureResult<double> integrate_real_line(const std::function<double(double)>& f,
                                             const QuadratureOptions& opts) {
  auto g = [&f](double s) {
    const double d = 1.0 - s * s;
    if (d <= 0.0) return 0.0;
    return f(s / d) * (1.0 + s * s) / (d * d);
  };
  return adaptive<double>(g, -1.0, 1.0, opts, {0.0});
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    weights[i] = weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
}

}  // namespace sfkit
