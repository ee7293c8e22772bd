#pragma once

#include <string>
#include <vector>

#include "sfkit/quadrature.hpp"
#include "sfkit/trig.hpp"

namespace sfkit {

/// Zero-frequency coefficient: the Bohr mean, exactly.
Matrix bohr_mean(const TrigPolynomial& u);

/// (1/(2T)^n) int_{[-T,T]^n} u by tensor Gauss-Legendre panels.
Matrix bohr_mean_numeric(const TrigPolynomial& u, double T);

/// -(1/2 pi i) int_0^{2pi} u'/u for a scalar symbol with integer frequencies.
double winding_number_circle(const TrigPolynomial& u, const QuadratureOptions& quad = {});

enum class MeanMode { exact, numeric };

/// lim -(1/4 pi i T) int_{-T}^{T} u'/u. Exact mode needs a unimodular monomial
/// (products of monomials canonicalize to one); numeric mode integrates at
/// the given T.
double mean_winding_ap(const TrigPolynomial& u, MeanMode mode = MeanMode::exact, double T = 1e3);

/// (1/2 pi i) tr(bohr_mean(u d_dir(u*)))
Complex lesch_pairing(const TrigPolynomial& u, const std::vector<double>& direction);

/// Diagonal truncation of a Fourier multiplier: values on a frequency grid,
/// each point carrying the measure of its cell.
class MultiplierModel {
 public:
  MultiplierModel(std::vector<double> grid, std::vector<double> weights, std::vector<double> values);
  /// D = multiplication by r on lo, lo+step, ..., hi
  static MultiplierModel uniform(double lo, double hi, double step);

  const std::vector<double>& grid() const { return grid_; }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<double>& values() const { return values_; }

 private:
  std::vector<double> grid_, weights_, values_;
};

struct MultiplierFlow {
  double value = 0.0;
  std::vector<std::string> warnings;
};

/// Flow of D + t theta, t in [0,1]: weighted count of grid points whose
/// value enters [0, inf) minus those that leave.
MultiplierFlow multiplier_spectral_flow(const MultiplierModel& model, double theta);

struct ToeplitzIndex {
  double index = 0.0;
  int ker_dim = 0;
  int coker_dim = 0;
  int window = 0;
  int band = 0;
};

/// dim ker T_u - dim ker T_{u*} from (M + b) x M sections of the half-line
/// Toeplitz matrices (T_u)_{ij} = u_{i-j}; singular values below 1e-8 count
/// as kernel, values in [1e-10, 1e-6] raise PrecisionError. band = 0 uses
/// the symbol's bandwidth.
ToeplitzIndex toeplitz_index_halfline(const TrigPolynomial& u, int window, int band = 0);

/// f_j = d_j(u) u*, Omega = sum over permutations sgn(s) f_s(1) ... f_s(n).
TrigPolynomial omega_form(const TrigPolynomial& u);

struct ApFlow {
  double value = 0.0;
  double imag_residual = 0.0;
  Complex mean_trace_omega;
};

/// theorem constant(n) * bohr_mean(tr Omega)
ApFlow ap_spectral_flow(const TrigPolynomial& u);

/// (1/24 pi^2) int over [0, 2pi]^3 of tr((u* du)^3), trapezoid rule with
/// `grid` points per axis; u must have integer frequencies and n = 3.
double degree_integral(const TrigPolynomial& u, int grid = 24);

struct ConventionRow {
  std::string formula;
  std::string paper_ref;
  double raw_value = 0.0;
  double oracle_value = 0.0;
  double ratio = 0.0;
};

/// Evaluates each index formula on u = e^{i lambda x} (and on e^{ix} on the
/// circle) next to the multiplier-flow oracle for the same shift.
std::vector<ConventionRow> conventions_report(double lambda = 0.5);
std::string conventions_csv(const std::vector<ConventionRow>& rows);

}  // namespace sfkit
