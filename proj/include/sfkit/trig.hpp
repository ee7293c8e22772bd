#pragma once

#include <optional>
#include <vector>

#include <json.hpp>

#include "sfkit/coefficients.hpp"
#include "sfkit/linalg.hpp"

namespace sfkit {

/// One real frequency component, exact when built from a rational.
class Frequency {
 public:
  Frequency() : value_(0.0), exact_(Rational(0)) {}
  Frequency(double v);  // NOLINT: implicit on purpose
  Frequency(Rational r);
  static Frequency rational(std::int64_t num, std::int64_t den = 1) {
    return Frequency(Rational(num, den));
  }

  double value() const { return value_; }
  bool is_exact() const { return exact_.has_value(); }
  const std::optional<Rational>& exact() const { return exact_; }
  /// integer within 1e-12 (or exactly)
  std::optional<long> as_integer() const;

  Frequency operator-() const;
  friend Frequency operator+(const Frequency& a, const Frequency& b);
  friend Frequency operator-(const Frequency& a, const Frequency& b) { return a + (-b); }

  /// exact comparison when both are exact, else |a - b| <= 1e-12
  friend bool same(const Frequency& a, const Frequency& b);

 private:
  double value_;
  std::optional<Rational> exact_;
};

using FrequencyVector = std::vector<Frequency>;

inline constexpr double kFrequencyMergeTol = 1e-12;

/// Matrix-valued trigonometric polynomial sum_xi c_xi e_xi(x) on R^n, with
/// e_xi(x) = exp(i <xi, x>) and c_xi an N x N complex matrix.
class TrigPolynomial {
 public:
  struct Term {
    FrequencyVector freq;
    Matrix coeff;
  };

  TrigPolynomial(int N, int n);
  TrigPolynomial(int N, int n, std::vector<Term> terms);

  static TrigPolynomial constant(int n, const Matrix& c);
  static TrigPolynomial identity(int N, int n);
  /// c e_xi
  static TrigPolynomial monomial(const FrequencyVector& xi, const Matrix& c);
  /// e_xi P + e_eta (1 - P) for a constant projection P; unitary.
  static TrigPolynomial spectral_monomial(const FrequencyVector& xi, const FrequencyVector& eta,
                                          const Matrix& p);

  int N() const { return N_; }
  int n() const { return n_; }
  const std::vector<Term>& terms() const { return terms_; }

  TrigPolynomial adjoint() const;
  /// d/dx_j: c_xi -> i xi_j c_xi
  TrigPolynomial derivative(int j) const;
  /// sum_j dir_j d/dx_j
  TrigPolynomial directional_derivative(const std::vector<double>& dir) const;

  /// u(x)
  Matrix evaluate(const std::vector<double>& x) const;
  /// zero-frequency coefficient (zero matrix if absent)
  Matrix zero_frequency() const;
  /// entrywise trace, as a scalar (N = 1) polynomial
  TrigPolynomial trace() const;

  /// max over terms of the Euclidean norm of the frequency
  double max_frequency() const;
  /// every frequency component is an integer
  bool has_integer_frequencies() const;

  /// all coefficients of u u* - 1 and u* u - 1 within tol
  bool is_unitary(double tol = 1e-12) const;

  TrigPolynomial& operator+=(const TrigPolynomial& other);
  TrigPolynomial& operator-=(const TrigPolynomial& other);
  TrigPolynomial& operator*=(Complex s);
  friend TrigPolynomial operator+(TrigPolynomial a, const TrigPolynomial& b) { return a += b; }
  friend TrigPolynomial operator-(TrigPolynomial a, const TrigPolynomial& b) { return a -= b; }
  friend TrigPolynomial operator*(Complex s, TrigPolynomial a) { return a *= s; }
  friend TrigPolynomial operator*(const TrigPolynomial& a, const TrigPolynomial& b);

  nlohmann::json to_json() const;
  static TrigPolynomial from_json(const nlohmann::json& j);

 private:
  void canonicalize();
  void check_term(const Term& t) const;

  int N_;
  int n_;
  std::vector<Term> terms_;
};

}  // namespace sfkit
