#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include <boost/rational.hpp>
#include <json.hpp>

#include "sfkit/linalg.hpp"

namespace sfkit {

using Rational = boost::rational<std::int64_t>;

// Identities the table is checked against when built.
struct CoefficientChecks {
  double sigma_gamma_residual = 0.0;     // |sigma_{(n-1)/2,0} - Gamma(n/2)/sqrt(pi)|
  double duplication_residual = 0.0;     // |Gamma(n/2)Gamma(n/2+1/2) - sqrt(pi)(n-1)! 2^{1-n}|
  bool alpha_zero_is_inverse_factorial = false;
  double pairing_constant_residual = 0.0;  // two forms of the top-degree pairing constant
};

struct CoefficientTable {
  int n = 1;
  /// alpha(k) for multi-indices of odd length m <= n with |k| <= n - m
  std::map<std::vector<int>, Rational> alpha;
  /// sigma_{m,j}: coefficient of z^j in prod_{l=0}^{m-1} (z + l + 1/2)
  std::map<std::pair<int, int>, Rational> sigma;
  Complex theorem_constant;
  CoefficientChecks checks;

  nlohmann::json to_json() const;
};

/// alpha(k) = 1 / (k_1! ... k_m! (k_1+1)(k_1+k_2+2)...(|k|+m))
Rational alpha_coefficient(const std::vector<int>& k);

/// Elementary symmetric function e_j of {1/2, 3/2, ..., m - 1/2}; sigma_{0,0} = 1.
Rational sigma_coefficient(int m, int j);

/// -i^{-[(n+1)/2]} pi^{n/2} / (Gamma(1+n/2) 2^{(n+1)/2})
Complex theorem_constant(int n);

/// Builds and checks the table; n must be odd with 1 <= n <= 15.
CoefficientTable local_index_coefficients(int n);

}  // namespace sfkit
