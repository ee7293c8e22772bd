#pragma once

#include <complex>
#include <functional>

#include <Eigen/Dense>

namespace sfkit {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr Complex kI{0.0, 1.0};

struct HermitianEigen {
  RealVector values;  // ascending
  Matrix vectors;     // columns are eigenvectors
};

// Eigendecomposition of a Hermitian matrix; 1x1 inputs bypass the solver.
HermitianEigen hermitian_eigen(const Matrix& a);

// f(A) for Hermitian A through its eigendecomposition.
Matrix hermitian_function(const Matrix& a, const std::function<double(double)>& f);
Matrix hermitian_function(const HermitianEigen& eig, const std::function<double(double)>& f);

RealVector singular_values(const Matrix& a);

// Largest singular value; 0 for empty matrices.
double operator_norm(const Matrix& a);

bool is_hermitian(const Matrix& a, double tol);

// Number of singular values above max(rel_tol * sigma_max, abs_tol). The
// absolute floor matters when a is numerically zero: without it, rounding
// noise would be measured against itself.
int numerical_rank(const Matrix& a, double rel_tol, double abs_tol = 0.0);

// Orthonormal basis of ker(a) (columns). Singular values at or below
// max(rel_tol * sigma_max, abs_tol) count as zero; a zero matrix has full kernel.
Matrix null_space(const Matrix& a, double rel_tol, double abs_tol = 0.0);

// Orthonormal basis of the range of a Hermitian projection.
Matrix projection_range(const Matrix& p);

// Orthonormal basis of the column span of a, dropping directions below rel_tol.
Matrix orthonormal_columns(const Matrix& a, double rel_tol, double abs_tol = 0.0);

}  // namespace sfkit
