#include "sfkit/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace sfkit {

HermitianEigen hermitian_eigen(const Matrix& a) {
  HermitianEigen out;
  if (a.rows() == 1) {
    out.values = RealVector::Constant(1, a(0, 0).real());
    out.vectors = Matrix::Identity(1, 1);
    return out;
  }
  if (a.rows() == 0) {
    out.values.resize(0);
    out.vectors.resize(0, 0);
    return out;
  }
  const Eigen::Index n = a.rows();
  bool diagonal = true;
  for (Eigen::Index c = 0; c < n && diagonal; ++c)
    for (Eigen::Index r = 0; r < n; ++r)
      if (r != c && a(r, c) != Complex(0.0)) {
        diagonal = false;
        break;
      }
  if (diagonal) {
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&a](Eigen::Index x, Eigen::Index y) { return a(x, x).real() < a(y, y).real(); });
    out.values.resize(n);
    out.vectors = Matrix::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
      out.values(j) = a(order[j], order[j]).real();
      out.vectors(order[j], j) = 1.0;
    }
    return out;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a);
  out.values = solver.eigenvalues();
  out.vectors = solver.eigenvectors();
  return out;
}

Matrix hermitian_function(const HermitianEigen& eig, const std::function<double(double)>& f) {
  const Eigen::Index n = eig.values.size();
  if (n == 1) return Matrix::Constant(1, 1, Complex(f(eig.values(0)), 0.0));
  Eigen::VectorXcd fv(n);
  for (Eigen::Index i = 0; i < n; ++i) fv(i) = f(eig.values(i));
  return eig.vectors * fv.asDiagonal() * eig.vectors.adjoint();
}

Matrix hermitian_function(const Matrix& a, const std::function<double(double)>& f) {
  return hermitian_function(hermitian_eigen(a), f);
}

RealVector singular_values(const Matrix& a) {
  if (a.size() == 0) return RealVector(0);
  if (a.size() == 1) return RealVector::Constant(1, std::abs(a(0, 0)));
  Eigen::BDCSVD<Matrix> svd(a);
  return svd.singularValues();
}

double operator_norm(const Matrix& a) {
  const RealVector s = singular_values(a);
  return s.size() == 0 ? 0.0 : s.maxCoeff();
}

bool is_hermitian(const Matrix& a, double tol) {
  if (a.rows() != a.cols()) return false;
  return (a - a.adjoint()).cwiseAbs().maxCoeff() <= tol || a.size() == 0;
}

int numerical_rank(const Matrix& a, double rel_tol, double abs_tol) {
  const RealVector s = singular_values(a);
  if (s.size() == 0) return 0;
  const double cutoff = std::max(rel_tol * s.maxCoeff(), abs_tol);
  return static_cast<int>((s.array() > cutoff).count());
}

Matrix null_space(const Matrix& a, double rel_tol, double abs_tol) {
  const Eigen::Index cols = a.cols();
  if (cols == 0) return Matrix(0, 0);
  if (a.rows() == 0) return Matrix::Identity(cols, cols);
  Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeFullV);
  const RealVector& s = svd.singularValues();
  const double top = s.size() ? s.maxCoeff() : 0.0;
  const int rank = static_cast<int>((s.array() > std::max(rel_tol * top, abs_tol)).count());
  return svd.matrixV().rightCols(cols - rank);
}

Matrix projection_range(const Matrix& p) {
  const HermitianEigen eig = hermitian_eigen(p);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < eig.values.size(); ++i)
    if (eig.values(i) > 0.5) keep.push_back(i);
  Matrix basis(p.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j) basis.col(j) = eig.vectors.col(keep[j]);
  return basis;
}

Matrix orthonormal_columns(const Matrix& a, double rel_tol, double abs_tol) {
  if (a.cols() == 0 || a.rows() == 0) return Matrix(a.rows(), 0);
  Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeThinU);
  const RealVector& s = svd.singularValues();
  const int rank = static_cast<int>((s.array() > std::max(rel_tol * s.maxCoeff(), abs_tol)).count());
  return svd.matrixU().leftCols(rank);
}

}  // namespace sfkit
