#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "gridcop/errors.hpp"

namespace gridcop {

// Dense symmetric correlation matrix: unit diagonal, |off-diagonal| < 1.
class CorrelationMatrix {
 public:
  explicit CorrelationMatrix(int dim);
  static CorrelationMatrix identity(int dim);
  // d = 2 convenience.
  static CorrelationMatrix bivariate(double rho);

  int dim() const { return dim_; }
  double at(int i, int j) const { return m_[static_cast<std::size_t>(i) * dim_ + j]; }
  void set(int i, int j, double v);
  std::span<const double> data() const { return m_; }

  double rho() const;  // off-diagonal entry, d = 2 only
  double min_eigenvalue() const;
  bool is_positive_definite() const { return min_eigenvalue() > 0.0; }
  // Throws ValidationError unless symmetric with unit diagonal and PD.
  void check() const;

 private:
  int dim_;
  std::vector<double> m_;  // row-major
};

// All eigenvalues of a dense symmetric matrix (row-major, n x n), ascending.
// Cyclic Jacobi; intended for small matrices (n up to a few hundred).
std::vector<double> jacobi_eigenvalues(std::span<const double> a, int n);

// Extreme eigenvalues of a symmetric operator given by its matvec.
// Lanczos with full reorthogonalization; n is the operator dimension.
struct EigenExtremes {
  double min;
  double max;
};
EigenExtremes extreme_eigenvalues(
    const std::function<void(std::span<const double>, std::span<double>)>& matvec, std::size_t n);

// Lower-triangular Cholesky factor of a dense SPD matrix (row-major).
// Throws NumericalError if the matrix is not positive definite.
std::vector<double> cholesky_lower(std::span<const double> a, int n);

}  // namespace gridcop
