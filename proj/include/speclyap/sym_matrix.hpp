#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace speclyap {

/// Dense real symmetric matrix, row-major storage of the full square.
/// Every mutation writes both (i,j) and (j,i) so symmetry holds bitwise.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(std::size_t dim);

  /// Builds from row-major data of length dim*dim; the result is (A + A^T)/2.
  static SymMatrix from_row_major(std::size_t dim, std::span<const double> entries);
  static SymMatrix from_rows(const std::vector<std::vector<double>>& rows);
  static SymMatrix identity(std::size_t dim, double scale = 1.0);
  static SymMatrix diagonal(std::span<const double> diag);

  std::size_t dim() const { return dim_; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * dim_ + j]; }
  void set(std::size_t i, std::size_t j, double v) {
    data_[i * dim_ + j] = v;
    data_[j * dim_ + i] = v;
  }

  std::span<const double> row_major() const { return data_; }
  std::vector<std::vector<double>> to_rows() const;

  /// Leading n x n block.
  SymMatrix leading(std::size_t n) const;
  /// Copy into a larger zero matrix (dim >= this->dim()).
  SymMatrix padded(std::size_t dim) const;

  double max_abs() const;
  double frobenius() const;
  double trace() const;
  bool is_diagonal() const;

  SymMatrix& operator*=(double c);
  friend SymMatrix operator-(const SymMatrix& a, const SymMatrix& b);
  friend SymMatrix operator+(const SymMatrix& a, const SymMatrix& b);
  friend SymMatrix operator*(double c, SymMatrix m) { return m *= c; }
  friend bool operator==(const SymMatrix&, const SymMatrix&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<double> data_;
};

/// Eigen-decomposition result; eigenvalues ascending, eigenvectors stored column-wise
/// in a row-major dim x dim array (vectors[i*dim + k] is component i of vector k).
struct SymEigen {
  std::vector<double> values;
  std::vector<double> vectors;
};

/// Cyclic Jacobi rotations until the off-diagonal mass falls below rounding level.
/// Throws std::runtime_error if 100 sweeps do not converge.
SymEigen jacobi_eigen(const SymMatrix& m, bool want_vectors = false);

/// Spectral norm (largest |eigenvalue|); exact for diagonal input.
double operator_norm_sym(const SymMatrix& m);

struct PsdCheck {
  bool ok = false;
  double min_eigenvalue = 0.0;
};

/// ok iff min eigenvalue >= -tol.
PsdCheck psd_check(const SymMatrix& m, double tol);

/// Relative Frobenius distance ||a-b||_F / max(||b||_F, tiny).
double relative_frobenius(const SymMatrix& a, const SymMatrix& b);

}  // namespace speclyap
