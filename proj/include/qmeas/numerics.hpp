// Dense complex linear algebra for small (dim <= ~64) quantum problems.
//
// Storage is row-major. Everything here is a pure function of its inputs;
// matrices and vectors are plain values.

#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace qmeas {

using cplx = std::complex<double>;

inline constexpr double kTolHermitian = 1e-10;
inline constexpr double kTolOrtho = 1e-10;
// Eigenvalues closer than kClusterRel * max|lambda| are treated as one outcome.
inline constexpr double kClusterRel = 1e-8;

class ComplexVector {
 public:
  ComplexVector() = default;
  explicit ComplexVector(std::size_t dim) : data_(dim) {}
  ComplexVector(std::initializer_list<cplx> entries);
  explicit ComplexVector(std::vector<cplx> entries);

  static ComplexVector basis(std::size_t dim, std::size_t index);

  std::size_t dim() const noexcept { return data_.size(); }
  cplx& operator[](std::size_t i) { return data_[i]; }
  const cplx& operator[](std::size_t i) const { return data_[i]; }
  std::span<const cplx> entries() const noexcept { return data_; }

  double norm() const;
  ComplexVector scaled(cplx factor) const;

  ComplexVector& operator+=(const ComplexVector& other);
  ComplexVector& operator-=(const ComplexVector& other);

 private:
  std::vector<cplx> data_;
};

ComplexVector operator+(ComplexVector lhs, const ComplexVector& rhs);
ComplexVector operator-(ComplexVector lhs, const ComplexVector& rhs);

// Inner product (u|v), conjugate-linear in the first argument.
cplx inner(const ComplexVector& u, const ComplexVector& v);

class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  // Rows of equal length; throws NonFinite on NaN/Inf and DimMismatch on ragged input.
  ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows);
  static ComplexMatrix from_rows(const std::vector<std::vector<cplx>>& rows);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix diagonal(std::span<const double> values);
  static ComplexMatrix diagonal(std::initializer_list<double> values);
  static ComplexMatrix from_columns(std::span<const ComplexVector> columns);
  static ComplexMatrix outer(const ComplexVector& u, const ComplexVector& v);  // |u)(v|

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  std::span<const cplx> entries() const noexcept { return data_; }

  ComplexVector column(std::size_t j) const;
  void set_column(std::size_t j, const ComplexVector& v);
  // Columns [first, first + count) as an rows x count matrix.
  ComplexMatrix column_block(std::size_t first, std::size_t count) const;

  ComplexMatrix adjoint() const;
  cplx trace() const;
  double frobenius_norm() const;
  double max_abs() const;
  bool all_finite() const;

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(cplx factor);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs);
ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs);
ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs);
ComplexMatrix operator*(cplx factor, ComplexMatrix m);
ComplexVector operator*(const ComplexMatrix& m, const ComplexVector& v);

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);
double max_abs_diff(const ComplexVector& a, const ComplexVector& b);
// ||a - b||_F / max(||b||_F, 1e-300); b is the reference.
double relative_frobenius_error(const ComplexMatrix& a, const ComplexMatrix& b);
// Tr(a b) without forming the product.
cplx trace_of_product(const ComplexMatrix& a, const ComplexMatrix& b);

bool is_hermitian(const ComplexMatrix& m, double tol = kTolHermitian);
void require_square(const ComplexMatrix& m, const char* what);
void require_hermitian(const ComplexMatrix& m, double tol, const char* what);

struct EigenSystem {
  std::vector<double> values;  // ascending
  ComplexMatrix vectors;       // column k pairs with values[k]
};

// Cyclic complex Jacobi. Columns inside a degenerate cluster are
// re-orthonormalized, so only their span is meaningful.
EigenSystem hermitian_eigendecompose(const ComplexMatrix& m, double tol = kTolHermitian);

ComplexMatrix kronecker(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexVector kronecker(const ComplexVector& a, const ComplexVector& b);

// e^{-itH}
ComplexMatrix unitary_exp(const ComplexMatrix& h, double t, double tol = kTolHermitian);

double default_cluster_tol(std::span<const double> values);
// Groups of consecutive indices; a new group starts exactly where the gap
// to the previous value exceeds tol_cluster.
std::vector<std::vector<std::size_t>> cluster_eigenvalues(std::span<const double> values,
                                                          double tol_cluster);

struct StructureFlags {
  bool hermitian = false;
  bool unitary = false;
  bool projector = false;
  bool positive_semidefinite = false;
};

StructureFlags structural_checks(const ComplexMatrix& m, double tol = kTolHermitian);

// Modified Gram-Schmidt (two passes) over columns [first, first + count).
void orthonormalize_columns(ComplexMatrix& m, std::size_t first, std::size_t count);

}  // namespace qmeas
