#include "qmeas/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "qmeas/error.hpp"

namespace qmeas {

namespace {

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorKind::DimMismatch, std::string(what) + ": shapes differ");
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// ComplexVector

ComplexVector::ComplexVector(std::initializer_list<cplx> entries) : data_(entries) {
  for (const auto& z : data_) {
    if (!finite(z)) throw Error(ErrorKind::NonFinite, "vector entry is NaN or Inf");
  }
}

ComplexVector::ComplexVector(std::vector<cplx> entries) : data_(std::move(entries)) {
  for (const auto& z : data_) {
    if (!finite(z)) throw Error(ErrorKind::NonFinite, "vector entry is NaN or Inf");
  }
}

ComplexVector ComplexVector::basis(std::size_t dim, std::size_t index) {
  ComplexVector v(dim);
  v[index] = 1.0;
  return v;
}

double ComplexVector::norm() const {
  double sum = 0.0;
  for (const auto& z : data_) sum += std::norm(z);
  return std::sqrt(sum);
}

ComplexVector ComplexVector::scaled(cplx factor) const {
  ComplexVector out(*this);
  for (auto& z : out.data_) z *= factor;
  return out;
}

ComplexVector& ComplexVector::operator+=(const ComplexVector& other) {
  if (other.dim() != dim()) throw Error(ErrorKind::DimMismatch, "vector sum");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

ComplexVector& ComplexVector::operator-=(const ComplexVector& other) {
  if (other.dim() != dim()) throw Error(ErrorKind::DimMismatch, "vector difference");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

ComplexVector operator+(ComplexVector lhs, const ComplexVector& rhs) { return lhs += rhs; }
ComplexVector operator-(ComplexVector lhs, const ComplexVector& rhs) { return lhs -= rhs; }

cplx inner(const ComplexVector& u, const ComplexVector& v) {
  if (u.dim() != v.dim()) throw Error(ErrorKind::DimMismatch, "inner product");
  cplx sum = 0.0;
  for (std::size_t i = 0; i < u.dim(); ++i) sum += std::conj(u[i]) * v[i];
  return sum;
}

// ---------------------------------------------------------------------------
// ComplexMatrix

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    if (row.size() != cols_) throw Error(ErrorKind::DimMismatch, "ragged matrix rows");
    for (const auto& z : row) {
      if (!finite(z)) throw Error(ErrorKind::NonFinite, "matrix entry is NaN or Inf");
      data_.push_back(z);
    }
  }
}

ComplexMatrix ComplexMatrix::from_rows(const std::vector<std::vector<cplx>>& rows) {
  ComplexMatrix m(rows.size(), rows.empty() ? 0 : rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.cols_) throw Error(ErrorKind::DimMismatch, "ragged matrix rows");
    for (std::size_t j = 0; j < m.cols_; ++j) {
      if (!finite(rows[i][j])) throw Error(ErrorKind::NonFinite, "matrix entry is NaN or Inf");
      m(i, j) = rows[i][j];
    }
  }
  return m;
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> values) {
  ComplexMatrix m(values.size(), values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::initializer_list<double> values) {
  return diagonal(std::span<const double>(values.begin(), values.size()));
}

ComplexMatrix ComplexMatrix::from_columns(std::span<const ComplexVector> columns) {
  if (columns.empty()) return {};
  ComplexMatrix m(columns.front().dim(), columns.size());
  for (std::size_t j = 0; j < columns.size(); ++j) m.set_column(j, columns[j]);
  return m;
}

ComplexMatrix ComplexMatrix::outer(const ComplexVector& u, const ComplexVector& v) {
  ComplexMatrix m(u.dim(), v.dim());
  for (std::size_t i = 0; i < u.dim(); ++i) {
    for (std::size_t j = 0; j < v.dim(); ++j) m(i, j) = u[i] * std::conj(v[j]);
  }
  return m;
}

ComplexVector ComplexMatrix::column(std::size_t j) const {
  ComplexVector v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

void ComplexMatrix::set_column(std::size_t j, const ComplexVector& v) {
  if (v.dim() != rows_) throw Error(ErrorKind::DimMismatch, "set_column");
  for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
}

ComplexMatrix ComplexMatrix::column_block(std::size_t first, std::size_t count) const {
  ComplexMatrix out(rows_, count);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < count; ++j) out(i, j) = (*this)(i, first + j);
  }
  return out;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
  }
  return out;
}

cplx ComplexMatrix::trace() const {
  require_square(*this, "trace");
  cplx sum = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) sum += (*this)(i, i);
  return sum;
}

double ComplexMatrix::frobenius_norm() const {
  double sum = 0.0;
  for (const auto& z : data_) sum += std::norm(z);
  return std::sqrt(sum);
}

double ComplexMatrix::max_abs() const {
  double best = 0.0;
  for (const auto& z : data_) best = std::max(best, std::abs(z));
  return best;
}

bool ComplexMatrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), finite);
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  require_same_shape(*this, other, "matrix sum");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
  require_same_shape(*this, other, "matrix difference");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx factor) {
  for (auto& z : data_) z *= factor;
  return *this;
}

ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs += rhs; }
ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs -= rhs; }
ComplexMatrix operator*(cplx factor, ComplexMatrix m) { return m *= factor; }

ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs) {
  if (lhs.cols() != rhs.rows()) throw Error(ErrorKind::DimMismatch, "matrix product");
  ComplexMatrix out(lhs.rows(), rhs.cols());
  for (std::size_t i = 0; i < lhs.rows(); ++i) {
    for (std::size_t k = 0; k < lhs.cols(); ++k) {
      const cplx a = lhs(i, k);
      if (a == cplx{}) continue;
      for (std::size_t j = 0; j < rhs.cols(); ++j) out(i, j) += a * rhs(k, j);
    }
  }
  return out;
}

ComplexVector operator*(const ComplexMatrix& m, const ComplexVector& v) {
  if (m.cols() != v.dim()) throw Error(ErrorKind::DimMismatch, "matrix-vector product");
  ComplexVector out(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    cplx sum = 0.0;
    for (std::size_t j = 0; j < m.cols(); ++j) sum += m(i, j) * v[j];
    out[i] = sum;
  }
  return out;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "max_abs_diff");
  double best = 0.0;
  for (std::size_t i = 0; i < a.entries().size(); ++i) {
    best = std::max(best, std::abs(a.entries()[i] - b.entries()[i]));
  }
  return best;
}

double max_abs_diff(const ComplexVector& a, const ComplexVector& b) {
  if (a.dim() != b.dim()) throw Error(ErrorKind::DimMismatch, "max_abs_diff");
  double best = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) best = std::max(best, std::abs(a[i] - b[i]));
  return best;
}

double relative_frobenius_error(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a - b).frobenius_norm() / std::max(b.frobenius_norm(), 1e-300);
}

cplx trace_of_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows() || a.rows() != b.cols()) {
    throw Error(ErrorKind::DimMismatch, "trace of product");
  }
  cplx sum = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) sum += a(i, k) * b(k, i);
  }
  return sum;
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
  if (!m.is_square()) return false;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = i; j < m.cols(); ++j) {
      if (std::abs(m(i, j) - std::conj(m(j, i))) > tol) return false;
    }
  }
  return true;
}

void require_square(const ComplexMatrix& m, const char* what) {
  if (!m.is_square()) {
    throw Error(ErrorKind::NotSquare, std::string(what) + ": " + std::to_string(m.rows()) + "x" +
                                          std::to_string(m.cols()));
  }
}

void require_hermitian(const ComplexMatrix& m, double tol, const char* what) {
  require_square(m, what);
  if (!is_hermitian(m, tol)) throw Error(ErrorKind::NotHermitian, what);
}

// ---------------------------------------------------------------------------
// Eigendecomposition

namespace {

constexpr int kMaxSweeps = 100;

double off_diagonal_norm(const ComplexMatrix& a) {
  double sum = 0.0;
  for (std::size_t p = 0; p < a.rows(); ++p) {
    for (std::size_t q = p + 1; q < a.cols(); ++q) sum += std::norm(a(p, q));
  }
  return std::sqrt(2.0 * sum);
}

// One two-sided rotation annihilating a(p, q).
void jacobi_rotate(ComplexMatrix& a, ComplexMatrix& v, std::size_t p, std::size_t q) {
  const cplx z = a(p, q);
  const double r = std::abs(z);
  const cplx phase = z / r;
  const double app = a(p, p).real();
  const double aqq = a(q, q).real();

  const double theta = (aqq - app) / (2.0 * r);
  const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;

  // J restricted to (p, q): [[c, s], [-s conj(phase), c conj(phase)]]
  const cplx j00 = c;
  const cplx j01 = s;
  const cplx j10 = -s * std::conj(phase);
  const cplx j11 = c * std::conj(phase);

  const std::size_t n = a.rows();
  for (std::size_t k = 0; k < n; ++k) {
    const cplx akp = a(k, p);
    const cplx akq = a(k, q);
    a(k, p) = akp * j00 + akq * j10;
    a(k, q) = akp * j01 + akq * j11;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const cplx apk = a(p, k);
    const cplx aqk = a(q, k);
    a(p, k) = std::conj(j00) * apk + std::conj(j10) * aqk;
    a(q, k) = std::conj(j01) * apk + std::conj(j11) * aqk;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  a(p, p) = a(p, p).real();
  a(q, q) = a(q, q).real();

  for (std::size_t k = 0; k < n; ++k) {
    const cplx vkp = v(k, p);
    const cplx vkq = v(k, q);
    v(k, p) = vkp * j00 + vkq * j10;
    v(k, q) = vkp * j01 + vkq * j11;
  }
}

}  // namespace

EigenSystem hermitian_eigendecompose(const ComplexMatrix& m, double tol) {
  require_hermitian(m, tol, "hermitian_eigendecompose");
  if (!m.all_finite()) throw Error(ErrorKind::NonFinite, "hermitian_eigendecompose");

  const std::size_t n = m.rows();
  ComplexMatrix a = m;
  for (std::size_t i = 0; i < n; ++i) {
    a(i, i) = a(i, i).real();
    for (std::size_t j = i + 1; j < n; ++j) {
      const cplx mean = 0.5 * (a(i, j) + std::conj(a(j, i)));
      a(i, j) = mean;
      a(j, i) = std::conj(mean);
    }
  }
  ComplexMatrix v = ComplexMatrix::identity(n);

  const double scale = a.frobenius_norm();
  const double target =
      4.0 * static_cast<double>(n) * std::numeric_limits<double>::epsilon() * scale;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    if (off_diagonal_norm(a) <= target) break;  // also exits immediately for diagonal input
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a(p, q)) > 1e-18 * scale) jacobi_rotate(a, v, p, q);
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

  EigenSystem out;
  out.values.resize(n);
  out.vectors = ComplexMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }

  for (const auto& group : cluster_eigenvalues(out.values, default_cluster_tol(out.values))) {
    if (group.size() > 1) orthonormalize_columns(out.vectors, group.front(), group.size());
  }
  return out;
}

// ---------------------------------------------------------------------------

ComplexMatrix kronecker(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const cplx aij = a(i, j);
      for (std::size_t k = 0; k < b.rows(); ++k) {
        for (std::size_t l = 0; l < b.cols(); ++l) {
          out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
        }
      }
    }
  }
  return out;
}

ComplexVector kronecker(const ComplexVector& a, const ComplexVector& b) {
  ComplexVector out(a.dim() * b.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) {
    for (std::size_t k = 0; k < b.dim(); ++k) out[i * b.dim() + k] = a[i] * b[k];
  }
  return out;
}

ComplexMatrix unitary_exp(const ComplexMatrix& h, double t, double tol) {
  const EigenSystem eig = hermitian_eigendecompose(h, tol);
  const std::size_t n = h.rows();
  ComplexMatrix scaled = eig.vectors;
  for (std::size_t k = 0; k < n; ++k) {
    const cplx phase = std::polar(1.0, -t * eig.values[k]);
    for (std::size_t i = 0; i < n; ++i) scaled(i, k) *= phase;
  }
  return scaled * eig.vectors.adjoint();
}

double default_cluster_tol(std::span<const double> values) {
  double largest = 0.0;
  for (double x : values) largest = std::max(largest, std::abs(x));
  return kClusterRel * largest;
}

std::vector<std::vector<std::size_t>> cluster_eigenvalues(std::span<const double> values,
                                                          double tol_cluster) {
  std::vector<std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i == 0 || values[i] - values[i - 1] > tol_cluster) groups.emplace_back();
    groups.back().push_back(i);
  }
  return groups;
}

StructureFlags structural_checks(const ComplexMatrix& m, double tol) {
  require_square(m, "structural_checks");
  const std::size_t n = m.rows();
  StructureFlags flags;
  flags.hermitian = is_hermitian(m, tol);
  flags.unitary = max_abs_diff(m.adjoint() * m, ComplexMatrix::identity(n)) <= tol;
  if (flags.hermitian) {
    flags.projector = max_abs_diff(m * m, m) <= tol;
    const EigenSystem eig = hermitian_eigendecompose(m, tol);
    flags.positive_semidefinite = n == 0 || eig.values.front() >= -tol;
  }
  return flags;
}

void orthonormalize_columns(ComplexMatrix& m, std::size_t first, std::size_t count) {
  for (std::size_t j = first; j < first + count; ++j) {
    ComplexVector v = m.column(j);
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t k = first; k < j; ++k) {
        const ComplexVector u = m.column(k);
        v -= u.scaled(inner(u, v));
      }
    }
    const double norm = v.norm();
    if (norm == 0.0) throw Error(ErrorKind::NotOrthonormal, "linearly dependent columns");
    m.set_column(j, v.scaled(1.0 / norm));
  }
}

}  // namespace qmeas
