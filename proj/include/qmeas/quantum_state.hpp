#pragma once

#include <cstddef>
#include <span>

#include "qmeas/numerics.hpp"

namespace qmeas {

inline constexpr double kTolState = 1e-10;

/// Normalized state vector. Construction checks the norm; there is no way to
/// obtain an unnormalized StateVector.
class StateVector {
 public:
  /// Throws NotNormalized unless | ||v|| - 1 | <= tol.
  static StateVector from_amplitudes(ComplexVector amplitudes, double tol = kTolState);
  /// Rescales to unit norm. Throws NotNormalized for the zero vector.
  static StateVector normalized(ComplexVector amplitudes);
  static StateVector basis(std::size_t dim, std::size_t index);

  const ComplexVector& amplitudes() const noexcept { return amplitudes_; }
  std::size_t dim() const noexcept { return amplitudes_.dim(); }
  const cplx& operator[](std::size_t i) const { return amplitudes_[i]; }

 private:
  explicit StateVector(ComplexVector amplitudes) : amplitudes_(std::move(amplitudes)) {}
  ComplexVector amplitudes_;
};

/// Hermitian, positive semidefinite, unit-trace matrix.
class DensityMatrix {
 public:
  /// Full validation: NotSquare | NotHermitian | NotPositive | TraceNotOne.
  static DensityMatrix validate(ComplexMatrix m, double tol = kTolState);

  const ComplexMatrix& matrix() const noexcept { return matrix_; }
  std::size_t dim() const noexcept { return matrix_.rows(); }
  double purity() const;

 private:
  friend DensityMatrix projector_of(const StateVector& psi);
  explicit DensityMatrix(ComplexMatrix m) : matrix_(std::move(m)) {}
  ComplexMatrix matrix_;
};

inline DensityMatrix validate_density(ComplexMatrix m, double tol = kTolState) {
  return DensityMatrix::validate(std::move(m), tol);
}

/// Dimensions of a system (S) + apparatus (M) pair. Composite index is
/// i_system * apparatus + i_apparatus: the system is the slow index.
struct CompositeDims {
  std::size_t system = 0;
  std::size_t apparatus = 0;

  std::size_t total() const noexcept { return system * apparatus; }
};

enum class Subsystem { System, Apparatus };

DensityMatrix projector_of(const StateVector& psi);

DensityMatrix mix(std::span<const double> weights, std::span<const DensityMatrix> states);

StateVector tensor_state(const StateVector& psi, const StateVector& phi);

DensityMatrix partial_trace(const DensityMatrix& rho, CompositeDims dims, Subsystem keep);

}  // namespace qmeas
