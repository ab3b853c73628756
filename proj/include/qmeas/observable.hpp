// Observables, their projection-valued spectral measures, and Born statistics.

#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "qmeas/numerics.hpp"
#include "qmeas/quantum_state.hpp"

namespace qmeas {

class Observable {
 public:
  /// Throws NotSquare / NotHermitian.
  static Observable from_matrix(ComplexMatrix m, double tol = kTolHermitian);

  const ComplexMatrix& matrix() const noexcept { return matrix_; }
  std::size_t dim() const noexcept { return matrix_.rows(); }

 private:
  explicit Observable(ComplexMatrix m) : matrix_(std::move(m)) {}
  ComplexMatrix matrix_;
};

/// Distinct outcomes (ascending) with one orthogonal projector each. The
/// projectors are mutually orthogonal and resolve the identity.
class ProjectionValuedMeasure {
 public:
  /// Checks every invariant within tol; throws ValidationError naming the first violation.
  static ProjectionValuedMeasure from_parts(std::vector<double> outcomes,
                                            std::vector<ComplexMatrix> projectors,
                                            double tol = 1e-10);

  std::span<const double> outcomes() const noexcept { return outcomes_; }
  std::span<const ComplexMatrix> projectors() const noexcept { return projectors_; }
  std::size_t size() const noexcept { return outcomes_.size(); }
  std::size_t dim() const noexcept { return projectors_.empty() ? 0 : projectors_.front().rows(); }

 private:
  friend ProjectionValuedMeasure spectral_decomposition(const Observable&, std::optional<double>);
  ProjectionValuedMeasure(std::vector<double> outcomes, std::vector<ComplexMatrix> projectors)
      : outcomes_(std::move(outcomes)), projectors_(std::move(projectors)) {}

  std::vector<double> outcomes_;
  std::vector<ComplexMatrix> projectors_;
};

/// Half-open interval [lo, hi). Infinite endpoints are allowed.
struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  bool contains(double x) const noexcept { return lo <= x && x < hi; }
};

/// Finite union of half-open intervals.
struct BorelSet {
  std::vector<Interval> intervals;

  static BorelSet real_line() { return BorelSet{{Interval{}}}; }
  static BorelSet empty() { return BorelSet{}; }
  bool contains(double x) const noexcept;
};

struct JointEigenbasis {
  ComplexMatrix basis;                          // columns chi_n
  std::vector<std::vector<double>> value_tuples;  // one tuple per column
};

struct OutcomeDistribution {
  std::vector<double> outcomes;
  std::vector<double> probabilities;
};

/// Degenerate eigenvalues (within tol_cluster, default 1e-8 * max|lambda|)
/// share one projector.
ProjectionValuedMeasure spectral_decomposition(const Observable& a,
                                               std::optional<double> tol_cluster = std::nullopt);

ComplexMatrix pvm_restrict(const ProjectionValuedMeasure& pvm, const BorelSet& set);

/// ||AB - BA||_max <= tol * ||A||_F * ||B||_F
bool commutes(const Observable& a, const Observable& b, double tol = 1e-10);

/// Diagonalizes the first observable and refines each degenerate block with
/// the next one, recursively. Columns come out in lexicographic tuple order.
/// Throws NotCommuting naming the first offending pair.
JointEigenbasis joint_eigenbasis(std::span<const Observable> observables, double tol = 1e-10);

OutcomeDistribution born_distribution(const DensityMatrix& rho, const ProjectionValuedMeasure& pvm);
/// Pure-state route: p_k = ||E_k psi||^2.
OutcomeDistribution born_distribution(const StateVector& psi, const ProjectionValuedMeasure& pvm);

/// Tr(rho A). Throws NonRealExpectation if the imaginary part exceeds 1e-10.
double expectation(const DensityMatrix& rho, const Observable& a);
/// <A^2> - <A>^2
double dispersion(const DensityMatrix& rho, const Observable& a);

StateVector evolve(const StateVector& psi, const Observable& h, double t);

}  // namespace qmeas
