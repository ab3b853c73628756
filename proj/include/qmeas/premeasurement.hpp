// Von Neumann measurement scheme: an apparatus with pointer states, the
// coupling unitary that correlates measured eigenstates with pointer states,
// the collapse map, and the apparatus state left after the coupling.

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "qmeas/numerics.hpp"
#include "qmeas/observable.hpp"
#include "qmeas/quantum_state.hpp"
#include "qmeas/random.hpp"

namespace qmeas {

/// Apparatus M. Pointer state for outcome j is pointer_basis column
/// (ready_index + j) mod dim; outcome 0 shares its pointer with the ready
/// state, as in the controlled-NOT pattern.
class ApparatusModel {
 public:
  ApparatusModel(ComplexMatrix pointer_basis, std::size_t ready_index,
                 std::vector<double> pointer_values);

  std::size_t dim() const noexcept { return pointer_basis_.rows(); }
  std::size_t n_outcomes() const noexcept { return pointer_values_.size(); }
  std::size_t ready_index() const noexcept { return ready_index_; }
  const ComplexMatrix& pointer_basis() const noexcept { return pointer_basis_; }
  std::span<const double> pointer_values() const noexcept { return pointer_values_; }

  /// Phi_k relative to the ready state: column (ready_index + k) mod dim.
  ComplexVector pointer_state(std::size_t k) const;
  StateVector ready_state() const;

  /// The copied observable: sum_j v_j P_{Phi_j}. Basis states that register
  /// no outcome share the blank value max(v) + 1.
  Observable pointer_observable() const;
  double blank_value() const;

 private:
  ComplexMatrix pointer_basis_;
  std::size_t ready_index_;
  std::vector<double> pointer_values_;
};

/// Standard pointer basis, ready_index 0. Throws TooSmall if dim < n_outcomes.
ApparatusModel build_apparatus(std::size_t n_outcomes, std::size_t dim,
                               std::vector<double> pointer_values);

class MeasurementModel {
 public:
  const ComplexMatrix& measured_basis() const noexcept { return measured_basis_; }
  std::span<const double> outcomes() const noexcept { return outcomes_; }
  const ApparatusModel& apparatus() const noexcept { return apparatus_; }
  const ComplexMatrix& coupling() const noexcept { return coupling_; }
  CompositeDims dims() const noexcept { return {measured_basis_.rows(), apparatus_.dim()}; }
  std::size_t n_outcomes() const noexcept { return outcomes_.size(); }

  ProjectionValuedMeasure measured_pvm() const;

 private:
  friend MeasurementModel build_coupling(const ComplexMatrix&, ApparatusModel,
                                         std::optional<std::vector<double>>);
  MeasurementModel(ComplexMatrix basis, std::vector<double> outcomes, ApparatusModel apparatus,
                   ComplexMatrix coupling)
      : measured_basis_(std::move(basis)),
        outcomes_(std::move(outcomes)),
        apparatus_(std::move(apparatus)),
        coupling_(std::move(coupling)) {}

  ComplexMatrix measured_basis_;
  std::vector<double> outcomes_;
  ApparatusModel apparatus_;
  ComplexMatrix coupling_;
};

/// U: psi_j (x) Phi_k -> psi_j (x) Phi_{(k + j) mod dim_M}, a permutation of
/// the product basis. Outcome values default to the apparatus pointer values.
/// Throws NotOrthonormal, TooSmall.
MeasurementModel build_coupling(const ComplexMatrix& measured_basis, ApparatusModel apparatus,
                                std::optional<std::vector<double>> outcomes = std::nullopt);

/// Builds the whole model from an observable on S. The spectrum must be
/// nondegenerate (DegenerateSpectrum otherwise). Pointer values default to
/// the eigenvalues.
MeasurementModel build_measurement(const Observable& measured, std::size_t dim_apparatus,
                                   std::optional<std::vector<double>> pointer_values = std::nullopt);

/// U (psi (x) Phi_0)
StateVector premeasure(const StateVector& psi, const MeasurementModel& model);
/// U (rho (x) P_Phi0) U^dagger
DensityMatrix premeasure(const DensityMatrix& rho, const MeasurementModel& model);

/// rho -> sum_n (psi_n|rho|psi_n) P_{psi_n}
DensityMatrix collapse(const DensityMatrix& rho, const ComplexMatrix& measured_basis);

DensityMatrix apparatus_reduced_state(const StateVector& composite, CompositeDims dims);
DensityMatrix apparatus_reduced_state(const DensityMatrix& composite, CompositeDims dims);

/// (Phi_j|rho_M|Phi_j) for each registered outcome j.
std::vector<double> pointer_distribution(const DensityMatrix& apparatus_state,
                                         const ApparatusModel& apparatus);

struct SampledOutcome {
  std::size_t index = 0;
  double value = 0.0;
  // Reporting convention only: the eigenvector for the drawn outcome. No
  // dynamical reduction of S is implied.
  StateVector post_state;
};

SampledOutcome sample_outcome(const StateVector& psi, const MeasurementModel& model,
                              RandomStream& rng);
/// Inverse-CDF draw from a probability vector.
std::size_t sample_index(std::span<const double> probabilities, RandomStream& rng);

/// Couples a second apparatus to the pointer of the first (S -> M -> M1) and
/// returns the pointer distribution read off M1 after tracing out S and M.
/// Entries beyond model.n_outcomes() belong to unregistered pointer states of M.
std::vector<double> chain_pointer_distribution(const StateVector& psi, const MeasurementModel& model,
                                               const ApparatusModel& second);

}  // namespace qmeas
