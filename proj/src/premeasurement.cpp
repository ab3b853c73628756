#include "qmeas/premeasurement.hpp"

#include <algorithm>
#include <string>

#include "qmeas/error.hpp"

namespace qmeas {

namespace {

void require_unitary(const ComplexMatrix& m, const char* what) {
  if (!m.is_square() ||
      max_abs_diff(m.adjoint() * m, ComplexMatrix::identity(m.rows())) > kTolOrtho) {
    throw Error(ErrorKind::NotOrthonormal, what);
  }
}

// Pointer basis with columns reordered so that column k is Phi_k.
ComplexMatrix relative_pointer_basis(const ApparatusModel& apparatus) {
  ComplexMatrix out(apparatus.dim(), apparatus.dim());
  for (std::size_t k = 0; k < apparatus.dim(); ++k) out.set_column(k, apparatus.pointer_state(k));
  return out;
}

}  // namespace

ApparatusModel::ApparatusModel(ComplexMatrix pointer_basis, std::size_t ready_index,
                               std::vector<double> pointer_values)
    : pointer_basis_(std::move(pointer_basis)),
      ready_index_(ready_index),
      pointer_values_(std::move(pointer_values)) {
  require_unitary(pointer_basis_, "pointer basis");
  if (pointer_values_.empty()) throw Error(ErrorKind::ValidationError, "apparatus needs an outcome");
  if (dim() < pointer_values_.size()) {
    throw Error(ErrorKind::TooSmall, "apparatus dim " + std::to_string(dim()) + " < " +
                                         std::to_string(pointer_values_.size()) + " outcomes");
  }
  if (ready_index_ >= dim()) throw Error(ErrorKind::ValidationError, "ready_index out of range");
  std::vector<double> sorted = pointer_values_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw Error(ErrorKind::ValidationError, "pointer values must be distinct");
  }
}

ComplexVector ApparatusModel::pointer_state(std::size_t k) const {
  return pointer_basis_.column((ready_index_ + k) % dim());
}

StateVector ApparatusModel::ready_state() const {
  return StateVector::from_amplitudes(pointer_state(0));
}

double ApparatusModel::blank_value() const {
  return *std::max_element(pointer_values_.begin(), pointer_values_.end()) + 1.0;
}

Observable ApparatusModel::pointer_observable() const {
  ComplexMatrix m(dim(), dim());
  for (std::size_t k = 0; k < dim(); ++k) {
    const double value = k < n_outcomes() ? pointer_values_[k] : blank_value();
    const ComplexVector phi = pointer_state(k);
    m += cplx(value) * ComplexMatrix::outer(phi, phi);
  }
  // Exact Hermitian symmetry for the downstream eigen solver.
  ComplexMatrix sym = m + m.adjoint();
  sym *= 0.5;
  return Observable::from_matrix(std::move(sym));
}

ApparatusModel build_apparatus(std::size_t n_outcomes, std::size_t dim,
                               std::vector<double> pointer_values) {
  if (n_outcomes == 0) throw Error(ErrorKind::ValidationError, "need at least one outcome");
  if (dim < n_outcomes) {
    throw Error(ErrorKind::TooSmall, "apparatus dim " + std::to_string(dim) + " < " +
                                         std::to_string(n_outcomes) + " outcomes");
  }
  if (pointer_values.size() != n_outcomes) {
    throw Error(ErrorKind::DimMismatch, "one pointer value per outcome required");
  }
  return ApparatusModel(ComplexMatrix::identity(dim), 0, std::move(pointer_values));
}

ProjectionValuedMeasure MeasurementModel::measured_pvm() const {
  std::vector<std::size_t> order(outcomes_.size());
  for (std::size_t j = 0; j < order.size(); ++j) order[j] = j;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return outcomes_[a] < outcomes_[b]; });
  std::vector<double> values;
  std::vector<ComplexMatrix> projectors;
  for (std::size_t j : order) {
    const ComplexVector psi = measured_basis_.column(j);
    values.push_back(outcomes_[j]);
    projectors.push_back(ComplexMatrix::outer(psi, psi));
  }
  return ProjectionValuedMeasure::from_parts(std::move(values), std::move(projectors));
}

MeasurementModel build_coupling(const ComplexMatrix& measured_basis, ApparatusModel apparatus,
                                std::optional<std::vector<double>> outcomes) {
  require_unitary(measured_basis, "measured basis");
  const std::size_t n = measured_basis.rows();
  const std::size_t d = apparatus.dim();
  if (d < n) {
    throw Error(ErrorKind::TooSmall, "apparatus dim " + std::to_string(d) + " < " +
                                         std::to_string(n) + " outcomes");
  }
  if (apparatus.n_outcomes() != n) {
    throw Error(ErrorKind::DimMismatch, "apparatus registers " +
                                            std::to_string(apparatus.n_outcomes()) +
                                            " outcomes, system has " + std::to_string(n));
  }
  std::vector<double> values =
      outcomes.value_or(std::vector<double>(apparatus.pointer_values().begin(),
                                            apparatus.pointer_values().end()));
  if (values.size() != n) throw Error(ErrorKind::DimMismatch, "one outcome value per basis vector");

  // U = W S W^dagger with W = basis (x) pointers and S the controlled shift.
  const ComplexMatrix w = kronecker(measured_basis, relative_pointer_basis(apparatus));
  ComplexMatrix ws(n * d, n * d);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < d; ++k) {
      const std::size_t target = j * d + (k + j) % d;
      for (std::size_t row = 0; row < n * d; ++row) ws(row, j * d + k) = w(row, target);
    }
  }
  ComplexMatrix coupling = ws * w.adjoint();
  return MeasurementModel(measured_basis, std::move(values), std::move(apparatus),
                          std::move(coupling));
}

MeasurementModel build_measurement(const Observable& measured, std::size_t dim_apparatus,
                                   std::optional<std::vector<double>> pointer_values) {
  const EigenSystem eig = hermitian_eigendecompose(measured.matrix());
  const auto groups = cluster_eigenvalues(eig.values, default_cluster_tol(eig.values));
  if (groups.size() != eig.values.size()) {
    throw Error(ErrorKind::DegenerateSpectrum,
                "measured observable has a degenerate eigenvalue; only nondegenerate spectra are "
                "supported");
  }
  const std::size_t n = eig.values.size();
  std::vector<double> pointers = pointer_values.value_or(eig.values);
  ApparatusModel apparatus = build_apparatus(n, dim_apparatus, std::move(pointers));
  return build_coupling(eig.vectors, std::move(apparatus), eig.values);
}

StateVector premeasure(const StateVector& psi, const MeasurementModel& model) {
  if (psi.dim() != model.dims().system) {
    throw Error(ErrorKind::DimMismatch, "premeasure: state dim does not match measured system");
  }
  const ComplexVector input = kronecker(psi.amplitudes(), model.apparatus().ready_state().amplitudes());
  return StateVector::from_amplitudes(model.coupling() * input);
}

DensityMatrix premeasure(const DensityMatrix& rho, const MeasurementModel& model) {
  if (rho.dim() != model.dims().system) {
    throw Error(ErrorKind::DimMismatch, "premeasure: state dim does not match measured system");
  }
  const ComplexVector ready = model.apparatus().ready_state().amplitudes();
  const ComplexMatrix input = kronecker(rho.matrix(), ComplexMatrix::outer(ready, ready));
  return DensityMatrix::validate(model.coupling() * input * model.coupling().adjoint());
}

DensityMatrix collapse(const DensityMatrix& rho, const ComplexMatrix& measured_basis) {
  require_unitary(measured_basis, "measured basis");
  if (measured_basis.rows() != rho.dim()) {
    throw Error(ErrorKind::DimMismatch, "collapse: basis and state dims differ");
  }
  ComplexMatrix out(rho.dim(), rho.dim());
  for (std::size_t n = 0; n < measured_basis.cols(); ++n) {
    const ComplexVector psi = measured_basis.column(n);
    const double weight = inner(psi, rho.matrix() * psi).real();
    out += cplx(weight) * ComplexMatrix::outer(psi, psi);
  }
  return DensityMatrix::validate(std::move(out));
}

DensityMatrix apparatus_reduced_state(const StateVector& composite, CompositeDims dims) {
  if (composite.dim() != dims.total()) {
    throw Error(ErrorKind::DimMismatch, "apparatus_reduced_state: composite dim mismatch");
  }
  return partial_trace(projector_of(composite), dims, Subsystem::Apparatus);
}

DensityMatrix apparatus_reduced_state(const DensityMatrix& composite, CompositeDims dims) {
  return partial_trace(composite, dims, Subsystem::Apparatus);
}

std::vector<double> pointer_distribution(const DensityMatrix& apparatus_state,
                                         const ApparatusModel& apparatus) {
  if (apparatus_state.dim() != apparatus.dim()) {
    throw Error(ErrorKind::DimMismatch, "pointer_distribution");
  }
  std::vector<double> out;
  for (std::size_t j = 0; j < apparatus.n_outcomes(); ++j) {
    const ComplexVector phi = apparatus.pointer_state(j);
    out.push_back(inner(phi, apparatus_state.matrix() * phi).real());
  }
  return out;
}

std::size_t sample_index(std::span<const double> probabilities, RandomStream& rng) {
  const double u = rng.uniform();
  double cumulative = 0.0;
  std::size_t last_nonzero = 0;
  for (std::size_t j = 0; j < probabilities.size(); ++j) {
    if (probabilities[j] <= 0.0) continue;
    last_nonzero = j;
    cumulative += probabilities[j];
    if (u < cumulative) return j;
  }
  // Rounding left the cumulative sum just below u.
  return last_nonzero;
}

SampledOutcome sample_outcome(const StateVector& psi, const MeasurementModel& model,
                              RandomStream& rng) {
  if (psi.dim() != model.dims().system) throw Error(ErrorKind::DimMismatch, "sample_outcome");
  std::vector<double> probabilities;
  for (std::size_t j = 0; j < model.n_outcomes(); ++j) {
    probabilities.push_back(std::norm(inner(model.measured_basis().column(j), psi.amplitudes())));
  }
  const std::size_t j = sample_index(probabilities, rng);
  return SampledOutcome{j, model.outcomes()[j],
                        StateVector::normalized(model.measured_basis().column(j))};
}

std::vector<double> chain_pointer_distribution(const StateVector& psi,
                                               const MeasurementModel& model,
                                               const ApparatusModel& second) {
  const ApparatusModel& first = model.apparatus();
  const std::size_t n = model.dims().system;
  std::vector<double> labels(first.dim());
  for (std::size_t k = 0; k < labels.size(); ++k) labels[k] = static_cast<double>(k);
  const MeasurementModel relay = build_coupling(relative_pointer_basis(first), second, labels);

  const StateVector stage1 = premeasure(psi, model);
  const ComplexVector input = kronecker(stage1.amplitudes(), second.ready_state().amplitudes());
  const ComplexMatrix u = kronecker(ComplexMatrix::identity(n), relay.coupling());
  const StateVector stage2 = StateVector::from_amplitudes(u * input);
  const DensityMatrix reduced =
      apparatus_reduced_state(stage2, CompositeDims{n * first.dim(), second.dim()});
  return pointer_distribution(reduced, second);
}

}  // namespace qmeas
