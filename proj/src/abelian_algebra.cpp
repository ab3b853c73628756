#include "qmeas/abelian_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qmeas/error.hpp"

namespace qmeas {

ComplexMatrix AbelianAlgebra::element(std::span<const double> values) const {
  if (values.size() != projectors_.size()) {
    throw Error(ErrorKind::DimMismatch, "one value per spectrum point required");
  }
  ComplexMatrix out(dim_, dim_);
  for (std::size_t k = 0; k < projectors_.size(); ++k) out += cplx(values[k]) * projectors_[k];
  return out;
}

AbelianAlgebra generate_algebra(std::span<const Observable> generators, double tol) {
  const JointEigenbasis joint = joint_eigenbasis(generators, tol);
  const std::size_t dim = joint.basis.rows();

  AbelianAlgebra algebra;
  algebra.dim_ = dim;
  algebra.generators_.assign(generators.begin(), generators.end());

  // Columns arrive in lexicographic tuple order; equal tuples are adjacent.
  std::size_t first = 0;
  while (first < dim) {
    std::size_t last = first + 1;
    while (last < dim && joint.value_tuples[last] == joint.value_tuples[first]) ++last;
    const ComplexMatrix block = joint.basis.column_block(first, last - first);
    algebra.projectors_.push_back(block * block.adjoint());
    algebra.characters_.push_back(joint.value_tuples[first]);
    algebra.multiplicities_.push_back(last - first);
    first = last;
  }

  for (std::size_t g = 0; g < generators.size(); ++g) {
    std::vector<double> values;
    for (const auto& character : algebra.characters_) values.push_back(character[g]);
    const ComplexMatrix rebuilt = algebra.element(values);
    if (relative_frobenius_error(rebuilt, generators[g].matrix()) > 1e-9 &&
        max_abs_diff(rebuilt, generators[g].matrix()) > 1e-9) {
      throw Error(ErrorKind::ValidationError,
                  "generator " + std::to_string(g) + " not reproduced by joint projectors");
    }
  }
  return algebra;
}

std::vector<SpectrumPoint> spectrum(const AbelianAlgebra& algebra) {
  std::vector<SpectrumPoint> points;
  for (std::size_t k = 0; k < algebra.size(); ++k) {
    points.push_back(SpectrumPoint{k, algebra.characters()[k], algebra.multiplicity(k)});
  }
  return points;
}

std::vector<double> gelfand_transform(const AbelianAlgebra& algebra, const ComplexMatrix& element,
                                      double tol) {
  if (!element.is_square() || element.rows() != algebra.dim()) {
    throw Error(ErrorKind::DimMismatch, "gelfand_transform");
  }
  std::vector<double> values;
  for (std::size_t k = 0; k < algebra.size(); ++k) {
    const cplx tr = trace_of_product(element, algebra.projectors()[k]);
    values.push_back(tr.real() / static_cast<double>(algebra.multiplicity(k)));
  }
  const double residual = max_abs_diff(algebra.element(values), element);
  if (residual > tol * std::max(1.0, element.max_abs())) {
    throw Error(ErrorKind::NotInAlgebra,
                "element differs from its block-constant part by " + std::to_string(residual));
  }
  return values;
}

SpectralProbabilityMeasure::SpectralProbabilityMeasure(std::vector<double> weights)
    : weights_(std::move(weights)) {
  double total = 0.0;
  for (double w : weights_) {
    if (!(w >= -1e-12)) throw Error(ErrorKind::BadWeights, "negative weight " + std::to_string(w));
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-10) {
    throw Error(ErrorKind::BadWeights, "weights sum to " + std::to_string(total));
  }
}

SpectralProbabilityMeasure restrict_state(const DensityMatrix& rho, const AbelianAlgebra& algebra) {
  if (rho.dim() != algebra.dim()) throw Error(ErrorKind::DimMismatch, "restrict_state");
  std::vector<double> weights;
  for (const auto& pi : algebra.projectors()) {
    weights.push_back(trace_of_product(rho.matrix(), pi).real());
  }
  return SpectralProbabilityMeasure(std::move(weights));
}

SpectralProbabilityMeasure restrict_state(const StateVector& psi, const AbelianAlgebra& algebra) {
  if (psi.dim() != algebra.dim()) throw Error(ErrorKind::DimMismatch, "restrict_state");
  std::vector<double> weights;
  for (const auto& pi : algebra.projectors()) {
    weights.push_back(inner(psi.amplitudes(), pi * psi.amplitudes()).real());
  }
  return SpectralProbabilityMeasure(std::move(weights));
}

DensityMatrix proper_mixture_representative(const SpectralProbabilityMeasure& measure,
                                            const AbelianAlgebra& algebra) {
  if (measure.size() != algebra.size()) {
    throw Error(ErrorKind::DimMismatch, "measure and algebra spectrum sizes differ");
  }
  ComplexMatrix out(algebra.dim(), algebra.dim());
  for (std::size_t k = 0; k < algebra.size(); ++k) {
    out += cplx(measure[k] / static_cast<double>(algebra.multiplicity(k))) * algebra.projectors()[k];
  }
  return DensityMatrix::validate(std::move(out));
}

DecompositionRecord verify_unique_decomposition(const SpectralProbabilityMeasure& measure) {
  DecompositionRecord record;
  for (std::size_t k = 0; k < measure.size(); ++k) {
    if (measure[k] != 0.0) record.atoms.push_back(Atom{k, measure[k]});
  }
  // mu = sum_atoms w delta_point; evaluating at each point recovers the coordinate.
  record.recovered_weights.assign(measure.size(), 0.0);
  for (const auto& atom : record.atoms) record.recovered_weights[atom.point] += atom.weight;
  record.unique = std::equal(record.recovered_weights.begin(), record.recovered_weights.end(),
                             measure.weights().begin(), measure.weights().end());
  return record;
}

}  // namespace qmeas
