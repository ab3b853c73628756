// Finite-dimensional commutative operator algebras.
//
// An algebra is held by its minimal idempotents: the joint eigenprojectors
// Pi_k of its generators. Every element is sum_k v_k Pi_k, the spectrum is
// the finite set of characters k, and a state on the algebra is a
// probability vector over that set.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qmeas/numerics.hpp"
#include "qmeas/observable.hpp"
#include "qmeas/quantum_state.hpp"

namespace qmeas {

struct SpectrumPoint {
  std::size_t index = 0;
  std::vector<double> character;  // one value per generator
  std::size_t multiplicity = 0;   // rank of the projector
};

class AbelianAlgebra {
 public:
  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return projectors_.size(); }
  std::span<const Observable> generators() const noexcept { return generators_; }
  std::span<const ComplexMatrix> projectors() const noexcept { return projectors_; }
  std::span<const std::vector<double>> characters() const noexcept { return characters_; }
  std::size_t multiplicity(std::size_t k) const { return multiplicities_[k]; }

  /// sum_k values[k] Pi_k
  ComplexMatrix element(std::span<const double> values) const;

 private:
  friend AbelianAlgebra generate_algebra(std::span<const Observable>, double);
  std::size_t dim_ = 0;
  std::vector<Observable> generators_;
  std::vector<ComplexMatrix> projectors_;
  std::vector<std::vector<double>> characters_;
  std::vector<std::size_t> multiplicities_;
};

/// Unital algebra generated by mutually commuting observables (NotCommuting otherwise).
AbelianAlgebra generate_algebra(std::span<const Observable> generators, double tol = 1e-10);

/// Points in lexicographic order of their characters.
std::vector<SpectrumPoint> spectrum(const AbelianAlgebra& algebra);

/// Values of `element` at each spectrum point; NotInAlgebra unless the
/// element equals sum_k v_k Pi_k within tol (scaled by max(1, ||element||_max)).
std::vector<double> gelfand_transform(const AbelianAlgebra& algebra, const ComplexMatrix& element,
                                      double tol = 1e-9);

class SpectralProbabilityMeasure {
 public:
  /// Throws BadWeights unless weights >= -1e-12 and sum to 1 within 1e-10.
  explicit SpectralProbabilityMeasure(std::vector<double> weights);

  std::span<const double> weights() const noexcept { return weights_; }
  std::size_t size() const noexcept { return weights_.size(); }
  double operator[](std::size_t k) const { return weights_[k]; }

  friend bool operator==(const SpectralProbabilityMeasure&, const SpectralProbabilityMeasure&) = default;

 private:
  std::vector<double> weights_;
};

/// mu_k = Tr(rho Pi_k)
SpectralProbabilityMeasure restrict_state(const DensityMatrix& rho, const AbelianAlgebra& algebra);
/// mu_k = ||Pi_k psi||^2, without forming the density matrix.
SpectralProbabilityMeasure restrict_state(const StateVector& psi, const AbelianAlgebra& algebra);

/// sum_k mu_k Pi_k / mult_k. Inside a block of multiplicity > 1 the weight is
/// spread uniformly; the restriction itself does not fix the in-block state.
DensityMatrix proper_mixture_representative(const SpectralProbabilityMeasure& measure,
                                            const AbelianAlgebra& algebra);

struct Atom {
  std::size_t point = 0;
  double weight = 0.0;

  friend bool operator==(const Atom&, const Atom&) = default;
};

/// Decomposition of a measure into point masses. On a finite simplex the
/// coefficients are the coordinates themselves, so the decomposition is
/// unique; `unique` records that the recovered weights equal the input.
struct DecompositionRecord {
  std::vector<Atom> atoms;  // nonzero weights only
  std::vector<double> recovered_weights;
  bool unique = false;

  friend bool operator==(const DecompositionRecord&, const DecompositionRecord&) = default;
};

DecompositionRecord verify_unique_decomposition(const SpectralProbabilityMeasure& measure);

}  // namespace qmeas
