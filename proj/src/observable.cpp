#include "qmeas/observable.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qmeas/error.hpp"

namespace qmeas {

namespace {

void require_dim(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw Error(ErrorKind::DimMismatch,
                std::string(what) + ": dim " + std::to_string(got) + " vs " + std::to_string(want));
  }
}

ComplexMatrix hermitize(const ComplexMatrix& m) {
  ComplexMatrix out = m + m.adjoint();
  out *= 0.5;
  return out;
}

double spectral_radius(const ComplexMatrix& m) {
  const EigenSystem eig = hermitian_eigendecompose(m);
  return eig.values.empty() ? 0.0
                            : std::max(std::abs(eig.values.front()), std::abs(eig.values.back()));
}

double mean_of(std::span<const double> values, const std::vector<std::size_t>& group) {
  double sum = 0.0;
  for (std::size_t i : group) sum += values[i];
  return sum / static_cast<double>(group.size());
}

ComplexMatrix select_columns(const ComplexMatrix& m, const std::vector<std::size_t>& cols) {
  ComplexMatrix out(m.rows(), cols.size());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = m(i, cols[j]);
  }
  return out;
}

struct Refiner {
  std::span<const Observable> observables;
  std::vector<double> cluster_tols;
  std::vector<ComplexVector> columns;
  std::vector<std::vector<double>> tuples;

  void refine(const ComplexMatrix& block, std::size_t level, std::vector<double>& prefix) {
    if (level == observables.size()) {
      for (std::size_t j = 0; j < block.cols(); ++j) {
        columns.push_back(block.column(j));
        tuples.push_back(prefix);
      }
      return;
    }
    const ComplexMatrix compressed =
        hermitize(block.adjoint() * observables[level].matrix() * block);
    const EigenSystem eig = hermitian_eigendecompose(compressed);
    ComplexMatrix rotated = block * eig.vectors;
    for (const auto& group : cluster_eigenvalues(eig.values, cluster_tols[level])) {
      ComplexMatrix sub = select_columns(rotated, group);
      if (group.size() > 1) orthonormalize_columns(sub, 0, sub.cols());
      prefix.push_back(mean_of(eig.values, group));
      refine(sub, level + 1, prefix);
      prefix.pop_back();
    }
  }
};

}  // namespace

Observable Observable::from_matrix(ComplexMatrix m, double tol) {
  require_hermitian(m, tol, "observable");
  if (!m.all_finite()) throw Error(ErrorKind::NonFinite, "observable");
  return Observable(std::move(m));
}

ProjectionValuedMeasure ProjectionValuedMeasure::from_parts(std::vector<double> outcomes,
                                                            std::vector<ComplexMatrix> projectors,
                                                            double tol) {
  auto fail = [](const std::string& what) { throw Error(ErrorKind::ValidationError, what); };
  if (outcomes.size() != projectors.size() || outcomes.empty()) {
    fail("need one projector per outcome");
  }
  for (std::size_t k = 1; k < outcomes.size(); ++k) {
    if (!(outcomes[k] > outcomes[k - 1])) fail("outcomes must be strictly ascending");
  }
  const std::size_t dim = projectors.front().rows();
  ComplexMatrix total(dim, dim);
  for (std::size_t k = 0; k < projectors.size(); ++k) {
    const ComplexMatrix& e = projectors[k];
    if (!e.is_square() || e.rows() != dim) fail("projector shape");
    if (!is_hermitian(e, tol) || max_abs_diff(e * e, e) > tol) {
      fail("E_" + std::to_string(k) + " is not an orthogonal projector");
    }
    for (std::size_t j = 0; j < k; ++j) {
      if ((projectors[j] * e).max_abs() > tol) {
        fail("E_" + std::to_string(j) + " E_" + std::to_string(k) + " != 0");
      }
    }
    total += e;
  }
  if (max_abs_diff(total, ComplexMatrix::identity(dim)) > tol) fail("projectors do not sum to I");
  return ProjectionValuedMeasure(std::move(outcomes), std::move(projectors));
}

bool BorelSet::contains(double x) const noexcept {
  return std::any_of(intervals.begin(), intervals.end(),
                     [x](const Interval& iv) { return iv.contains(x); });
}

ProjectionValuedMeasure spectral_decomposition(const Observable& a,
                                               std::optional<double> tol_cluster) {
  const EigenSystem eig = hermitian_eigendecompose(a.matrix());
  const double tol = tol_cluster.value_or(default_cluster_tol(eig.values));
  std::vector<double> outcomes;
  std::vector<ComplexMatrix> projectors;
  for (const auto& group : cluster_eigenvalues(eig.values, tol)) {
    const ComplexMatrix cols = select_columns(eig.vectors, group);
    outcomes.push_back(mean_of(eig.values, group));
    projectors.push_back(cols * cols.adjoint());
  }
  return ProjectionValuedMeasure(std::move(outcomes), std::move(projectors));
}

ComplexMatrix pvm_restrict(const ProjectionValuedMeasure& pvm, const BorelSet& set) {
  ComplexMatrix out(pvm.dim(), pvm.dim());
  for (std::size_t k = 0; k < pvm.size(); ++k) {
    if (set.contains(pvm.outcomes()[k])) out += pvm.projectors()[k];
  }
  return out;
}

bool commutes(const Observable& a, const Observable& b, double tol) {
  require_dim(b.dim(), a.dim(), "commutes");
  const ComplexMatrix commutator = a.matrix() * b.matrix() - b.matrix() * a.matrix();
  return commutator.max_abs() <= tol * a.matrix().frobenius_norm() * b.matrix().frobenius_norm();
}

JointEigenbasis joint_eigenbasis(std::span<const Observable> observables, double tol) {
  if (observables.empty()) throw Error(ErrorKind::ValidationError, "no observables");
  const std::size_t dim = observables.front().dim();
  for (std::size_t i = 0; i < observables.size(); ++i) {
    require_dim(observables[i].dim(), dim, "joint_eigenbasis");
    for (std::size_t j = 0; j < i; ++j) {
      if (!commutes(observables[j], observables[i], tol)) {
        throw Error(ErrorKind::NotCommuting, "observables " + std::to_string(j) + " and " +
                                                 std::to_string(i) + " do not commute");
      }
    }
  }

  Refiner refiner{observables, {}, {}, {}};
  for (const auto& obs : observables) {
    refiner.cluster_tols.push_back(kClusterRel * spectral_radius(obs.matrix()));
  }
  std::vector<double> prefix;
  refiner.refine(ComplexMatrix::identity(dim), 0, prefix);

  return JointEigenbasis{ComplexMatrix::from_columns(refiner.columns), std::move(refiner.tuples)};
}

OutcomeDistribution born_distribution(const DensityMatrix& rho,
                                      const ProjectionValuedMeasure& pvm) {
  require_dim(rho.dim(), pvm.dim(), "born_distribution");
  OutcomeDistribution dist;
  dist.outcomes.assign(pvm.outcomes().begin(), pvm.outcomes().end());
  for (const auto& e : pvm.projectors()) {
    dist.probabilities.push_back(trace_of_product(rho.matrix(), e).real());
  }
  return dist;
}

OutcomeDistribution born_distribution(const StateVector& psi,
                                      const ProjectionValuedMeasure& pvm) {
  require_dim(psi.dim(), pvm.dim(), "born_distribution");
  OutcomeDistribution dist;
  dist.outcomes.assign(pvm.outcomes().begin(), pvm.outcomes().end());
  for (const auto& e : pvm.projectors()) {
    const double n = (e * psi.amplitudes()).norm();
    dist.probabilities.push_back(n * n);
  }
  return dist;
}

double expectation(const DensityMatrix& rho, const Observable& a) {
  require_dim(a.dim(), rho.dim(), "expectation");
  const cplx value = trace_of_product(rho.matrix(), a.matrix());
  if (std::abs(value.imag()) > 1e-10) {
    throw Error(ErrorKind::NonRealExpectation, "imaginary part " + std::to_string(value.imag()));
  }
  return value.real();
}

double dispersion(const DensityMatrix& rho, const Observable& a) {
  const double mean = expectation(rho, a);
  const double second = trace_of_product(rho.matrix(), a.matrix() * a.matrix()).real();
  return second - mean * mean;
}

StateVector evolve(const StateVector& psi, const Observable& h, double t) {
  require_dim(psi.dim(), h.dim(), "evolve");
  return StateVector::from_amplitudes(unitary_exp(h.matrix(), t) * psi.amplitudes());
}

}  // namespace qmeas
