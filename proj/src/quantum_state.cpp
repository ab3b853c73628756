#include "qmeas/quantum_state.hpp"

#include <cmath>
#include <string>

#include "qmeas/error.hpp"

namespace qmeas {

StateVector StateVector::from_amplitudes(ComplexVector amplitudes, double tol) {
  const double norm = amplitudes.norm();
  if (amplitudes.dim() == 0 || std::abs(norm - 1.0) > tol) {
    throw Error(ErrorKind::NotNormalized, "state norm is " + std::to_string(norm));
  }
  return StateVector(std::move(amplitudes));
}

StateVector StateVector::normalized(ComplexVector amplitudes) {
  const double norm = amplitudes.norm();
  if (norm == 0.0) throw Error(ErrorKind::NotNormalized, "zero vector cannot be normalized");
  return StateVector(amplitudes.scaled(1.0 / norm));
}

StateVector StateVector::basis(std::size_t dim, std::size_t index) {
  return StateVector(ComplexVector::basis(dim, index));
}

DensityMatrix DensityMatrix::validate(ComplexMatrix m, double tol) {
  require_square(m, "density matrix");
  if (!m.all_finite()) throw Error(ErrorKind::NonFinite, "density matrix");
  if (!is_hermitian(m, tol)) throw Error(ErrorKind::NotHermitian, "density matrix");
  const EigenSystem eig = hermitian_eigendecompose(m, tol);
  if (eig.values.front() < -tol) {
    throw Error(ErrorKind::NotPositive,
                "minimum eigenvalue " + std::to_string(eig.values.front()));
  }
  const cplx tr = m.trace();
  if (std::abs(tr - 1.0) > tol) {
    throw Error(ErrorKind::TraceNotOne, "trace is " + std::to_string(tr.real()));
  }
  return DensityMatrix(std::move(m));
}

double DensityMatrix::purity() const { return trace_of_product(matrix_, matrix_).real(); }

DensityMatrix projector_of(const StateVector& psi) {
  // Rank one and unit trace by construction; no eigen check needed.
  return DensityMatrix(ComplexMatrix::outer(psi.amplitudes(), psi.amplitudes()));
}

DensityMatrix mix(std::span<const double> weights, std::span<const DensityMatrix> states) {
  if (weights.size() != states.size() || states.empty()) {
    throw Error(ErrorKind::BadWeights, "need one weight per state");
  }
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw Error(ErrorKind::BadWeights, "negative weight");
    total += w;
  }
  if (std::abs(total - 1.0) > kTolState) {
    throw Error(ErrorKind::BadWeights, "weights sum to " + std::to_string(total));
  }
  const std::size_t dim = states.front().dim();
  ComplexMatrix sum(dim, dim);
  for (std::size_t k = 0; k < states.size(); ++k) {
    if (states[k].dim() != dim) throw Error(ErrorKind::DimMismatch, "mixing states of different dim");
    sum += weights[k] * states[k].matrix();
  }
  return DensityMatrix::validate(std::move(sum));
}

StateVector tensor_state(const StateVector& psi, const StateVector& phi) {
  return StateVector::from_amplitudes(kronecker(psi.amplitudes(), phi.amplitudes()));
}

DensityMatrix partial_trace(const DensityMatrix& rho, CompositeDims dims, Subsystem keep) {
  if (rho.dim() != dims.total() || dims.total() == 0) {
    throw Error(ErrorKind::DimMismatch, "partial trace: state dim " + std::to_string(rho.dim()) +
                                            " vs " + std::to_string(dims.system) + "x" +
                                            std::to_string(dims.apparatus));
  }
  const ComplexMatrix& m = rho.matrix();
  const std::size_t ds = dims.system;
  const std::size_t da = dims.apparatus;
  if (keep == Subsystem::System) {
    ComplexMatrix out(ds, ds);
    for (std::size_t i = 0; i < ds; ++i) {
      for (std::size_t j = 0; j < ds; ++j) {
        cplx sum = 0.0;
        for (std::size_t a = 0; a < da; ++a) sum += m(i * da + a, j * da + a);
        out(i, j) = sum;
      }
    }
    return DensityMatrix::validate(std::move(out));
  }
  ComplexMatrix out(da, da);
  for (std::size_t a = 0; a < da; ++a) {
    for (std::size_t b = 0; b < da; ++b) {
      cplx sum = 0.0;
      for (std::size_t s = 0; s < ds; ++s) sum += m(s * da + a, s * da + b);
      out(a, b) = sum;
    }
  }
  return DensityMatrix::validate(std::move(out));
}

}  // namespace qmeas
