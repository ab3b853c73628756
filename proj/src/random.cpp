#include "qmeas/random.hpp"

#include <cmath>
#include <numbers>

namespace qmeas {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RandomStream::RandomStream(std::uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

double RandomStream::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double RandomStream::normal() {
  double u1 = uniform();
  while (u1 == 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

cplx RandomStream::complex_normal() {
  const double re = normal();
  const double im = normal();
  return {re, im};
}

RandomStream RandomStream::substream(std::uint64_t index) const {
  return RandomStream(splitmix64(seed_ ^ splitmix64(index + 0x632be59bd9b4e019ULL)));
}

StateVector random_state(std::size_t dim, RandomStream& rng) {
  ComplexVector v(dim);
  for (std::size_t i = 0; i < dim; ++i) v[i] = rng.complex_normal();
  return StateVector::normalized(std::move(v));
}

ComplexMatrix random_unitary(std::size_t dim, RandomStream& rng) {
  ComplexMatrix m(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) m(i, j) = rng.complex_normal();
  }
  orthonormalize_columns(m, 0, dim);
  return m;
}

ComplexMatrix random_hermitian(std::size_t dim, RandomStream& rng) {
  ComplexMatrix m(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) {
    m(i, i) = rng.normal();
    for (std::size_t j = i + 1; j < dim; ++j) {
      m(i, j) = rng.complex_normal() * std::sqrt(0.5);
      m(j, i) = std::conj(m(i, j));
    }
  }
  return m;
}

}  // namespace qmeas
