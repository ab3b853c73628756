// Seedable random streams and random test objects (states, bases, observables).

#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "qmeas/numerics.hpp"
#include "qmeas/quantum_state.hpp"

namespace qmeas {

/// A named, reproducible stream. The engine is std::mt19937_64, whose output
/// sequence is fixed by the C++ standard; seeds are mixed with SplitMix64 and
/// doubles are built from the top 53 bits, so draws agree bit-for-bit across
/// platforms. No std:: distributions are used for the same reason.
class RandomStream {
 public:
  static constexpr std::string_view kAlgorithm = "mt19937_64+splitmix64-seed";

  explicit RandomStream(std::uint64_t seed);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on [0, 1).
  double uniform();
  /// Standard normal (Box-Muller).
  double normal();
  cplx complex_normal();

  /// Independent stream for item `index`; depends only on (seed, index).
  RandomStream substream(std::uint64_t index) const;

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

StateVector random_state(std::size_t dim, RandomStream& rng);
/// Haar-like unitary from Gram-Schmidt on a complex Gaussian matrix.
ComplexMatrix random_unitary(std::size_t dim, RandomStream& rng);
/// (G + G^dagger) / 2 with complex Gaussian G.
ComplexMatrix random_hermitian(std::size_t dim, RandomStream& rng);

}  // namespace qmeas
