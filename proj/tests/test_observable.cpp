#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "qmeas/error.hpp"
#include "qmeas/observable.hpp"
#include "qmeas/random.hpp"
#include "test_support.hpp"

using namespace qmeas;
using qmeas::testing::close;

namespace {

template <class F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no qmeas::Error thrown");
  return ErrorKind::ValidationError;
}

Observable diag(std::initializer_list<double> v) { return Observable::from_matrix(ComplexMatrix::diagonal(v)); }

Observable random_observable(std::size_t n, RandomStream& rng) {
  return Observable::from_matrix(random_hermitian(n, rng));
}

// Hermitian with a prescribed spectrum in a random basis.
Observable with_spectrum(const std::vector<double>& spectrum, RandomStream& rng) {
  const ComplexMatrix u = random_unitary(spectrum.size(), rng);
  const ComplexMatrix m = u * ComplexMatrix::diagonal(spectrum) * u.adjoint();
  return Observable::from_matrix(0.5 * (m + m.adjoint()));
}

double diag_offset(const ComplexMatrix& basis, const ComplexMatrix& a) {
  const ComplexMatrix d = basis.adjoint() * a * basis;
  double worst = 0.0;
  for (std::size_t i = 0; i < d.rows(); ++i) {
    for (std::size_t j = 0; j < d.cols(); ++j) {
      if (i != j) worst = std::max(worst, std::abs(d(i, j)));
    }
  }
  return worst;
}

}  // namespace

TEST_CASE("Observable::from_matrix rejects non-Hermitian input") {
  CHECK(kind_of([] { Observable::from_matrix(ComplexMatrix{{0.0, 1.0}, {0.0, 0.0}}); }) ==
        ErrorKind::NotHermitian);
  CHECK(kind_of([] { Observable::from_matrix(ComplexMatrix(1, 2)); }) == ErrorKind::NotSquare);
}

TEST_CASE("spectral_decomposition: examples") {
  const ProjectionValuedMeasure d = spectral_decomposition(diag({1.0, 1.0, 2.0}));
  REQUIRE(d.size() == 2);
  CHECK(close(d.outcomes()[0], 1.0));
  CHECK(close(d.outcomes()[1], 2.0));
  CHECK(close(d.projectors()[0], ComplexMatrix::diagonal({1.0, 1.0, 0.0})));
  CHECK(close(d.projectors()[1], ComplexMatrix::diagonal({0.0, 0.0, 1.0})));

  const ProjectionValuedMeasure x = spectral_decomposition(Observable::from_matrix(testing::pauli_x()));
  REQUIRE(x.size() == 2);
  CHECK(close(x.outcomes()[0], -1.0));
  CHECK(close(x.outcomes()[1], 1.0));
  CHECK(close(x.projectors()[0], ComplexMatrix{{0.5, -0.5}, {-0.5, 0.5}}));
  CHECK(close(x.projectors()[1], ComplexMatrix{{0.5, 0.5}, {0.5, 0.5}}));

  const ProjectionValuedMeasure id = spectral_decomposition(diag({1.0, 1.0, 1.0, 1.0}));
  REQUIRE(id.size() == 1);
  CHECK(close(id.outcomes()[0], 1.0));
  CHECK(close(id.projectors()[0], ComplexMatrix::identity(4)));
}

TEST_CASE("property: spectral measures satisfy the PVM axioms and reconstruct") {
  RandomStream rng(31);
  for (int rep = 0; rep < 40; ++rep) {
    const std::size_t n = 1 + rep % 12;
    const Observable a = random_observable(n, rng);
    const ProjectionValuedMeasure pvm = spectral_decomposition(a);
    ComplexMatrix total(n, n);
    ComplexMatrix rebuilt(n, n);
    for (std::size_t k = 0; k < pvm.size(); ++k) {
      const ComplexMatrix& e = pvm.projectors()[k];
      CHECK(max_abs_diff(e * e, e) <= 1e-10);
      CHECK(max_abs_diff(e.adjoint(), e) <= 1e-10);
      for (std::size_t j = 0; j < k; ++j) {
        CHECK(max_abs_diff(e * pvm.projectors()[j], ComplexMatrix(n, n)) <= 1e-10);
      }
      total += e;
      rebuilt += cplx(pvm.outcomes()[k]) * e;
    }
    CHECK(max_abs_diff(total, ComplexMatrix::identity(n)) <= 1e-10);
    CHECK(relative_frobenius_error(rebuilt, a.matrix()) <= 1e-9);
  }
}

TEST_CASE("ProjectionValuedMeasure::from_parts validates") {
  const ComplexMatrix p0 = ComplexMatrix::diagonal({1.0, 0.0});
  const ComplexMatrix p1 = ComplexMatrix::diagonal({0.0, 1.0});
  CHECK_NOTHROW(ProjectionValuedMeasure::from_parts({0.0, 1.0}, {p0, p1}));
  CHECK(kind_of([&] { ProjectionValuedMeasure::from_parts({0.0, 1.0}, {p0, p0}); }) ==
        ErrorKind::ValidationError);
  CHECK(kind_of([&] { ProjectionValuedMeasure::from_parts({0.0}, {p0}); }) ==
        ErrorKind::ValidationError);
  CHECK(kind_of([&] {
          ProjectionValuedMeasure::from_parts({0.0, 1.0}, {ComplexMatrix::diagonal({2.0, 0.0}), p1});
        }) == ErrorKind::ValidationError);
}

TEST_CASE("pvm_restrict") {
  const ProjectionValuedMeasure pvm = spectral_decomposition(diag({-1.0, 0.5, 2.0}));
  CHECK(close(pvm_restrict(pvm, BorelSet::real_line()), ComplexMatrix::identity(3)));
  CHECK(close(pvm_restrict(pvm, BorelSet::empty()), ComplexMatrix(3, 3)));
  // [0, 2) holds only 0.5; the upper endpoint is excluded.
  CHECK(close(pvm_restrict(pvm, BorelSet{{Interval{0.0, 2.0}}}), ComplexMatrix::diagonal({0.0, 1.0, 0.0})));
  // Disjoint union adds.
  const BorelSet two{{Interval{-5.0, 0.0}, Interval{2.0, 3.0}}};
  CHECK(close(pvm_restrict(pvm, two), ComplexMatrix::diagonal({1.0, 0.0, 1.0})));
}

TEST_CASE("commutes: examples") {
  RandomStream rng(32);
  const Observable a = random_observable(4, rng);
  CHECK(commutes(a, a));
  CHECK(commutes(diag({1.0, 2.0}), diag({3.0, 4.0})));
  // [X, Z] = [[0,-2],[2,0]]
  CHECK_FALSE(commutes(Observable::from_matrix(testing::pauli_x()), diag({1.0, -1.0})));
}

TEST_CASE("joint_eigenbasis: examples") {
  SUBCASE("single observable") {
    RandomStream rng(33);
    const Observable a = with_spectrum({-2.0, 0.5, 3.0}, rng);
    const std::vector<Observable> family{a};
    const JointEigenbasis jb = joint_eigenbasis(family);
    REQUIRE(jb.value_tuples.size() == 3);
    CHECK(close(jb.value_tuples[0][0], -2.0));
    CHECK(close(jb.value_tuples[1][0], 0.5));
    CHECK(close(jb.value_tuples[2][0], 3.0));
    CHECK(diag_offset(jb.basis, a.matrix()) <= 1e-10);
  }
  SUBCASE("second observable splits a degenerate cluster") {
    const std::vector<Observable> family{diag({1.0, 1.0, 2.0}), diag({3.0, 4.0, 5.0})};
    const JointEigenbasis jb = joint_eigenbasis(family);
    const std::vector<std::vector<double>> expected{{1.0, 3.0}, {1.0, 4.0}, {2.0, 5.0}};
    REQUIRE(jb.value_tuples.size() == 3);
    for (std::size_t k = 0; k < 3; ++k) {
      CHECK(close(jb.value_tuples[k][0], expected[k][0]));
      CHECK(close(jb.value_tuples[k][1], expected[k][1]));
      CHECK(std::abs(jb.basis(k, k)) == doctest::Approx(1.0));
    }
  }
  SUBCASE("A and A^2") {
    RandomStream rng(34);
    const Observable a = with_spectrum({-1.5, -0.5, 1.0, 2.0}, rng);
    const ComplexMatrix sq = a.matrix() * a.matrix();
    const std::vector<Observable> family{a, Observable::from_matrix(0.5 * (sq + sq.adjoint()))};
    const JointEigenbasis jb = joint_eigenbasis(family);
    REQUIRE(jb.value_tuples.size() == 4);
    for (const auto& t : jb.value_tuples) CHECK(close(t[1], t[0] * t[0], 1e-10));
    for (const auto& o : family) CHECK(diag_offset(jb.basis, o.matrix()) <= 1e-8);
  }
  SUBCASE("non-commuting pair") {
    const std::vector<Observable> family{Observable::from_matrix(testing::pauli_x()),
                                         diag({1.0, -1.0})};
    CHECK(kind_of([&] { joint_eigenbasis(family); }) == ErrorKind::NotCommuting);
  }
}

TEST_CASE("property: polynomial families are jointly diagonalized with distinct tuples") {
  RandomStream rng(35);
  for (int rep = 0; rep < 25; ++rep) {
    const std::size_t n = 2 + rep % 8;
    // Degenerate base so that later members have to refine.
    std::vector<double> spectrum(n);
    for (std::size_t i = 0; i < n; ++i) spectrum[i] = std::floor(3.0 * rng.uniform());
    const Observable base = with_spectrum(spectrum, rng);
    const ComplexMatrix& h = base.matrix();
    const ComplexMatrix h2 = h * h;
    std::vector<Observable> family{base};
    for (int m = 0; m < 2; ++m) {
      const ComplexMatrix p = cplx(rng.normal()) * ComplexMatrix::identity(n) + cplx(rng.normal()) * h +
                              cplx(rng.normal()) * h2;
      family.push_back(Observable::from_matrix(0.5 * (p + p.adjoint())));
    }
    const JointEigenbasis jb = joint_eigenbasis(family);
    CHECK(max_abs_diff(jb.basis.adjoint() * jb.basis, ComplexMatrix::identity(n)) <= 1e-10);
    for (const auto& o : family) CHECK(diag_offset(jb.basis, o.matrix()) <= 1e-8);
    // Lexicographic order.
    for (std::size_t k = 1; k < jb.value_tuples.size(); ++k) {
      CHECK(jb.value_tuples[k - 1] <= jb.value_tuples[k]);
    }
  }
}

TEST_CASE("born_distribution: examples") {
  RandomStream rng(36);
  const Observable a = with_spectrum({-1.0, 0.25, 2.0}, rng);
  const ProjectionValuedMeasure pvm = spectral_decomposition(a);
  const ComplexMatrix basis = hermitian_eigendecompose(a.matrix()).vectors;

  const StateVector eigen = StateVector::from_amplitudes(basis.column(1));
  const OutcomeDistribution sharp = born_distribution(projector_of(eigen), pvm);
  CHECK(close(sharp.probabilities[0], 0.0));
  CHECK(close(sharp.probabilities[1], 1.0));
  CHECK(close(sharp.probabilities[2], 0.0));
  CHECK(close(sharp.outcomes[1], 0.25));

  const double r2 = 1.0 / std::sqrt(2.0);
  const StateVector sym = StateVector::from_amplitudes(basis.column(0).scaled(r2) + basis.column(1).scaled(r2));
  const OutcomeDistribution half = born_distribution(sym, pvm);
  CHECK(close(half.probabilities[0], 0.5));
  CHECK(close(half.probabilities[1], 0.5));

  const StateVector c = StateVector::from_amplitudes(basis.column(0).scaled(0.6) + basis.column(2).scaled(0.8));
  const OutcomeDistribution cat = born_distribution(projector_of(c), pvm);
  CHECK(close(cat.probabilities[0], 0.36));
  CHECK(close(cat.probabilities[1], 0.0));
  CHECK(close(cat.probabilities[2], 0.64));
}

TEST_CASE("property: pure-state Born route agrees with Tr(P_psi E_k)") {
  RandomStream rng(37);
  for (int rep = 0; rep < 30; ++rep) {
    const std::size_t n = 2 + rep % 9;
    const ProjectionValuedMeasure pvm = spectral_decomposition(random_observable(n, rng));
    const StateVector psi = random_state(n, rng);
    const OutcomeDistribution by_amplitude = born_distribution(psi, pvm);
    const ComplexMatrix rho = projector_of(psi).matrix();
    double total = 0.0;
    for (std::size_t k = 0; k < pvm.size(); ++k) {
      const double trace = trace_of_product(rho, pvm.projectors()[k]).real();
      CHECK(std::abs(by_amplitude.probabilities[k] - trace) <= 1e-12);
      CHECK(by_amplitude.probabilities[k] >= -1e-12);
      total += by_amplitude.probabilities[k];
    }
    CHECK(std::abs(total - 1.0) <= 1e-10);
  }
}

TEST_CASE("expectation: examples") {
  RandomStream rng(38);
  const DensityMatrix rho = projector_of(random_state(3, rng));
  CHECK(close(expectation(rho, diag({1.0, 1.0, 1.0})), 1.0));

  const double p = 0.3;
  const double a = -1.25;
  const double b = 4.0;
  CHECK(close(expectation(validate_density(ComplexMatrix::diagonal({p, 1.0 - p})), diag({a, b})),
              p * a + (1.0 - p) * b));

  const Observable obs = random_observable(3, rng);
  const ProjectionValuedMeasure pvm = spectral_decomposition(obs);
  const OutcomeDistribution dist = born_distribution(rho, pvm);
  double weighted = 0.0;
  for (std::size_t k = 0; k < pvm.size(); ++k) weighted += dist.outcomes[k] * dist.probabilities[k];
  CHECK(std::abs(expectation(rho, obs) - weighted) <= 1e-10);

  CHECK(kind_of([&] { expectation(rho, diag({1.0, 2.0})); }) == ErrorKind::DimMismatch);
}

TEST_CASE("sharp-value criterion: zero dispersion iff supported in one eigenspace") {
  RandomStream rng(39);
  const Observable a = with_spectrum({-1.0, 2.0, 2.0, 5.0}, rng);
  const ComplexMatrix basis = hermitian_eigendecompose(a.matrix()).vectors;

  // Any mixture inside the degenerate eigenspace has a sharp value.
  const StateVector in_block = StateVector::normalized(basis.column(1).scaled(cplx(0.3, 0.4)) +
                                                       basis.column(2).scaled(0.5));
  const DensityMatrix block_mix =
      mix(std::vector<double>{0.5, 0.5},
          std::vector<DensityMatrix>{projector_of(in_block), projector_of(StateVector::from_amplitudes(basis.column(2)))});
  CHECK(std::abs(dispersion(projector_of(in_block), a)) <= 1e-10);
  CHECK(std::abs(dispersion(block_mix, a)) <= 1e-10);
  CHECK(close(expectation(block_mix, a), 2.0));

  // Leaking any weight into another eigenspace gives strictly positive dispersion.
  for (double leak : {1e-2, 0.1, 0.5}) {
    const StateVector spread = StateVector::normalized(basis.column(1).scaled(std::sqrt(1.0 - leak)) +
                                                       basis.column(3).scaled(std::sqrt(leak)));
    // Two-point distribution on {2, 5}: variance = leak (1 - leak) 9.
    CHECK(close(dispersion(projector_of(spread), a), 9.0 * leak * (1.0 - leak), 1e-10));
    CHECK(dispersion(projector_of(spread), a) > 1e-10);
  }
}

TEST_CASE("evolve: examples and group law") {
  RandomStream rng(40);
  const Observable h = random_observable(4, rng);
  const StateVector psi = random_state(4, rng);
  CHECK(close(evolve(psi, h, 0.0).amplitudes(), psi.amplitudes()));

  const EigenSystem eig = hermitian_eigendecompose(h.matrix());
  const StateVector eigen = StateVector::from_amplitudes(eig.vectors.column(2));
  const double t = 0.77;
  CHECK(max_abs_diff(evolve(eigen, h, t).amplitudes(),
                     eigen.amplitudes().scaled(std::polar(1.0, -t * eig.values[2]))) <= 1e-10);

  CHECK(max_abs_diff(evolve(evolve(psi, h, t), h, t).amplitudes(), evolve(psi, h, 2 * t).amplitudes()) <=
        1e-9);
  CHECK(std::abs(evolve(psi, h, 3.1).amplitudes().norm() - 1.0) <= 1e-10);
  CHECK(kind_of([&] { evolve(StateVector::basis(2, 0), h, 1.0); }) == ErrorKind::DimMismatch);
}
