#include "qmeas/verify.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <set>
#include <string>

#include "qmeas/abelian_algebra.hpp"
#include "qmeas/error.hpp"
#include "qmeas/observable.hpp"
#include "qmeas/premeasurement.hpp"
#include "qmeas/random.hpp"
#include "qmeas/scenario.hpp"

namespace qmeas {

namespace {

CheckResult bounded(std::string name, double worst, double tol, std::string detail = {}) {
  return CheckResult{std::move(name), worst <= tol, worst, tol, std::move(detail)};
}

DensityMatrix random_density(std::size_t dim, RandomStream& rng) {
  ComplexMatrix g(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) g(i, j) = rng.complex_normal();
  }
  ComplexMatrix rho = g * g.adjoint();
  rho *= 1.0 / rho.trace().real();
  return DensityMatrix::validate(std::move(rho));
}

std::vector<double> labels(std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t j = 0; j < n; ++j) out[j] = static_cast<double>(j);
  return out;
}

CheckResult collapse_restriction(std::uint64_t seed) {
  double worst = 0.0;
  for (std::size_t dim = 2; dim <= 10; ++dim) {
    worst = std::max(worst, compare_collapse_vs_restriction(dim, dim, 50, seed + dim).worst);
  }
  return bounded("collapse_restriction_equivalence", worst, 1e-9, "dims 2..10, 50 pairs each");
}

CheckResult coupling_fidelity(std::uint64_t seed) {
  RandomStream rng(seed);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + trial % 7;
    const ComplexMatrix basis = random_unitary(n, rng);
    const MeasurementModel model = build_coupling(basis, build_apparatus(n, n, labels(n)));
    const StateVector psi = random_state(n, rng);
    const StateVector out = premeasure(psi, model);
    for (std::size_t j = 0; j < n; ++j) {
      const cplx c = inner(basis.column(j), psi.amplitudes());
      for (std::size_t k = 0; k < n; ++k) {
        const ComplexVector slot = kronecker(basis.column(j), model.apparatus().pointer_state(k));
        const cplx expected = j == k ? c : cplx{};
        worst = std::max(worst, std::abs(inner(slot, out.amplitudes()) - expected));
      }
    }
    worst = std::max(worst, max_abs_diff(model.coupling().adjoint() * model.coupling(),
                                         ComplexMatrix::identity(n * n)));
  }
  return bounded("coupling_fidelity", worst, 1e-10, "50 random states, dims 2..8");
}

CheckResult pvm_axioms(std::uint64_t seed) {
  RandomStream rng(seed);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + trial % 12;
    const Observable a = Observable::from_matrix(random_hermitian(n, rng));
    const ProjectionValuedMeasure pvm = spectral_decomposition(a);
    ComplexMatrix total(n, n);
    ComplexMatrix rebuilt(n, n);
    for (std::size_t k = 0; k < pvm.size(); ++k) {
      const ComplexMatrix& e = pvm.projectors()[k];
      worst = std::max(worst, max_abs_diff(e * e, e));
      for (std::size_t j = 0; j < k; ++j) worst = std::max(worst, (pvm.projectors()[j] * e).max_abs());
      total += e;
      rebuilt += cplx(pvm.outcomes()[k]) * e;
    }
    worst = std::max(worst, max_abs_diff(total, ComplexMatrix::identity(n)));
    worst = std::max(worst, relative_frobenius_error(rebuilt, a.matrix()));
  }
  return bounded("pvm_axioms", worst, 1e-9, "orthogonality, completeness, reconstruction");
}

CheckResult joint_diagonalization(std::uint64_t seed) {
  RandomStream rng(seed);
  double worst = 0.0;
  bool distinct = true;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + trial % 9;
    const ComplexMatrix a = random_hermitian(n, rng);
    const ComplexMatrix a2 = a * a;
    const std::vector<Observable> family{Observable::from_matrix(a), Observable::from_matrix(a2),
                                         Observable::from_matrix(a2 * a + a)};
    const JointEigenbasis joint = joint_eigenbasis(family);
    for (const auto& member : family) {
      const ComplexMatrix d = joint.basis.adjoint() * member.matrix() * joint.basis;
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          if (i != j) worst = std::max(worst, std::abs(d(i, j)));
        }
      }
    }
    const std::set<std::vector<double>> unique(joint.value_tuples.begin(), joint.value_tuples.end());
    distinct = distinct && unique.size() == joint.value_tuples.size();
  }
  CheckResult r = bounded("joint_diagonalization", worst, 1e-8, "polynomial families A, A^2, A^3+A");
  r.passed = r.passed && distinct;
  if (!distinct) r.detail += "; repeated value tuple";
  return r;
}

CheckResult cat_cross_terms(std::uint64_t seed) {
  const CatSetup cat = build_cat(0.6, cplx(0.0, 0.8), 0, 8);
  RandomStream rng(seed);
  double cross = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> values(cat.algebra.size());
    for (auto& v : values) v = rng.normal();
    const ComplexMatrix a = cat.algebra.element(values);
    cross = std::max(cross, std::abs(inner(cat.alive.amplitudes(), a * cat.dead.amplitudes())));
  }
  const Report report = run_cat(0.6, cplx(0.0, 0.8), 0, 8);
  const double weight_gap = std::max(std::abs(report.cat->weights[0] - 0.36),
                                     std::abs(report.cat->weights[1] - 0.64));
  CheckResult r = bounded("cat_cross_terms", cross, 1e-12, "chain 8, c = (0.6, 0.8i)");
  r.passed = r.passed && weight_gap <= 1e-10 && report.cat->expectation_gap <= 1e-10;
  return r;
}

CheckResult simplex_contrast() {
  const MixedStateDecompositions d = maximally_mixed_decompositions();
  const double distinct_states =
      max_abs_diff(projector_of(StateVector::basis(2, 0)).matrix(),
                   projector_of(StateVector::normalized({1.0, 1.0})).matrix());
  CheckResult r = bounded("simplex_contrast", d.max_difference, 1e-12,
                          "I/2 from {e1,e2} and from {(e1+-e2)/sqrt2}");
  r.passed = r.passed && distinct_states > 0.1;
  return r;
}

CheckResult unique_weight_recovery(std::uint64_t seed) {
  RandomStream rng(seed);
  bool all_exact = true;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> w(1 + trial % 9, 0.0);
    if (trial % 3 == 0) {
      w[static_cast<std::size_t>(trial) % w.size()] = 1.0;  // point mass
    } else {
      double total = 0.0;
      for (auto& x : w) total += (x = rng.uniform());
      for (auto& x : w) x /= total;
    }
    const SpectralProbabilityMeasure mu(w);
    const DecompositionRecord record = verify_unique_decomposition(mu);
    all_exact = all_exact && record.unique && record.recovered_weights == w;
  }
  return CheckResult{"unique_weight_recovery", all_exact, 0.0, 0.0, "100 random measures, exact"};
}

CheckResult dynamics_group_law(std::uint64_t seed) {
  RandomStream rng(seed);
  double worst = 0.0;
  double norm_drift = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + trial % 8;
    const Observable h = Observable::from_matrix(random_hermitian(n, rng));
    const double s = 4.0 * rng.uniform() - 2.0;
    const double t = 4.0 * rng.uniform() - 2.0;
    const StateVector psi = random_state(n, rng);
    const StateVector two_step = evolve(evolve(psi, h, t), h, s);
    const StateVector one_step = evolve(psi, h, s + t);
    worst = std::max(worst, max_abs_diff(two_step.amplitudes(), one_step.amplitudes()));
    norm_drift = std::max(norm_drift, std::abs(two_step.amplitudes().norm() - 1.0));
  }
  CheckResult r = bounded("dynamics_group_law", worst, 1e-9, "50 random (H, s, t)");
  r.passed = r.passed && norm_drift <= 1e-10;
  return r;
}

CheckResult chain_reduction(std::uint64_t seed) {
  RandomStream rng(seed);
  double worst = 0.0;
  constexpr std::size_t n = 4;
  for (int trial = 0; trial < 50; ++trial) {
    const ComplexMatrix basis = random_unitary(n, rng);
    const MeasurementModel model = build_coupling(basis, build_apparatus(n, n, labels(n)));
    const ApparatusModel second = build_apparatus(n, n, labels(n));
    const StateVector psi = random_state(n, rng);
    const std::vector<double> chained = chain_pointer_distribution(psi, model, second);
    for (std::size_t j = 0; j < n; ++j) {
      const double born = std::norm(inner(basis.column(j), psi.amplitudes()));
      worst = std::max(worst, std::abs(chained[j] - born));
    }
  }
  return bounded("chain_reduction", worst, 1e-10, "S -> M -> M1, 50 random states, dim 4");
}

CheckResult collapse_map_laws(std::uint64_t seed) {
  RandomStream rng(seed);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + trial % 10;
    const DensityMatrix rho = random_density(n, rng);
    const ComplexMatrix basis = random_unitary(n, rng);
    const DensityMatrix once = collapse(rho, basis);
    const DensityMatrix twice = collapse(once, basis);
    worst = std::max(worst, std::abs(once.matrix().trace().real() - 1.0));
    worst = std::max(worst, max_abs_diff(twice.matrix(), once.matrix()));
  }
  return bounded("collapse_map_laws", worst, 1e-10, "trace, positivity, idempotence");
}

CheckResult born_statistics(std::uint64_t seed) {
  const std::vector<double> p{0.36, 0.64};
  constexpr std::uint64_t trials = 100000;
  const EmpiricalCounts first = sample_counts(p, trials, seed);
  const EmpiricalCounts again = sample_counts(p, trials, seed);
  double worst_sigma = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double sigma = std::sqrt(p[k] * (1.0 - p[k]) / static_cast<double>(trials));
    worst_sigma = std::max(worst_sigma, std::abs(first.frequencies[k] - p[k]) / sigma);
  }
  CheckResult r = bounded("born_statistics", worst_sigma, 4.0, "c = (0.6, 0.8), 1e5 trials, in sigma");
  r.passed = r.passed && first.counts == again.counts;
  return r;
}

}  // namespace

MixedStateDecompositions maximally_mixed_decompositions() {
  const std::vector<double> half{0.5, 0.5};
  const std::vector<DensityMatrix> standard{projector_of(StateVector::basis(2, 0)),
                                            projector_of(StateVector::basis(2, 1))};
  const std::vector<DensityMatrix> diagonal{projector_of(StateVector::normalized({1.0, 1.0})),
                                            projector_of(StateVector::normalized({1.0, -1.0}))};
  MixedStateDecompositions out;
  out.from_standard_basis = mix(half, standard).matrix();
  out.from_diagonal_basis = mix(half, diagonal).matrix();
  out.max_difference = max_abs_diff(out.from_standard_basis, out.from_diagonal_basis);
  return out;
}

namespace {

struct NamedCheck {
  std::string_view name;
  CheckResult (*run)(std::uint64_t);
};

CheckResult simplex_contrast_seeded(std::uint64_t) { return simplex_contrast(); }

// Seeds are offset per check so that each one sees its own inputs.
constexpr NamedCheck kChecks[] = {
    {"collapse_restriction_equivalence", collapse_restriction},
    {"coupling_fidelity", coupling_fidelity},
    {"born_statistics", born_statistics},
    {"pvm_axioms", pvm_axioms},
    {"joint_diagonalization", joint_diagonalization},
    {"cat_cross_terms", cat_cross_terms},
    {"simplex_contrast", simplex_contrast_seeded},
    {"unique_weight_recovery", unique_weight_recovery},
    {"dynamics_group_law", dynamics_group_law},
    {"chain_reduction", chain_reduction},
    {"collapse_map_laws", collapse_map_laws},
};

}  // namespace

std::vector<std::string> verify_check_names() {
  std::vector<std::string> names;
  for (const auto& c : kChecks) names.emplace_back(c.name);
  return names;
}

CheckResult run_verify_check(std::string_view name, std::uint64_t seed) {
  for (std::size_t i = 0; i < std::size(kChecks); ++i) {
    if (kChecks[i].name == name) return kChecks[i].run(seed + i);
  }
  throw Error(ErrorKind::ValidationError, "unknown check '" + std::string(name) + "'");
}

std::vector<CheckResult> run_verify_suite(std::uint64_t seed) {
  std::vector<CheckResult> results;
  for (std::size_t i = 0; i < std::size(kChecks); ++i) results.push_back(kChecks[i].run(seed + i));
  return results;
}

}  // namespace qmeas
