// Acceptance run: one PASS/FAIL line per criterion. Exits 1 if any criterion
// fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "qmeas/abelian_algebra.hpp"
#include "qmeas/numerics.hpp"
#include "qmeas/observable.hpp"
#include "qmeas/premeasurement.hpp"
#include "qmeas/random.hpp"
#include "qmeas/report.hpp"
#include "qmeas/scenario.hpp"
#include "qmeas/verify.hpp"

using namespace qmeas;

namespace {

constexpr double kTolEquivalence = 1e-9;
constexpr double kTolCoupling = 1e-10;
constexpr double kSigmaBand = 4.0;
constexpr double kTolPvm = 1e-9;
constexpr double kTolJoint = 1e-8;
constexpr double kTolCrossTerm = 1e-12;
constexpr double kTolCatWeights = 1e-10;
constexpr double kTolSimplex = 1e-12;
constexpr double kTolGroupLaw = 1e-9;
constexpr double kTolNorm = 1e-10;
constexpr double kTolChain = 1e-10;

struct Outcome {
  bool passed = true;
  double worst = 0.0;
  double tolerance = 0.0;
  std::string note;

  void observe(double deviation) {
    worst = std::max(worst, deviation);
    if (!(deviation <= tolerance)) passed = false;
  }
};

std::vector<double> iota_values(std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<double>(i);
  return v;
}

Observable hermitian_with_spectrum(const std::vector<double>& spectrum, RandomStream& rng) {
  const ComplexMatrix u = random_unitary(spectrum.size(), rng);
  const ComplexMatrix m = u * ComplexMatrix::diagonal(spectrum) * u.adjoint();
  return Observable::from_matrix(0.5 * (m + m.adjoint()));
}

double off_diagonal(const ComplexMatrix& basis, const ComplexMatrix& m) {
  const ComplexMatrix d = basis.adjoint() * m * basis;
  double worst = 0.0;
  for (std::size_t i = 0; i < d.rows(); ++i) {
    for (std::size_t j = 0; j < d.cols(); ++j) {
      if (i != j) worst = std::max(worst, std::abs(d(i, j)));
    }
  }
  return worst;
}

// 200 pairs per dim; the collapse diagonal is (psi_n|psi)(psi|psi_n) computed
// directly, the restricted weights go through U, the partial trace and the
// minimal pointer algebra.
Outcome collapse_restriction_equivalence() {
  Outcome out{.tolerance = kTolEquivalence};
  RandomStream master(1001);
  for (std::size_t dim = 2; dim <= 10; ++dim) {
    for (std::size_t trial = 0; trial < 200; ++trial) {
      RandomStream rng = master.substream(dim * 1000 + trial);
      const ComplexMatrix basis = random_unitary(dim, rng);
      const StateVector psi = random_state(dim, rng);
      const MeasurementModel model = build_coupling(basis, build_apparatus(dim, dim, iota_values(dim)));
      const DensityMatrix reduced = apparatus_reduced_state(premeasure(psi, model), model.dims());
      const std::vector<Observable> gens{model.apparatus().pointer_observable()};
      const AbelianAlgebra algebra = generate_algebra(gens);
      const SpectralProbabilityMeasure mu = restrict_state(reduced, algebra);
      if (mu.size() != dim) {
        out.passed = false;
        continue;
      }
      for (std::size_t n = 0; n < dim; ++n) {
        const double collapsed = std::norm(inner(basis.column(n), psi.amplitudes()));
        out.observe(std::abs(collapsed - mu[n]));
      }
    }
  }
  out.note = "1800 pairs, dims 2..10";
  return out;
}

Outcome coupling_fidelity() {
  Outcome out{.tolerance = kTolCoupling};
  RandomStream rng(1002);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(trial) % 7;
    const std::size_t d = n + static_cast<std::size_t>(trial) % 2;
    const MeasurementModel model = build_coupling(random_unitary(n, rng), build_apparatus(n, d, iota_values(n)));
    const StateVector psi = random_state(n, rng);
    const ComplexVector composite = premeasure(psi, model).amplitudes();
    for (std::size_t j = 0; j < n; ++j) {
      const ComplexVector psi_j = model.measured_basis().column(j);
      const cplx c = inner(psi_j, psi.amplitudes());
      for (std::size_t k = 0; k < d; ++k) {
        const cplx slot = inner(kronecker(psi_j, model.apparatus().pointer_state(k)), composite);
        out.observe(std::abs(slot - (k == j ? c : cplx(0.0))));
      }
    }
    const ComplexMatrix& u = model.coupling();
    out.observe(max_abs_diff(u.adjoint() * u, ComplexMatrix::identity(n * d)));
  }
  out.note = "100 states, dims 2..8";
  return out;
}

Outcome born_statistics() {
  Outcome out{.tolerance = kSigmaBand};
  const std::string doc = R"({
    "system_dim": 2,
    "initial_state": {"kind": "vector", "data": [[0.6, 0], [0.8, 0]]},
    "observable": [[[0, 0], [0, 0]], [[0, 0], [1, 0]]],
    "apparatus": {"dim": 2},
    "trials": 100000,
    "seed": 424242
  })";
  const Report first = run_scenario(parse_scenario(doc));
  const Report second = run_scenario(parse_scenario(doc));
  const std::vector<double> p{0.36, 0.64};
  for (std::size_t j = 0; j < 2; ++j) {
    const double sigma = std::sqrt(p[j] * (1.0 - p[j]) / 1e5);
    out.observe(std::abs(first.empirical->frequencies[j] - p[j]) / sigma);
  }
  const bool identical = emit_report(first, ReportFormat::Json) == emit_report(second, ReportFormat::Json);
  if (!identical) out.passed = false;
  out.note = std::string("worst in sigma units; rerun ") + (identical ? "byte-identical" : "DIFFERS");
  return out;
}

Outcome spectral_measure_axioms() {
  Outcome out{.tolerance = kTolPvm};
  RandomStream rng(1004);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(trial) % 12;
    const Observable a = Observable::from_matrix(random_hermitian(n, rng));
    const ProjectionValuedMeasure pvm = spectral_decomposition(a);
    ComplexMatrix total(n, n);
    ComplexMatrix rebuilt(n, n);
    for (std::size_t k = 0; k < pvm.size(); ++k) {
      const ComplexMatrix& e = pvm.projectors()[k];
      out.observe(max_abs_diff(e * e, e));
      for (std::size_t j = 0; j < k; ++j) out.observe((pvm.projectors()[j] * e).max_abs());
      total += e;
      rebuilt += cplx(pvm.outcomes()[k]) * e;
    }
    out.observe(max_abs_diff(total, ComplexMatrix::identity(n)));
    out.observe(relative_frobenius_error(rebuilt, a.matrix()));
  }
  out.note = "100 matrices, dims 1..12";
  return out;
}

Outcome joint_diagonalization() {
  Outcome out{.tolerance = kTolJoint};
  RandomStream rng(1005);
  bool distinct = true;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(trial) % 11;
    // Every other family starts from a degenerate base.
    std::vector<double> spectrum(n);
    for (auto& x : spectrum) x = trial % 2 == 0 ? rng.normal() : std::floor(3.0 * rng.uniform());
    const Observable h = hermitian_with_spectrum(spectrum, rng);
    const ComplexMatrix h2 = h.matrix() * h.matrix();
    const ComplexMatrix h3 = h2 * h.matrix();
    std::vector<Observable> family{h};
    for (int member = 0; member < 3; ++member) {
      const ComplexMatrix p = cplx(rng.normal()) * ComplexMatrix::identity(n) + cplx(rng.normal()) * h.matrix() +
                              cplx(rng.normal()) * h2 + cplx(0.2 * rng.normal()) * h3;
      family.push_back(Observable::from_matrix(0.5 * (p + p.adjoint())));
    }
    const JointEigenbasis joint = joint_eigenbasis(family);
    for (const auto& member : family) out.observe(off_diagonal(joint.basis, member.matrix()));

    const AbelianAlgebra algebra = generate_algebra(family);
    const std::set<std::vector<double>> tuples(algebra.characters().begin(), algebra.characters().end());
    if (tuples.size() != algebra.size()) distinct = false;
  }
  if (!distinct) out.passed = false;
  out.note = std::string("100 polynomial families; tuples ") + (distinct ? "distinct" : "REPEATED");
  return out;
}

Outcome cat_scenario() {
  Outcome out{.tolerance = kTolCrossTerm};
  const cplx c1 = 0.6;
  const cplx c2(0.0, 0.8);
  const CatSetup cat = build_cat(c1, c2, 2, 8);
  RandomStream rng(1006);
  double worst_split = 0.0;
  for (int e = 0; e < 50; ++e) {
    std::vector<double> values(cat.algebra.size());
    for (auto& v : values) v = rng.normal();
    const ComplexMatrix a = cat.algebra.element(values);
    out.observe(std::abs(inner(cat.alive.amplitudes(), a * cat.dead.amplitudes())));
    const double whole = inner(cat.state.amplitudes(), a * cat.state.amplitudes()).real();
    const double split = std::norm(c1) * inner(cat.alive.amplitudes(), a * cat.alive.amplitudes()).real() +
                         std::norm(c2) * inner(cat.dead.amplitudes(), a * cat.dead.amplitudes()).real();
    worst_split = std::max(worst_split, std::abs(whole - split));
  }
  const Report report = run_cat(c1, c2, 2, 8);
  const double weight_gap =
      std::max(std::abs(report.cat->weights[0] - 0.36), std::abs(report.cat->weights[1] - 0.64));
  worst_split = std::max(worst_split, report.cat->expectation_gap);
  if (!(weight_gap <= kTolCatWeights) || !(worst_split <= kTolCatWeights)) out.passed = false;
  char buf[160];
  std::snprintf(buf, sizeof buf, "weights gap %.2e, expectation gap %.2e (tol %.0e)", weight_gap, worst_split,
                kTolCatWeights);
  out.note = buf;
  return out;
}

Outcome simplex_contrast() {
  Outcome out{.tolerance = kTolSimplex};
  const CheckResult contrast = run_verify_check("simplex_contrast");
  const CheckResult recovery = run_verify_check("unique_weight_recovery");
  const bool suite_ok = contrast.passed && recovery.passed;
  out.observe(contrast.worst);
  const MixedStateDecompositions d = maximally_mixed_decompositions();
  out.observe(max_abs_diff(d.from_standard_basis, d.from_diagonal_basis));
  // Rebuild both decompositions by hand and check that their pure states differ.
  const double r = 1.0 / std::sqrt(2.0);
  const std::vector<ComplexVector> standard{{1.0, 0.0}, {0.0, 1.0}};
  const std::vector<ComplexVector> diagonal{{r, r}, {r, -r}};
  ComplexMatrix sum_standard(2, 2);
  ComplexMatrix sum_diagonal(2, 2);
  for (std::size_t k = 0; k < 2; ++k) {
    sum_standard += 0.5 * ComplexMatrix::outer(standard[k], standard[k]);
    sum_diagonal += 0.5 * ComplexMatrix::outer(diagonal[k], diagonal[k]);
  }
  const ComplexMatrix half = ComplexMatrix::diagonal({0.5, 0.5});
  out.observe(max_abs_diff(sum_standard, half));
  out.observe(max_abs_diff(sum_diagonal, half));
  out.observe(max_abs_diff(d.from_standard_basis, half));
  bool distinct = true;
  for (const auto& u : standard) {
    for (const auto& v : diagonal) distinct = distinct && std::norm(inner(u, v)) < 1.0 - 1e-6;
  }

  RandomStream rng(1007);
  bool exact = true;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> w(1 + static_cast<std::size_t>(trial) % 9);
    double total = 0.0;
    for (auto& x : w) total += (x = trial % 4 == 0 ? 0.0 : rng.uniform());
    if (total == 0.0) {
      w[0] = 1.0;
    } else {
      for (auto& x : w) x /= total;
    }
    const SpectralProbabilityMeasure m(w);
    const DecompositionRecord record = verify_unique_decomposition(m);
    exact = exact && record.unique && record.recovered_weights == w;
  }
  if (!suite_ok || !distinct || !exact) out.passed = false;
  out.note = std::string("weight recovery ") + (exact ? "exact" : "INEXACT") + " over 200 measures";
  return out;
}

Outcome dynamics_group_law() {
  Outcome out{.tolerance = kTolGroupLaw};
  RandomStream rng(1008);
  double worst_norm = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(trial) % 10;
    const Observable h = Observable::from_matrix(random_hermitian(n, rng));
    const double s = 4.0 * rng.uniform() - 2.0;
    const double t = 4.0 * rng.uniform() - 2.0;
    const StateVector psi = random_state(n, rng);
    const StateVector two_step = evolve(evolve(psi, h, t), h, s);
    const StateVector one_step = evolve(psi, h, s + t);
    out.observe(max_abs_diff(two_step.amplitudes(), one_step.amplitudes()));
    worst_norm = std::max({worst_norm, std::abs(two_step.amplitudes().norm() - 1.0),
                           std::abs(one_step.amplitudes().norm() - 1.0)});
  }
  if (!(worst_norm <= kTolNorm)) out.passed = false;
  char buf[96];
  std::snprintf(buf, sizeof buf, "norm drift %.2e (tol %.0e)", worst_norm, kTolNorm);
  out.note = buf;
  return out;
}

Outcome chain_reduction() {
  Outcome out{.tolerance = kTolChain};
  RandomStream rng(1009);
  constexpr std::size_t n = 4;
  for (int trial = 0; trial < 50; ++trial) {
    const MeasurementModel model = build_coupling(random_unitary(n, rng), build_apparatus(n, n, iota_values(n)));
    const ApparatusModel relay = build_apparatus(n, n, iota_values(n));
    const StateVector psi = random_state(n, rng);
    const std::vector<double> chained = chain_pointer_distribution(psi, model, relay);
    const std::vector<double> single =
        pointer_distribution(apparatus_reduced_state(premeasure(psi, model), model.dims()), model.apparatus());
    for (std::size_t j = 0; j < n; ++j) out.observe(std::abs(chained[j] - single[j]));
  }
  out.note = "50 states at dim 4";
  return out;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"collapse-restriction equivalence", collapse_restriction_equivalence},
      {"coupling-map fidelity", coupling_fidelity},
      {"Born-rule statistics", born_statistics},
      {"spectral-measure axioms", spectral_measure_axioms},
      {"commuting-family joint diagonalization", joint_diagonalization},
      {"cat scenario", cat_scenario},
      {"simplex contrast", simplex_contrast},
      {"dynamics group law", dynamics_group_law},
      {"chain reduction", chain_reduction},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.passed = false;
      o.note = std::string("threw: ") + e.what();
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] %zu %-40s worst=%.3e tol=%.1e %6.2fs  %s\n", o.passed ? "PASS" : "FAIL", i + 1,
                criteria[i].first.c_str(), o.worst, o.tolerance, seconds, o.note.c_str());
    if (!o.passed) ++failures;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
