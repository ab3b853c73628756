// Scenario documents, experiment orchestration and the cat construction.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qmeas/abelian_algebra.hpp"
#include "qmeas/observable.hpp"
#include "qmeas/premeasurement.hpp"
#include "qmeas/quantum_state.hpp"
#include "qmeas/report.hpp"

namespace qmeas {

struct Scenario {
  std::size_t system_dim = 0;
  std::variant<StateVector, DensityMatrix> initial_state;
  Observable observable;
  std::size_t apparatus_dim = 0;
  std::optional<std::vector<double>> pointer_values;
  std::vector<Observable> algebra_generators;  // extra generators on M; Ã is always included
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
};

/// Parses the JSON scenario document. Malformed JSON, wrong types and unknown
/// fields raise ParseError; violated invariants raise ValidationError whose
/// message names the invariant (e.g. "observable: NotHermitian").
Scenario parse_scenario(std::string_view text);

/// Born statistics, collapse diagonal and restricted pointer weights for the
/// scenario, plus seeded empirical counts when trials > 0.
Report run_scenario(const Scenario& scenario);

/// Empirical outcome counts from `trials` independent draws. Trial t uses
/// substream t of the master seed, so the counts do not depend on how the
/// trials are split across threads.
EmpiricalCounts sample_counts(std::span<const double> probabilities, std::uint64_t trials,
                              std::uint64_t seed);

struct CatSetup {
  StateVector alive;  // Psi_1
  StateVector dead;   // Psi_2
  StateVector state;  // c1 Psi_1 + c2 Psi_2
  Observable pointer;
  AbelianAlgebra algebra;
  std::size_t alive_point = 0;
  std::size_t dead_point = 0;
};

inline constexpr std::size_t kMaxChainLength = 10;

/// chain_length > 0: spin chain of that many sites, Psi_1 all up, Psi_2 all
/// down, algebra generated by the total magnetization. chain_length == 0:
/// Psi_1 = e_0 and Psi_2 = e_{macro_dim - 1} in dim macro_dim with pointer
/// diag(macro_dim - 1, ..., 0). Throws BadAmplitudes unless |c1|^2 + |c2|^2 = 1.
CatSetup build_cat(cplx c1, cplx c2, std::size_t macro_dim, std::size_t chain_length);

Report run_cat(cplx c1, cplx c2, std::size_t macro_dim, std::size_t chain_length);

struct ComparisonSummary {
  std::size_t dim = 0;
  std::size_t n_random = 0;
  double worst = 0.0;
  double mean = 0.0;
  std::size_t worst_index = 0;
  std::uint64_t worst_seed = 0;  // substream seed that reproduces the worst case
};

/// Random (state, measured basis) pairs at the given dims; compares the
/// collapse diagonal against the restricted pointer weights.
ComparisonSummary compare_collapse_vs_restriction(std::size_t system_dim, std::size_t apparatus_dim,
                                                  std::size_t n_random, std::uint64_t seed);
ComparisonSummary compare_collapse_vs_restriction(const Scenario& scenario, std::size_t n_random,
                                                  std::uint64_t seed);

std::string emit_summary(const ComparisonSummary& summary, ReportFormat format);

/// Restricted weights of the apparatus state, one per registered outcome of
/// `model`, read through the algebra generated by the pointer observable and
/// any extra generators.
std::vector<double> restricted_outcome_weights(const DensityMatrix& apparatus_state,
                                               const MeasurementModel& model,
                                               std::span<const Observable> extra_generators = {});

}  // namespace qmeas
