#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "qmeas/numerics.hpp"

namespace qmeas {

struct CheckResult {
  std::string name;
  bool passed = false;
  double worst = 0.0;      // largest observed deviation
  double tolerance = 0.0;  // bound it was checked against
  std::string detail;
};

/// Two pure-state decompositions of the maximally mixed qubit state:
/// {e1, e2} and {(e1 +- e2)/sqrt 2}, each with weights (1/2, 1/2).
struct MixedStateDecompositions {
  ComplexMatrix from_standard_basis;
  ComplexMatrix from_diagonal_basis;
  double max_difference = 0.0;
};

MixedStateDecompositions maximally_mixed_decompositions();

/// The built-in invariant suite behind `qmeas verify`. Deterministic for a seed.
std::vector<CheckResult> run_verify_suite(std::uint64_t seed = 20240607);

std::vector<std::string> verify_check_names();

/// One check of the suite, with the same inputs it gets inside run_verify_suite.
/// Throws ValidationError for an unknown name.
CheckResult run_verify_check(std::string_view name, std::uint64_t seed = 20240607);

}  // namespace qmeas
