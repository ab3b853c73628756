#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qmeas/abelian_algebra.hpp"
#include "qmeas/observable.hpp"

namespace qmeas {

struct EmpiricalCounts {
  std::uint64_t trials = 0;
  std::vector<std::uint64_t> counts;
  std::vector<double> frequencies;
};

// Extra fields emitted only by the cat scenario.
struct CatSummary {
  std::vector<std::string> labels;  // {"alive", "dead"}
  std::vector<double> weights;      // restricted weight at each macroscopic state
  double expectation_gap = 0.0;
};

struct Report {
  OutcomeDistribution born;
  std::vector<double> collapsed_diag;
  SpectralProbabilityMeasure restricted{{1.0}};
  std::optional<EmpiricalCounts> empirical;
  double max_deviation = 0.0;
  std::vector<double> cross_terms;
  std::optional<CatSummary> cat;
};

enum class ReportFormat { Table, Json };

/// "table" | "json"; anything else throws UnknownFormat.
ReportFormat parse_format(std::string_view name);

/// 12 significant digits, fixed key/column order, outcomes ascending.
std::string emit_report(const Report& report, ReportFormat format);
std::string emit_report(const Report& report, std::string_view format);

/// Reads the JSON form back. Numbers come back exactly as printed.
Report parse_report(std::string_view json_text);

/// Rounds to the value that prints as %.12g.
double round_to_12_digits(double x);

}  // namespace qmeas
