#include "qmeas/scenario.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "qmeas/error.hpp"
#include "qmeas/random.hpp"

namespace qmeas {

namespace {

using json = nlohmann::json;

[[noreturn]] void parse_fail(const std::string& field, const std::string& what) {
  throw Error(ErrorKind::ParseError, "field '" + field + "': " + what);
}

void reject_unknown(const json& obj, const std::string& where,
                    std::initializer_list<std::string_view> allowed) {
  for (const auto& item : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
      parse_fail(where.empty() ? item.key() : where + "." + item.key(), "unknown field");
    }
  }
}

const json& require(const json& obj, const std::string& key, const std::string& where = {}) {
  const auto it = obj.find(key);
  if (it == obj.end()) parse_fail(where.empty() ? key : where + "." + key, "missing");
  return *it;
}

std::uint64_t read_unsigned(const json& j, const std::string& field) {
  if (!j.is_number_unsigned()) parse_fail(field, "expected a non-negative integer");
  return j.get<std::uint64_t>();
}

cplx read_complex(const json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    parse_fail(field, "expected [re, im]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

ComplexVector read_vector(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) parse_fail(field, "expected a non-empty array of [re, im]");
  std::vector<cplx> entries;
  for (std::size_t i = 0; i < j.size(); ++i) {
    entries.push_back(read_complex(j[i], field + "[" + std::to_string(i) + "]"));
  }
  return ComplexVector(std::move(entries));
}

ComplexMatrix read_matrix(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) parse_fail(field, "expected a row-major nested array");
  std::vector<std::vector<cplx>> rows;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string row_field = field + "[" + std::to_string(i) + "]";
    if (!j[i].is_array() || j[i].size() != j[0].size()) parse_fail(row_field, "ragged or non-array row");
    std::vector<cplx> row;
    for (std::size_t k = 0; k < j[i].size(); ++k) {
      row.push_back(read_complex(j[i][k], row_field + "[" + std::to_string(k) + "]"));
    }
    rows.push_back(std::move(row));
  }
  return ComplexMatrix::from_rows(rows);
}

std::vector<double> read_reals(const json& j, const std::string& field) {
  if (!j.is_array()) parse_fail(field, "expected an array of numbers");
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number()) parse_fail(field, "expected an array of numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

// Runs `fn`, re-labelling library errors as ValidationError for `field`.
template <typename Fn>
auto validated(const std::string& field, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ParseError) throw;
    if (e.kind() == ErrorKind::ValidationError) {
      throw Error(ErrorKind::ValidationError, field + ": " + e.message());
    }
    throw Error(ErrorKind::ValidationError,
                field + ": " + std::string(to_string(e.kind())) + " (" + e.message() + ")");
  }
}

void require_dim(std::size_t got, std::size_t want, const std::string& field) {
  if (got != want) {
    throw Error(ErrorKind::ValidationError, field + ": DimMismatch (" + std::to_string(got) +
                                                " vs " + std::to_string(want) + ")");
  }
}

DensityMatrix as_density(const std::variant<StateVector, DensityMatrix>& state) {
  if (const auto* psi = std::get_if<StateVector>(&state)) return projector_of(*psi);
  return std::get<DensityMatrix>(state);
}

double max_gap(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = 0.0;
  for (std::size_t k = 0; k < std::min(a.size(), b.size()); ++k) {
    worst = std::max(worst, std::abs(a[k] - b[k]));
  }
  return worst;
}

std::vector<double> diagonal_in_basis(const DensityMatrix& rho, const ComplexMatrix& basis) {
  std::vector<double> out;
  for (std::size_t j = 0; j < basis.cols(); ++j) {
    const ComplexVector v = basis.column(j);
    out.push_back(inner(v, rho.matrix() * v).real());
  }
  return out;
}

std::vector<Observable> pointer_generators(const MeasurementModel& model,
                                           std::span<const Observable> extra) {
  std::vector<Observable> generators{model.apparatus().pointer_observable()};
  generators.insert(generators.end(), extra.begin(), extra.end());
  return generators;
}

std::vector<double> outcome_weights(const SpectralProbabilityMeasure& measure,
                                    const AbelianAlgebra& algebra, const ApparatusModel& apparatus) {
  std::vector<double> out;
  for (std::size_t j = 0; j < apparatus.n_outcomes(); ++j) {
    const ComplexVector phi = apparatus.pointer_state(j);
    std::size_t best = 0;
    double best_overlap = -1.0;
    for (std::size_t k = 0; k < algebra.size(); ++k) {
      const double overlap = inner(phi, algebra.projectors()[k] * phi).real();
      if (overlap > best_overlap) {
        best_overlap = overlap;
        best = k;
      }
    }
    out.push_back(measure[best]);
  }
  return out;
}

}  // namespace

Scenario parse_scenario(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
  if (!doc.is_object()) parse_fail("<root>", "expected a JSON object");
  reject_unknown(doc, "", {"system_dim", "initial_state", "observable", "apparatus",
                           "algebra_generators", "trials", "seed"});

  const std::size_t system_dim = read_unsigned(require(doc, "system_dim"), "system_dim");
  if (system_dim == 0) throw Error(ErrorKind::ValidationError, "system_dim: must be positive");

  // initial_state
  const json& state_doc = require(doc, "initial_state");
  if (!state_doc.is_object()) parse_fail("initial_state", "expected an object");
  reject_unknown(state_doc, "initial_state", {"kind", "data", "normalize"});
  const json& kind_doc = require(state_doc, "kind", "initial_state");
  if (!kind_doc.is_string()) parse_fail("initial_state.kind", "expected \"vector\" or \"density\"");
  const std::string kind = kind_doc.get<std::string>();
  bool normalize = false;
  if (state_doc.contains("normalize")) {
    if (!state_doc["normalize"].is_boolean()) parse_fail("initial_state.normalize", "expected a boolean");
    normalize = state_doc["normalize"].get<bool>();
  }
  const json& data = require(state_doc, "data", "initial_state");
  std::variant<StateVector, DensityMatrix> initial_state = [&]() -> std::variant<StateVector, DensityMatrix> {
    if (kind == "vector") {
      ComplexVector v = read_vector(data, "initial_state.data");
      require_dim(v.dim(), system_dim, "initial_state");
      return validated("initial_state", [&] {
        return normalize ? StateVector::normalized(std::move(v))
                         : StateVector::from_amplitudes(std::move(v));
      });
    }
    if (kind == "density") {
      ComplexMatrix m = read_matrix(data, "initial_state.data");
      require_dim(m.rows(), system_dim, "initial_state");
      return validated("initial_state", [&] {
        if (normalize) {
          const cplx tr = m.trace();
          if (std::abs(tr) == 0.0) throw Error(ErrorKind::TraceNotOne, "zero trace");
          m *= 1.0 / tr.real();
        }
        return DensityMatrix::validate(std::move(m));
      });
    }
    parse_fail("initial_state.kind", "expected \"vector\" or \"density\"");
  }();

  // observable
  ComplexMatrix obs_matrix = read_matrix(require(doc, "observable"), "observable");
  require_dim(obs_matrix.rows(), system_dim, "observable");
  Observable observable =
      validated("observable", [&] { return Observable::from_matrix(std::move(obs_matrix)); });

  // apparatus
  const json& app_doc = require(doc, "apparatus");
  if (!app_doc.is_object()) parse_fail("apparatus", "expected an object");
  reject_unknown(app_doc, "apparatus", {"dim", "pointer_values"});
  const std::size_t apparatus_dim = read_unsigned(require(app_doc, "dim", "apparatus"), "apparatus.dim");
  std::optional<std::vector<double>> pointer_values;
  if (app_doc.contains("pointer_values")) {
    pointer_values = read_reals(app_doc["pointer_values"], "apparatus.pointer_values");
  }

  std::vector<Observable> generators;
  if (doc.contains("algebra_generators")) {
    const json& gens = doc["algebra_generators"];
    if (!gens.is_array()) parse_fail("algebra_generators", "expected an array of matrices");
    for (std::size_t i = 0; i < gens.size(); ++i) {
      const std::string field = "algebra_generators[" + std::to_string(i) + "]";
      ComplexMatrix m = read_matrix(gens[i], field);
      require_dim(m.rows(), apparatus_dim, field);
      generators.push_back(validated(field, [&] { return Observable::from_matrix(std::move(m)); }));
    }
  }

  const std::uint64_t trials = read_unsigned(require(doc, "trials"), "trials");
  const std::uint64_t seed = read_unsigned(require(doc, "seed"), "seed");

  // Cross-field invariants: the apparatus, the measurement model and the pointer algebra must
  // be buildable.
  validated("apparatus", [&] {
    std::vector<double> values(system_dim);
    for (std::size_t j = 0; j < system_dim; ++j) values[j] = static_cast<double>(j);
    return build_apparatus(system_dim, apparatus_dim, pointer_values.value_or(values));
  });
  const MeasurementModel model = validated("observable", [&] {
    return build_measurement(observable, apparatus_dim, pointer_values);
  });
  validated("algebra_generators", [&] {
    const auto all = pointer_generators(model, generators);
    return generate_algebra(all);
  });

  return Scenario{system_dim,    std::move(initial_state), std::move(observable),
                  apparatus_dim, std::move(pointer_values), std::move(generators),
                  trials,        seed};
}

std::vector<double> restricted_outcome_weights(const DensityMatrix& apparatus_state,
                                               const MeasurementModel& model,
                                               std::span<const Observable> extra_generators) {
  const AbelianAlgebra algebra = generate_algebra(pointer_generators(model, extra_generators));
  const SpectralProbabilityMeasure measure = restrict_state(apparatus_state, algebra);
  return outcome_weights(measure, algebra, model.apparatus());
}

EmpiricalCounts sample_counts(std::span<const double> probabilities, std::uint64_t trials,
                              std::uint64_t seed) {
  const RandomStream master(seed);
  const std::uint64_t workers =
      std::clamp<std::uint64_t>(std::thread::hardware_concurrency(), 1, 8);
  const std::uint64_t chunk = (trials + workers - 1) / workers;
  std::vector<std::vector<std::uint64_t>> partial(workers,
                                                  std::vector<std::uint64_t>(probabilities.size()));
  {
    std::vector<std::jthread> pool;
    for (std::uint64_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        const std::uint64_t begin = w * chunk;
        const std::uint64_t end = std::min(trials, begin + chunk);
        for (std::uint64_t t = begin; t < end; ++t) {
          RandomStream stream = master.substream(t);
          ++partial[w][sample_index(probabilities, stream)];
        }
      });
    }
  }
  EmpiricalCounts out;
  out.trials = trials;
  out.counts.assign(probabilities.size(), 0);
  for (const auto& counts : partial) {
    for (std::size_t k = 0; k < counts.size(); ++k) out.counts[k] += counts[k];
  }
  for (auto c : out.counts) {
    out.frequencies.push_back(trials == 0 ? 0.0 : static_cast<double>(c) / static_cast<double>(trials));
  }
  return out;
}

Report run_scenario(const Scenario& scenario) {
  const MeasurementModel model =
      build_measurement(scenario.observable, scenario.apparatus_dim, scenario.pointer_values);
  const DensityMatrix rho = as_density(scenario.initial_state);

  Report report;
  report.born = born_distribution(rho, model.measured_pvm());
  report.collapsed_diag = diagonal_in_basis(collapse(rho, model.measured_basis()), model.measured_basis());

  const DensityMatrix apparatus_state =
      std::holds_alternative<StateVector>(scenario.initial_state)
          ? apparatus_reduced_state(premeasure(std::get<StateVector>(scenario.initial_state), model),
                                    model.dims())
          : apparatus_reduced_state(premeasure(rho, model), model.dims());
  const std::vector<Observable> generators = pointer_generators(model, scenario.algebra_generators);
  const AbelianAlgebra algebra = generate_algebra(generators);
  const std::vector<double> restricted =
      outcome_weights(restrict_state(apparatus_state, algebra), algebra, model.apparatus());
  report.restricted = SpectralProbabilityMeasure(restricted);

  if (scenario.trials > 0) {
    report.empirical = sample_counts(report.born.probabilities, scenario.trials, scenario.seed);
  }

  report.max_deviation = std::max({max_gap(report.born.probabilities, report.collapsed_diag),
                                   max_gap(report.born.probabilities, restricted),
                                   max_gap(report.collapsed_diag, restricted)});

  const ApparatusModel& apparatus = model.apparatus();
  for (const auto& g : generators) {
    double worst = 0.0;
    for (std::size_t i = 0; i < apparatus.n_outcomes(); ++i) {
      for (std::size_t j = 0; j < apparatus.n_outcomes(); ++j) {
        if (i == j) continue;
        worst = std::max(worst, std::abs(inner(apparatus.pointer_state(i),
                                               g.matrix() * apparatus.pointer_state(j))));
      }
    }
    report.cross_terms.push_back(worst);
  }
  return report;
}

CatSetup build_cat(cplx c1, cplx c2, std::size_t macro_dim, std::size_t chain_length) {
  const double norm2 = std::norm(c1) + std::norm(c2);
  if (!std::isfinite(norm2) || std::abs(norm2 - 1.0) > 1e-10) {
    throw Error(ErrorKind::BadAmplitudes, "|c1|^2 + |c2|^2 = " + std::to_string(norm2));
  }
  if (chain_length > kMaxChainLength) {
    throw Error(ErrorKind::ValidationError,
                "chain_length " + std::to_string(chain_length) + " exceeds " +
                    std::to_string(kMaxChainLength));
  }
  const std::size_t dim = chain_length > 0 ? (std::size_t{1} << chain_length) : macro_dim;
  if (dim < 2) throw Error(ErrorKind::ValidationError, "cat needs a space of dim >= 2");

  std::vector<double> pointer_diag(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    pointer_diag[i] = chain_length > 0
                          ? static_cast<double>(chain_length) - 2.0 * std::popcount(i)
                          : static_cast<double>(dim - 1 - i);
  }
  Observable pointer = Observable::from_matrix(ComplexMatrix::diagonal(pointer_diag));
  StateVector alive = StateVector::basis(dim, 0);
  StateVector dead = StateVector::basis(dim, dim - 1);
  StateVector state =
      StateVector::from_amplitudes(alive.amplitudes().scaled(c1) + dead.amplitudes().scaled(c2));
  const std::vector<Observable> generators{pointer};
  AbelianAlgebra algebra = generate_algebra(generators);

  auto point_of = [&](const StateVector& v) {
    std::size_t best = 0;
    double best_overlap = -1.0;
    for (std::size_t k = 0; k < algebra.size(); ++k) {
      const double overlap = inner(v.amplitudes(), algebra.projectors()[k] * v.amplitudes()).real();
      if (overlap > best_overlap) {
        best_overlap = overlap;
        best = k;
      }
    }
    return best;
  };
  const std::size_t alive_point = point_of(alive);
  const std::size_t dead_point = point_of(dead);
  return CatSetup{std::move(alive), std::move(dead),     std::move(state),
                  std::move(pointer), std::move(algebra), alive_point, dead_point};
}

Report run_cat(cplx c1, cplx c2, std::size_t macro_dim, std::size_t chain_length) {
  const CatSetup cat = build_cat(c1, c2, macro_dim, chain_length);
  const std::size_t dim = cat.state.dim();

  Report report;
  report.born = born_distribution(cat.state, spectral_decomposition(cat.pointer));
  report.restricted = restrict_state(cat.state, cat.algebra);

  // The pointer is diagonal, so the collapse basis is the standard basis.
  const DensityMatrix collapsed = collapse(projector_of(cat.state), ComplexMatrix::identity(dim));
  for (const auto& pi : cat.algebra.projectors()) {
    report.collapsed_diag.push_back(trace_of_product(collapsed.matrix(), pi).real());
  }

  const std::vector<double> restricted(report.restricted.weights().begin(),
                                       report.restricted.weights().end());
  report.max_deviation = std::max({max_gap(report.born.probabilities, report.collapsed_diag),
                                   max_gap(report.born.probabilities, restricted),
                                   max_gap(report.collapsed_diag, restricted)});

  CatSummary summary;
  summary.labels = {"alive", "dead"};
  summary.weights = {report.restricted[cat.alive_point], report.restricted[cat.dead_point]};
  const double w1 = std::norm(c1);
  const double w2 = std::norm(c2);
  for (const auto& g : cat.algebra.generators()) {
    const auto& a = g.matrix();
    report.cross_terms.push_back(std::abs(inner(cat.alive.amplitudes(), a * cat.dead.amplitudes())));
    const double whole = inner(cat.state.amplitudes(), a * cat.state.amplitudes()).real();
    const double parts = w1 * inner(cat.alive.amplitudes(), a * cat.alive.amplitudes()).real() +
                         w2 * inner(cat.dead.amplitudes(), a * cat.dead.amplitudes()).real();
    summary.expectation_gap = std::max(summary.expectation_gap, std::abs(whole - parts));
  }
  report.cat = std::move(summary);
  return report;
}

ComparisonSummary compare_collapse_vs_restriction(std::size_t system_dim, std::size_t apparatus_dim,
                                                  std::size_t n_random, std::uint64_t seed) {
  if (n_random == 0) throw Error(ErrorKind::ValidationError, "n_random must be >= 1");
  std::vector<double> labels(system_dim);
  for (std::size_t j = 0; j < system_dim; ++j) labels[j] = static_cast<double>(j);

  const RandomStream master(seed);
  ComparisonSummary summary;
  summary.dim = system_dim;
  summary.n_random = n_random;
  double total = 0.0;
  for (std::size_t i = 0; i < n_random; ++i) {
    RandomStream stream = master.substream(i);
    const StateVector psi = random_state(system_dim, stream);
    const ComplexMatrix basis = random_unitary(system_dim, stream);
    const MeasurementModel model =
        build_coupling(basis, build_apparatus(system_dim, apparatus_dim, labels));

    const std::vector<double> collapsed =
        diagonal_in_basis(collapse(projector_of(psi), basis), basis);
    const std::vector<double> restricted = restricted_outcome_weights(
        apparatus_reduced_state(premeasure(psi, model), model.dims()), model);
    const double deviation = max_gap(collapsed, restricted);
    total += deviation;
    if (i == 0 || deviation > summary.worst) {
      summary.worst = deviation;
      summary.worst_index = i;
      summary.worst_seed = stream.seed();
    }
  }
  summary.mean = total / static_cast<double>(n_random);
  return summary;
}

ComparisonSummary compare_collapse_vs_restriction(const Scenario& scenario, std::size_t n_random,
                                                  std::uint64_t seed) {
  return compare_collapse_vs_restriction(scenario.system_dim, scenario.apparatus_dim, n_random, seed);
}

std::string emit_summary(const ComparisonSummary& summary, ReportFormat format) {
  if (format == ReportFormat::Json) {
    nlohmann::ordered_json j;
    j["dim"] = summary.dim;
    j["n_random"] = summary.n_random;
    j["worst"] = round_to_12_digits(summary.worst);
    j["mean"] = round_to_12_digits(summary.mean);
    j["worst_index"] = summary.worst_index;
    j["worst_seed"] = summary.worst_seed;
    return j.dump(2) + "\n";
  }
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "dim: %zu\nn_random: %zu\nworst: %.12g\nmean: %.12g\nworst_index: %zu\nworst_seed: %llu\n",
                summary.dim, summary.n_random, summary.worst, summary.mean, summary.worst_index,
                static_cast<unsigned long long>(summary.worst_seed));
  return buf;
}

}  // namespace qmeas
