#include "qmeas/report.hpp"

#include <cstdio>
#include <cstdlib>
#include <sstream>

#include <json.hpp>

#include "qmeas/error.hpp"

namespace qmeas {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string fmt12(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

ordered_json number_array(const std::vector<double>& values) {
  ordered_json out = ordered_json::array();
  for (double v : values) out.push_back(round_to_12_digits(v));
  return out;
}

std::vector<double> read_numbers(const ordered_json& j) {
  std::vector<double> out;
  for (const auto& v : j) out.push_back(v.get<double>());
  return out;
}

}  // namespace

double round_to_12_digits(double x) { return std::strtod(fmt12(x).c_str(), nullptr); }

ReportFormat parse_format(std::string_view name) {
  if (name == "table") return ReportFormat::Table;
  if (name == "json") return ReportFormat::Json;
  throw Error(ErrorKind::UnknownFormat, std::string(name));
}

std::string emit_report(const Report& report, std::string_view format) {
  return emit_report(report, parse_format(format));
}

std::string emit_report(const Report& report, ReportFormat format) {
  const std::vector<double> restricted(report.restricted.weights().begin(),
                                       report.restricted.weights().end());
  if (format == ReportFormat::Json) {
    ordered_json j;
    j["born"] = {{"outcomes", number_array(report.born.outcomes)},
                 {"probabilities", number_array(report.born.probabilities)}};
    j["collapsed_diag"] = number_array(report.collapsed_diag);
    j["restricted"] = {{"weights", number_array(restricted)}};
    if (report.empirical) {
      j["empirical"] = {{"trials", report.empirical->trials},
                        {"counts", report.empirical->counts},
                        {"frequencies", number_array(report.empirical->frequencies)}};
    }
    j["max_deviation"] = round_to_12_digits(report.max_deviation);
    j["cross_terms"] = number_array(report.cross_terms);
    if (report.cat) {
      j["cat"] = {{"labels", report.cat->labels},
                  {"weights", number_array(report.cat->weights)},
                  {"expectation_gap", round_to_12_digits(report.cat->expectation_gap)}};
    }
    return j.dump(2) + "\n";
  }

  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof line, "%-20s %-20s %-20s %-20s", "outcome", "born", "collapsed",
                "restricted");
  out << line;
  if (report.empirical) {
    std::snprintf(line, sizeof line, " %-12s %-20s", "count", "frequency");
    out << line;
  }
  out << "\n";
  for (std::size_t k = 0; k < report.born.outcomes.size(); ++k) {
    auto cell = [&](const std::vector<double>& v) { return k < v.size() ? fmt12(v[k]) : "-"; };
    std::snprintf(line, sizeof line, "%-20s %-20s %-20s %-20s", fmt12(report.born.outcomes[k]).c_str(),
                  cell(report.born.probabilities).c_str(), cell(report.collapsed_diag).c_str(),
                  cell(restricted).c_str());
    out << line;
    if (report.empirical) {
      std::snprintf(line, sizeof line, " %-12llu %-20s",
                    static_cast<unsigned long long>(report.empirical->counts[k]),
                    cell(report.empirical->frequencies).c_str());
      out << line;
    }
    out << "\n";
  }
  if (report.empirical) out << "trials: " << report.empirical->trials << "\n";
  out << "max_deviation: " << fmt12(report.max_deviation) << "\n";
  out << "cross_terms:";
  for (double c : report.cross_terms) out << " " << fmt12(c);
  out << "\n";
  if (report.cat) {
    for (std::size_t i = 0; i < report.cat->labels.size(); ++i) {
      out << report.cat->labels[i] << ": " << fmt12(report.cat->weights[i]) << "\n";
    }
    out << "expectation_gap: " << fmt12(report.cat->expectation_gap) << "\n";
  }
  return out.str();
}

Report parse_report(std::string_view json_text) {
  ordered_json j;
  try {
    j = ordered_json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
  try {
    Report r;
    r.born.outcomes = read_numbers(j.at("born").at("outcomes"));
    r.born.probabilities = read_numbers(j.at("born").at("probabilities"));
    r.collapsed_diag = read_numbers(j.at("collapsed_diag"));
    r.restricted = SpectralProbabilityMeasure(read_numbers(j.at("restricted").at("weights")));
    if (j.contains("empirical")) {
      const auto& e = j.at("empirical");
      r.empirical = EmpiricalCounts{e.at("trials").get<std::uint64_t>(),
                                    e.at("counts").get<std::vector<std::uint64_t>>(),
                                    read_numbers(e.at("frequencies"))};
    }
    r.max_deviation = j.at("max_deviation").get<double>();
    r.cross_terms = read_numbers(j.at("cross_terms"));
    if (j.contains("cat")) {
      const auto& c = j.at("cat");
      r.cat = CatSummary{c.at("labels").get<std::vector<std::string>>(), read_numbers(c.at("weights")),
                         c.at("expectation_gap").get<double>()};
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
}

}  // namespace qmeas
