// qmeas: command-line front end.
//
//   qmeas [--format table|json] [--tol X] run <scenario.json>
//   qmeas cat --c1 re,im --c2 re,im [--chain N | --macro-dim D]
//   qmeas compare <scenario.json> --random N --seed S
//   qmeas verify [--seed S] [--only NAME...]
//
// Exit codes: 0 success, 1 validation/parse error, 2 numerical invariant
// violation, 3 internal error.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qmeas/error.hpp"
#include "qmeas/scenario.hpp"
#include "qmeas/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitInvariant = 2;
constexpr int kExitInternal = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw qmeas::Error(qmeas::ErrorKind::ParseError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

qmeas::cplx parse_complex_arg(const std::string& text) {
  const auto comma = text.find(',');
  try {
    std::size_t used = 0;
    if (comma == std::string::npos) {
      const double re = std::stod(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      return {re, 0.0};
    }
    const std::string re_text = text.substr(0, comma);
    const std::string im_text = text.substr(comma + 1);
    const double re = std::stod(re_text, &used);
    if (used != re_text.size()) throw std::invalid_argument(text);
    const double im = std::stod(im_text, &used);
    if (used != im_text.size()) throw std::invalid_argument(text);
    return {re, im};
  } catch (const std::logic_error&) {
    throw qmeas::Error(qmeas::ErrorKind::ParseError, "expected re,im but got '" + text + "'");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-dimensional quantum measurement simulator"};
  app.require_subcommand(1);

  std::string format_name = "table";
  double tol = 1e-9;
  app.add_option("--format", format_name, "Output format")
      ->check(CLI::IsMember({"table", "json"}))
      ->capture_default_str();
  app.add_option("--tol", tol, "Deviation above which an invariant counts as violated")
      ->capture_default_str();
  app.fallthrough();

  auto* run = app.add_subcommand("run", "Run a scenario file");
  std::string run_path;
  run->add_option("scenario", run_path, "Scenario JSON")->required();

  auto* cat = app.add_subcommand("cat", "Schroedinger cat scenario");
  std::string c1_text = "1,0";
  std::string c2_text = "0,0";
  std::size_t chain = 8;
  std::size_t macro_dim = 2;
  cat->add_option("--c1", c1_text, "Amplitude of the alive state, re,im")->capture_default_str();
  cat->add_option("--c2", c2_text, "Amplitude of the dead state, re,im")->capture_default_str();
  cat->add_option("--chain", chain, "Spin-chain length (0 uses --macro-dim)")->capture_default_str();
  cat->add_option("--macro-dim", macro_dim, "Macroscopic space dim when --chain 0")
      ->capture_default_str();

  auto* compare = app.add_subcommand("compare", "Collapse vs restriction over random inputs");
  std::string compare_path;
  std::size_t n_random = 200;
  std::uint64_t compare_seed = 1;
  compare->add_option("scenario", compare_path, "Scenario JSON")->required();
  compare->add_option("--random", n_random, "Number of random (state, basis) pairs")
      ->capture_default_str();
  compare->add_option("--seed", compare_seed, "Master seed")->capture_default_str();

  auto* verify = app.add_subcommand("verify", "Run the built-in invariant suite");
  std::uint64_t verify_seed = 20240607;
  verify->add_option("--seed", verify_seed, "Seed for random inputs")->capture_default_str();
  std::vector<std::string> verify_only;
  verify->add_option("--only", verify_only, "Run just these checks")
      ->check(CLI::IsMember(qmeas::verify_check_names()));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    const qmeas::ReportFormat format = qmeas::parse_format(format_name);

    if (*run) {
      const qmeas::Scenario scenario = qmeas::parse_scenario(read_file(run_path));
      const qmeas::Report report = qmeas::run_scenario(scenario);
      std::cout << qmeas::emit_report(report, format);
      return report.max_deviation > tol ? kExitInvariant : kExitOk;
    }
    if (*cat) {
      const qmeas::Report report =
          qmeas::run_cat(parse_complex_arg(c1_text), parse_complex_arg(c2_text), macro_dim, chain);
      std::cout << qmeas::emit_report(report, format);
      double worst = std::max(report.max_deviation, report.cat->expectation_gap);
      for (double c : report.cross_terms) worst = std::max(worst, c);
      return worst > tol ? kExitInvariant : kExitOk;
    }
    if (*compare) {
      const qmeas::Scenario scenario = qmeas::parse_scenario(read_file(compare_path));
      const qmeas::ComparisonSummary summary =
          qmeas::compare_collapse_vs_restriction(scenario, n_random, compare_seed);
      std::cout << qmeas::emit_summary(summary, format);
      return summary.worst > tol ? kExitInvariant : kExitOk;
    }
    if (*verify) {
      bool all = true;
      std::vector<qmeas::CheckResult> results;
      if (verify_only.empty()) {
        results = qmeas::run_verify_suite(verify_seed);
      } else {
        for (const auto& name : verify_only) results.push_back(qmeas::run_verify_check(name, verify_seed));
      }
      for (const auto& r : results) {
        std::printf("[%s] %-34s worst=%.3e tol=%.1e  %s\n", r.passed ? "PASS" : "FAIL",
                    r.name.c_str(), r.worst, r.tolerance, r.detail.c_str());
        all = all && r.passed;
      }
      return all ? kExitOk : kExitInvariant;
    }
  } catch (const qmeas::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}
