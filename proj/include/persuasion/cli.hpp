#pragma once

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "persuasion/experiments.hpp"
#include "persuasion/montecarlo.hpp"
#include "persuasion/scenario.hpp"

namespace persuasion {
namespace cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitCertificate = 3;
inline constexpr double kCertificateFloor = -1e-7;
inline constexpr double kZScoreLimit = 3.0;

namespace detail {

inline std::vector<int> parse_ordering_flag(const std::string& flag) {
  std::vector<int> out;
  std::stringstream ss(flag);
  std::string token;
  while (std::getline(ss, token, ',')) {
    try {
      const int idx = std::stoi(token);
      if (idx < 1) throw std::invalid_argument("1-based");
      out.push_back(idx - 1);
    } catch (const std::exception&) {
      throw ScenarioError("--ordering",
                          "expected comma-separated 1-based sender numbers");
    }
  }
  if (out.empty()) {
    throw ScenarioError("--ordering", "expected at least one sender number");
  }
  return out;
}

inline void emit(const std::string& content, const std::string& out_path,
                 std::ostream& out) {
  if (out_path.empty()) {
    out << content;
    return;
  }
  std::ofstream file(out_path, std::ios::binary);
  if (!file) throw ScenarioError(out_path, "cannot open output file");
  file << content;
}

inline bool rows_certified(const std::vector<ResultRow>& rows) {
  for (const ResultRow& row : rows) {
    if (row.certificate < kCertificateFloor) return false;
  }
  return true;
}

inline int solve_static(const ScenarioFile& scenario,
                        const std::vector<int>& ordering_flag,
                        const std::string& out_path, std::ostream& out,
                        std::ostream& err) {
  std::vector<ResultRow> rows;
  int m = 0;
  auto solve_one = [&](const ScenarioFile& instance, bool has_sweep,
                       double sweep_value) {
    const GameSpec g = instance.to_game_spec();
    m = g.num_senders();
    const std::vector<int> ordering =
        ordering_flag.empty() ? instance.ordering_or_default(m)
                              : ordering_flag;
    EquilibriumResult res = solve_ordering(g, ordering);
    ResultRow row = experiments::row_from_result(instance.name, res);
    if (has_sweep) {
      row.sweep_name = scenario.sweep->name;
      row.sweep_value = sweep_value;
      row.has_sweep = true;
    }
    rows.push_back(std::move(row));
  };
  if (scenario.sweep) {
    std::vector<double> values = scenario.sweep->values;
    std::sort(values.begin(), values.end());
    for (double v : values) solve_one(scenario.materialize(v), true, v);
  } else {
    solve_one(scenario, false, 0.0);
  }
  emit(rows_to_csv(rows, cost_column_names(m, false)), out_path, out);
  if (!rows_certified(rows)) {
    err << "stability certificate below " << kCertificateFloor << "\n";
    return kExitCertificate;
  }
  return kExitOk;
}

inline int solve_orderings(const ScenarioFile& scenario,
                           const std::string& out_path, std::ostream& out,
                           std::ostream& err) {
  const GameSpec g = scenario.to_game_spec();
  std::vector<ResultRow> rows;
  for (const auto& [ordering, res] : enumerate_orderings(g)) {
    rows.push_back(experiments::row_from_result(scenario.name, res));
  }
  emit(rows_to_csv(rows, cost_column_names(g.num_senders(), false)), out_path,
       out);
  if (!rows_certified(rows)) {
    err << "stability certificate below " << kCertificateFloor << "\n";
    return kExitCertificate;
  }
  return kExitOk;
}

inline int solve_dynamic_cmd(const ScenarioFile& scenario,
                             const std::string& out_path, std::ostream& out,
                             std::ostream& err) {
  const DynamicGameSpec spec = scenario.to_dynamic_spec();
  const DynamicEquilibrium eq = solve_dynamic(spec);
  emit(experiments::dynamic_rows_csv(scenario.name, spec, eq), out_path, out);
  for (const std::vector<double>& certs : eq.certificates) {
    for (double c : certs) {
      if (c < kCertificateFloor) {
        err << "stage stability certificate below " << kCertificateFloor
            << "\n";
        return kExitCertificate;
      }
    }
  }
  return kExitOk;
}

inline int solve_multireceiver_cmd(const ScenarioFile& scenario,
                                   const std::vector<int>& ordering_flag,
                                   const std::string& out_path,
                                   std::ostream& out, std::ostream& err) {
  std::vector<ResultRow> rows;
  int m = 0;
  auto solve_one = [&](const ScenarioFile& instance, bool has_sweep,
                       double sweep_value) {
    const MultiReceiverSpec spec = instance.to_multireceiver_spec();
    m = spec.num_senders();
    const std::vector<int> ordering =
        ordering_flag.empty() ? instance.ordering_or_default(m)
                              : ordering_flag;
    EquilibriumResult res = solve_multireceiver(spec, ordering);
    ResultRow row = experiments::row_from_result(instance.name, res);
    if (has_sweep) {
      row.sweep_name = scenario.sweep->name;
      row.sweep_value = sweep_value;
      row.has_sweep = true;
    }
    rows.push_back(std::move(row));
  };
  if (scenario.sweep) {
    std::vector<double> values = scenario.sweep->values;
    std::sort(values.begin(), values.end());
    for (double v : values) solve_one(scenario.materialize(v), true, v);
  } else {
    solve_one(scenario, false, 0.0);
  }
  emit(rows_to_csv(rows, cost_column_names(m, true)), out_path, out);
  if (!rows_certified(rows)) {
    err << "stability certificate below " << kCertificateFloor << "\n";
    return kExitCertificate;
  }
  return kExitOk;
}

inline void validate_rows(CsvWriter& csv, const std::string& scenario,
                          int stage, const SimReport& report, bool& ok) {
  const int players = static_cast<int>(report.empirical_cost.size());
  for (int j = 0; j < players; ++j) {
    const std::string player =
        j + 1 < players ? "J_" + std::to_string(j + 1) : "J_r";
    const double se = report.standard_error[j];
    const double gap =
        std::abs(report.empirical_cost[j] - report.theoretical_cost[j]);
    const double scale =
        std::max({1.0, std::abs(report.empirical_cost[j]),
                  std::abs(report.theoretical_cost[j])});
    const double z = gap <= 1e-10 * scale ? 0.0
                     : se > 0.0           ? gap / se
                                          : 1e300;
    if (z > kZScoreLimit) ok = false;
    csv.row({scenario, std::to_string(stage), player,
             format_double(report.theoretical_cost[j]),
             format_double(report.empirical_cost[j]), format_double(se),
             format_double(z)});
  }
}

inline int validate(const ScenarioFile& scenario,
                    const std::vector<int>& ordering_flag,
                    std::uint64_t samples, std::uint64_t seed,
                    const std::string& out_path, std::ostream& out,
                    std::ostream& err) {
  SimConfig cfg{samples, seed, scenario.name};
  CsvWriter csv;
  csv.header({"scenario", "stage", "player", "theoretical", "empirical",
              "std_error", "z"});
  bool ok = true;
  if (scenario.kind == ScenarioKind::kStatic) {
    const GameSpec g = scenario.to_game_spec();
    const std::vector<int> ordering =
        ordering_flag.empty() ? scenario.ordering_or_default(g.num_senders())
                              : ordering_flag;
    const EquilibriumResult res = solve_ordering(g, ordering);
    const SimReport report = simulate_static(g, res.policy, cfg);
    validate_rows(csv, scenario.name, 0, report, ok);
  } else if (scenario.kind == ScenarioKind::kDynamic) {
    const DynamicGameSpec spec = scenario.to_dynamic_spec();
    const DynamicEquilibrium eq = solve_dynamic(spec);
    const std::vector<SimReport> reports =
        simulate_dynamic(spec, eq.policies, cfg);
    for (int k = 1; k <= spec.horizon(); ++k) {
      validate_rows(csv, scenario.name, k, reports[k - 1], ok);
    }
  } else {
    err << "validate supports static and dynamic scenarios\n";
    return kExitValidation;
  }
  emit(csv.str(), out_path, out);
  if (!ok) {
    err << "empirical cost beyond " << kZScoreLimit << " standard errors\n";
    return kExitCertificate;
  }
  return kExitOk;
}

inline int reproduce(const std::string& target, const std::string& out_dir,
                     std::ostream& out) {
  const std::map<std::string, std::string> files =
      experiments::reproduce(target);
  for (const auto& [name, content] : files) {
    const std::string path =
        out_dir.empty() ? name : out_dir + "/" + name;
    std::ofstream file(path, std::ios::binary);
    if (!file) throw ScenarioError(path, "cannot open output file");
    file << content;
    out << path << "\n";
  }
  return kExitOk;
}

}  // namespace detail

/// Entry point shared by the binary and the tests. Exit codes: 0 success,
/// 2 parse or validation failure, 3 failed stability or Monte-Carlo
/// certificate.
inline int run_command(const std::vector<std::string>& args,
                       std::ostream& out = std::cout,
                       std::ostream& err = std::cerr) {
  CLI::App app{"Equilibrium posteriors and linear signaling policies for "
               "multi-sender Gaussian information-disclosure games"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string ordering_flag;
  std::string out_path;
  std::string target;
  std::uint64_t samples = 100000;
  std::uint64_t seed = 0;

  auto add_scenario = [&](CLI::App* cmd) {
    cmd->add_option("--scenario", scenario_path, "scenario JSON file")
        ->required();
    cmd->add_option("--out", out_path, "output CSV path (default: stdout)");
  };
  CLI::App* cmd_static = app.add_subcommand(
      "solve-static", "solve a static scenario for one ordering");
  add_scenario(cmd_static);
  cmd_static->add_option("--ordering", ordering_flag,
                         "1-based sender order, e.g. 2,1");
  CLI::App* cmd_orderings = app.add_subcommand(
      "orderings", "solve a static scenario for every ordering");
  add_scenario(cmd_orderings);
  CLI::App* cmd_dynamic =
      app.add_subcommand("solve-dynamic", "solve a dynamic scenario");
  add_scenario(cmd_dynamic);
  CLI::App* cmd_multi = app.add_subcommand(
      "solve-multireceiver", "solve a two-receiver scenario");
  add_scenario(cmd_multi);
  cmd_multi->add_option("--ordering", ordering_flag,
                        "1-based sender order, e.g. 2,1");
  CLI::App* cmd_validate = app.add_subcommand(
      "validate", "Monte-Carlo check of a solved scenario");
  add_scenario(cmd_validate);
  cmd_validate->add_option("--ordering", ordering_flag,
                           "1-based sender order, e.g. 2,1");
  cmd_validate->add_option("--samples", samples, "Monte-Carlo sample count");
  cmd_validate->add_option("--seed", seed, "RNG seed");
  CLI::App* cmd_reproduce = app.add_subcommand(
      "reproduce", "regenerate a benchmark artifact (ex1..ex8, table1, "
                   "table2, fig3..fig9)");
  cmd_reproduce->add_option("target", target, "artifact name")->required();
  cmd_reproduce->add_option("--out", out_path,
                            "output directory (default: current)");

  std::vector<const char*> argv;
  argv.push_back("persuasion-eq");
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kExitValidation;
  }

  try {
    const std::vector<int> ordering =
        ordering_flag.empty() ? std::vector<int>{}
                              : detail::parse_ordering_flag(ordering_flag);
    if (cmd_reproduce->parsed()) {
      return detail::reproduce(target, out_path, out);
    }
    const ScenarioFile scenario = ScenarioFile::load(scenario_path);
    if (cmd_static->parsed()) {
      return detail::solve_static(scenario, ordering, out_path, out, err);
    }
    if (cmd_orderings->parsed()) {
      return detail::solve_orderings(scenario, out_path, out, err);
    }
    if (cmd_dynamic->parsed()) {
      return detail::solve_dynamic_cmd(scenario, out_path, out, err);
    }
    if (cmd_multi->parsed()) {
      return detail::solve_multireceiver_cmd(scenario, ordering, out_path,
                                             out, err);
    }
    if (cmd_validate->parsed()) {
      return detail::validate(scenario, ordering, samples, seed, out_path,
                              out, err);
    }
  } catch (const ScenarioError& e) {
    err << "scenario error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  err << "no subcommand\n";
  return kExitValidation;
}

}  // namespace cli
}  // namespace persuasion
