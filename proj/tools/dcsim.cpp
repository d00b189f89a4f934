// dcsim: run deferred-choice scenarios and the correctness/cost experiments.

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "dcsim/experiments.hpp"
#include "dcsim/report.hpp"
#include "dcsim/scenario_io.hpp"

namespace fs = std::filesystem;
using namespace dcsim;

namespace {

std::vector<OracleVariant> parse_variants(const std::vector<std::string>& names) {
  if (names.empty() || (names.size() == 1 && names[0] == "all")) return all_variants();
  std::vector<OracleVariant> out;
  for (const auto& n : names) out.push_back(parse_variant(n));
  return out;
}

std::ofstream open_out(const fs::path& dir, const char* name) {
  fs::create_directories(dir);
  std::ofstream f(dir / name);
  if (!f) throw ValidationError("cannot write " + (dir / name).string());
  return f;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deferred-choice oracle simulator"};
  app.require_subcommand(1);

  std::string gas_file;
  unsigned jobs = 0;
  app.add_option("--gas-schedule", gas_file, "JSON file overriding gas constants")->check(CLI::ExistingFile);
  app.add_option("--jobs", jobs, "worker threads (0 = hardware)");

  auto* run_cmd = app.add_subcommand("run", "replay one scenario file");
  std::string scenario_path;
  std::string variant_override;
  fs::path run_out = ".";
  run_cmd->add_option("file", scenario_path, "scenario JSON")->required();
  run_cmd->add_option("--variant", variant_override, "replace the scenario's oracle variant");
  run_cmd->add_option("--out", run_out, "output directory");

  auto* corr_cmd = app.add_subcommand("correctness", "random-scenario correctness experiment");
  CorrectnessConfig corr;
  std::vector<std::string> corr_variants;
  fs::path corr_out = "out/correctness";
  corr_cmd->add_option("--n", corr.n, "scenarios per variant")->check(CLI::PositiveNumber);
  corr_cmd->add_option("--k", corr.ks, "events per choice")->delimiter(',');
  corr_cmd->add_option("--variants", corr_variants, "variant names or 'all'")->delimiter(',');
  corr_cmd->add_option("--seed", corr.seed);
  corr_cmd->add_option("--out", corr_out);

  auto* cost_cmd = app.add_subcommand("cost", "per-consumer cost grid");
  CostConfig cost;
  std::vector<std::string> cost_variants;
  fs::path cost_out = "out/cost";
  cost_cmd->add_option("--c", cost.cs, "consumer counts")->delimiter(',');
  cost_cmd->add_option("--u", cost.us, "update counts")->delimiter(',');
  cost_cmd->add_option("--variants", cost_variants, "variant names or 'all'")->delimiter(',');
  cost_cmd->add_option("--out", cost_out);

  CLI11_PARSE(app, argc, argv);

  try {
    RunOptions options;
    if (!gas_file.empty()) options.schedule = load_gas_schedule(gas_file);

    if (*run_cmd) {
      Scenario s = load_scenario(scenario_path);
      if (!variant_override.empty()) {
        s.variant = parse_variant(variant_override);
        s.semantics = default_semantics(s.variant.architecture);
        validate(s);
      }
      const auto result = run_detailed(s, options);
      auto report = open_out(run_out, "report.csv");
      write_report_csv(report, {result.report});
      auto receipts = open_out(run_out, "receipts.log");
      write_receipts_log(receipts, s.id, result.receipts);
      std::cout << s.id << ": winner " << format_winners(result.report.winners) << ", truth "
                << format_winners(result.report.truths) << (result.report.correct ? " (correct)" : " (WRONG)")
                << ", gas " << result.report.gas_total << '\n';
      return 0;
    }
    if (*corr_cmd) {
      corr.variants = parse_variants(corr_variants);
      const auto reports = run_correctness(corr, options, jobs);
      auto report = open_out(corr_out, "report.csv");
      write_report_csv(report, reports);
      auto table = open_out(corr_out, "correctness.csv");
      const auto rows = correctness_table(reports);
      write_correctness_csv(table, rows);
      write_correctness_csv(std::cout, rows);
      return 0;
    }
    if (*cost_cmd) {
      cost.variants = parse_variants(cost_variants);
      const auto reports = run_cost(cost, options, jobs);
      auto report = open_out(cost_out, "report.csv");
      write_report_csv(report, reports);
      auto heat = open_out(cost_out, "heatmap.csv");
      write_heatmap_csv(heat, heatmap(reports));
      std::cout << reports.size() << " cells written to " << cost_out.string() << '\n';
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "dcsim: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
