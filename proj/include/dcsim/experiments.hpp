#pragma once

#include <vector>

#include "dcsim/scenario.hpp"

namespace dcsim {

struct CorrectnessConfig {
  /// Scenarios per variant, split evenly over `ks`.
  std::size_t n = 60;
  std::vector<std::size_t> ks = {5, 10};
  std::vector<OracleVariant> variants = all_variants();
  std::uint64_t seed = 1;
};

struct CostConfig {
  std::vector<std::size_t> cs = {5, 10, 20};
  std::vector<std::size_t> us = {1, 10, 20, 30};
  std::vector<OracleVariant> variants = all_variants();
};

/// All generated scenarios, in report order: variant, then k, then index.
std::vector<Scenario> correctness_scenarios(const CorrectnessConfig& cfg);
/// Variant, then c, then u.
std::vector<Scenario> cost_scenarios(const CostConfig& cfg);

std::vector<ExperimentReport> run_correctness(const CorrectnessConfig& cfg, const RunOptions& options,
                                              unsigned jobs = 0);
std::vector<ExperimentReport> run_cost(const CostConfig& cfg, const RunOptions& options, unsigned jobs = 0);

}  // namespace dcsim
