#include "dcsim/experiments.hpp"

#include "dcsim/generators.hpp"

namespace dcsim {

std::vector<Scenario> correctness_scenarios(const CorrectnessConfig& cfg) {
  if (cfg.ks.empty()) throw ValidationError("k list is empty");
  if (cfg.variants.empty()) throw ValidationError("variant list is empty");
  if (cfg.n < cfg.ks.size()) throw ValidationError("n must cover every k at least once");
  std::vector<Scenario> out;
  for (const auto& v : cfg.variants) {
    for (std::size_t i = 0; i < cfg.ks.size(); ++i) {
      // n / |ks| each, remainder to the first entries
      const std::size_t share = cfg.n / cfg.ks.size() + (i < cfg.n % cfg.ks.size() ? 1 : 0);
      auto batch = gen_correctness(share, cfg.ks[i], v, cfg.seed);
      for (auto& s : batch) out.push_back(std::move(s));
    }
  }
  return out;
}

std::vector<Scenario> cost_scenarios(const CostConfig& cfg) {
  if (cfg.cs.empty() || cfg.us.empty()) throw ValidationError("cost grid is empty");
  if (cfg.variants.empty()) throw ValidationError("variant list is empty");
  std::vector<Scenario> out;
  for (const auto& v : cfg.variants) {
    for (const auto c : cfg.cs) {
      for (const auto u : cfg.us) out.push_back(gen_cost(c, u, v));
    }
  }
  return out;
}

std::vector<ExperimentReport> run_correctness(const CorrectnessConfig& cfg, const RunOptions& options,
                                              unsigned jobs) {
  return run_batch(correctness_scenarios(cfg), options, jobs);
}

std::vector<ExperimentReport> run_cost(const CostConfig& cfg, const RunOptions& options, unsigned jobs) {
  return run_batch(cost_scenarios(cfg), options, jobs);
}

}  // namespace dcsim
