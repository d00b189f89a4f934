#pragma once

#include <vector>

#include "dcsim/scenario.hpp"

namespace dcsim {

/// Step at which generated correctness scenarios activate their choice.
inline constexpr Timestamp kCorrectnessActivation = 10;
/// Steps between consecutive event occurrences.
inline constexpr Timestamp kOccurrenceSpacing = 3;

/**
 * `n` scenarios with one choice of `k` randomly typed events (message,
 * relative timer, conditional) that occur strictly in order, so e0 is always
 * the winner. The event structure depends on (seed, k, index) only, never on
 * the variant, so every variant replays the same situations.
 */
std::vector<Scenario> gen_correctness(std::size_t n, std::size_t k, const OracleVariant& variant,
                                      std::uint64_t seed);

/// Step at which event i of a generated correctness scenario occurs.
constexpr Timestamp occurrence_step(std::size_t i) {
  return kCorrectnessActivation + kOccurrenceSpacing * (i + 1);
}

/**
 * `c` choices with one conditional event each on a single shared oracle, `u`
 * updates of which only the last satisfies the condition, and a trigger to
 * every choice after every fifth update and after the last one.
 */
Scenario gen_cost(std::size_t c, std::size_t u, const OracleVariant& variant);

}  // namespace dcsim
