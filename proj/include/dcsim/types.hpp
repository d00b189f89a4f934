#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

namespace dcsim {

/// Discrete environment time. Equal to the block height on the simulated ledger.
using Timestamp = std::uint64_t;

/// Value domain of external variables and of every encoded word.
using DataWord = std::uint64_t;

/// "Never detected": the largest representable timestamp.
inline constexpr Timestamp kTop = std::numeric_limits<Timestamp>::max();

/// Index of an event inside one deferred choice (0-based, contiguous).
using EventId = std::uint32_t;

/// Winner slot of a choice; empty means no event has won yet.
using MaybeEvent = std::optional<EventId>;

using Valuation = std::map<std::string, DataWord, std::less<>>;

struct EnvironmentState {
  Timestamp t = 0;
  Valuation nu;

  friend bool operator==(const EnvironmentState&, const EnvironmentState&) = default;
};

/// A pre- or post-condition of a semantic operation was violated by the caller.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Unrecoverable simulation failure (e.g. timestamp overflow).
class SimulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Scenario or configuration input rejected before execution.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string format_event(MaybeEvent e);

}  // namespace dcsim
