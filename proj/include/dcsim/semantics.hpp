#pragma once

// Formal model of a deferred choice: environment states and traces, event
// detection, and the continual and transaction-driven transition relations.
// Everything here is a pure function over value types.

#include <set>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "dcsim/expr.hpp"
#include "dcsim/types.hpp"

namespace dcsim {

struct MessageEvent {
  friend bool operator==(const MessageEvent&, const MessageEvent&) = default;
};

struct AbsoluteTimer {
  Timestamp deadline;
  friend bool operator==(const AbsoluteTimer&, const AbsoluteTimer&) = default;
};

/// Fires `delta` time units after activation.
struct RelativeTimer {
  Timestamp delta;
  friend bool operator==(const RelativeTimer&, const RelativeTimer&) = default;
};

/// Names the oracle instance (and thereby the external variable) a
/// conditional event consults.
struct OracleBinding {
  std::string oracle;
  friend bool operator==(const OracleBinding&, const OracleBinding&) = default;
};

struct ConditionalEvent {
  expr::Expr condition;
  OracleBinding binding;
  friend bool operator==(const ConditionalEvent&, const ConditionalEvent&) = default;
};

using EventKind = std::variant<MessageEvent, AbsoluteTimer, RelativeTimer, ConditionalEvent>;

struct EventSpec {
  EventId id = 0;
  EventKind kind;
  std::string name;  // display only

  bool is_message() const { return std::holds_alternative<MessageEvent>(kind); }
  bool is_conditional() const { return std::holds_alternative<ConditionalEvent>(kind); }
};

using EventSet = std::set<EventId>;

struct ChoiceState {
  EnvironmentState activation;
  EnvironmentState observed;
  MaybeEvent winner;

  bool is_final() const { return winner.has_value(); }
  friend bool operator==(const ChoiceState&, const ChoiceState&) = default;
};

/// Successor-chained sequence of environment states starting at `start()`.
class EnvironmentTrace {
 public:
  explicit EnvironmentTrace(EnvironmentState start);
  /// Throws ContractViolation unless every state succeeds its predecessor.
  EnvironmentTrace(EnvironmentState start, std::vector<EnvironmentState> states);

  const EnvironmentState& start() const { return start_; }
  /// States after the start, in order.
  const std::vector<EnvironmentState>& states() const { return states_; }
  const EnvironmentState& back() const { return states_.empty() ? start_ : states_.back(); }
  std::size_t size() const { return states_.size() + 1; }
  /// i = 0 is the start state.
  const EnvironmentState& at(std::size_t i) const { return i == 0 ? start_ : states_.at(i - 1); }

  void append(EnvironmentState next);
  /// Trace truncated to its first `count` states (count >= 1).
  EnvironmentTrace prefix(std::size_t count) const;

 private:
  EnvironmentState start_;
  std::vector<EnvironmentState> states_;
};

/// A message delivered by a mined transaction.
struct ExplicitMessage {
  EventId event;
  Timestamp at;
  friend bool operator==(const ExplicitMessage&, const ExplicitMessage&) = default;
};

using ExplicitLog = std::vector<ExplicitMessage>;

/// Throws ContractViolation unless ids are unique and contiguous from 0.
void validate_events(std::span<const EventSpec> events);

/// (s.t + 1, nu_next); throws SimulationError when the timestamp would reach TOP.
EnvironmentState successor(const EnvironmentState& s, Valuation nu_next);

bool detect(const EventSpec& e, const EnvironmentState& activation, const EnvironmentState& s,
            const EventSet& explicit_now);

EventSet detected_set(std::span<const EventSpec> events, const EnvironmentState& activation,
                      const EnvironmentState& s, const EventSet& explicit_now);

/// Deterministic tie-break: `preferred` if it is a candidate, else the lowest id.
MaybeEvent select_winner(const EventSet& candidates, MaybeEvent preferred);

ChoiceState initial_state(std::span<const EventSpec> events, const EnvironmentState& s,
                          const EventSet& explicit_now, MaybeEvent preferred);

/// One step of the continual relation; `next` must directly succeed `cs.observed`.
ChoiceState continual_step(std::span<const EventSpec> events, const ChoiceState& cs,
                           const EnvironmentState& next, const EventSet& explicit_now,
                           MaybeEvent preferred);

/// Earliest timestamp in `history` at which `e` could have been detected, or kTop.
/// `history` must start at the activation state.
Timestamp timed_detection(const EventSpec& e, const EnvironmentState& activation,
                          const EnvironmentTrace& history, const ExplicitLog& explicit_log);

/// Minimum of timed_detection over all events.
Timestamp earliest_detection(std::span<const EventSpec> events, const EnvironmentState& activation,
                             const EnvironmentTrace& history, const ExplicitLog& explicit_log);

/// One step of the transaction-driven relation from `cs` to `now`, which may
/// skip any number of intermediate states (they are supplied by `history`).
ChoiceState txn_step(std::span<const EventSpec> events, const ChoiceState& cs,
                     const EnvironmentState& now, const EnvironmentTrace& history,
                     const ExplicitLog& explicit_log, MaybeEvent preferred);

/// Messages of `log` delivered exactly at `t`.
EventSet explicit_at(const ExplicitLog& log, Timestamp t);

/// Reference executor: activates at trace.start() and applies continual_step
/// along the trace until a winner is found or the trace ends.
ChoiceState run_continual(std::span<const EventSpec> events, const EnvironmentTrace& trace,
                          const ExplicitLog& explicit_log, MaybeEvent preferred = std::nullopt);

}  // namespace dcsim
