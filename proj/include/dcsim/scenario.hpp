#pragma once

// Scenarios replay a timeline of oracle updates and consumer actions against a
// fresh chain and compare every choice's on-chain winner with the continual
// reference executor run over the induced environment trace.

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "dcsim/gas.hpp"
#include "dcsim/providers.hpp"
#include "dcsim/semantics.hpp"
#include "dcsim/transaction.hpp"
#include "dcsim/variant.hpp"

namespace dcsim {

struct OracleDecl {
  std::string name;  // also the name of the observed variable
  DataWord initial = 0;
  friend bool operator==(const OracleDecl&, const OracleDecl&) = default;
};

struct ChoiceDecl {
  std::vector<EventSpec> events;
};

namespace action {
struct OracleUpdate {
  std::string oracle;
  DataWord value = 0;
};
struct Activate {
  std::size_t choice = 0;
  MaybeEvent preferred;
};
struct Trigger {
  std::size_t choice = 0;
  MaybeEvent preferred;
  MaybeEvent message_event;
};
/// Delivers a message; the trigger prefers the delivered event.
struct Message {
  std::size_t choice = 0;
  EventId event = 0;
};
}  // namespace action

using Action = std::variant<action::OracleUpdate, action::Activate, action::Trigger, action::Message>;

struct TimelineEntry {
  Timestamp step = 0;
  Action action;
};

struct Scenario {
  std::string id;
  OracleVariant variant;
  Semantics semantics = Semantics::TransactionDriven;
  std::uint64_t seed = 0;
  std::vector<OracleDecl> oracles;
  std::vector<ChoiceDecl> choices;
  std::vector<TimelineEntry> timeline;
};

/// Throws ValidationError describing the first problem found.
void validate(const Scenario& s);

/// Oracle updates in the timeline.
std::size_t update_count(const Scenario& s);

struct ExperimentReport {
  std::string scenario_id;
  OracleVariant variant;
  Semantics semantics = Semantics::TransactionDriven;
  std::uint64_t c = 0;
  std::uint64_t u = 0;
  std::vector<MaybeEvent> winners;
  std::vector<MaybeEvent> truths;
  bool correct = false;
  std::uint64_t gas_deploy = 0;
  std::uint64_t gas_total = 0;
  double gas_per_consumer = 0;
  friend bool operator==(const ExperimentReport&, const ExperimentReport&) = default;
};

struct RunOptions {
  GasSchedule schedule = GasSchedule::defaults();
  ProviderOptions provider;
  /// Blocks mined after the last timeline step to let responses land.
  Timestamp drain_limit = 256;
};

/// What became of one consumer action on chain.
struct ConsumerOutcome {
  Timestamp step = 0;
  std::size_t choice = 0;
  bool activation = false;
  MaybeEvent preferred;
  MaybeEvent message;
  bool ok = false;
};

struct RunResult {
  ExperimentReport report;
  std::vector<Receipt> receipts;
  std::vector<ConsumerOutcome> outcomes;
  /// Detection time each on-chain winner was ranked by (kTop if none).
  std::vector<Timestamp> winner_detection;
  /// Block at which each choice was decided (kTop if never).
  std::vector<Timestamp> decided_at;
};

RunResult run_detailed(const Scenario& s, const RunOptions& options = {});
ExperimentReport run(const Scenario& s, const RunOptions& options = {});

/// Winner of the continual reference executor for each choice, with the
/// per-step preference of that step's consumer action.
/// Only successful actions count: a reverted activation never happened and a
/// reverted message was never delivered.
std::vector<MaybeEvent> ground_truth(const Scenario& s, const std::vector<ConsumerOutcome>& outcomes);

/// Environment trace induced by the timeline over [from, to].
EnvironmentTrace induced_trace(const Scenario& s, Timestamp from, Timestamp to);

/// Runs scenarios on up to `jobs` threads; results are in input order.
std::vector<ExperimentReport> run_batch(const std::vector<Scenario>& scenarios, const RunOptions& options,
                                        unsigned jobs = 0);

}  // namespace dcsim
