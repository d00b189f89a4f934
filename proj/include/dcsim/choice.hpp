#pragma once

// Deferred-choice consumer contract.
//
// Functions (payload words):
//   activate        [preferred]
//   try_trigger     [preferred][message_event]     NIL = all-ones word
//   oracle_callback [corr][result...]
//   push            [oracle][value | ts]
//
// Two semantics:
//   ContinualBaseline   only what is detectable in the current state counts,
//                       and every detection is stamped with the current time
//   TransactionDriven   each event is ranked by its earliest detection time,
//                       reconstructed from histories, pushes, or timers

#include <map>
#include <optional>
#include <set>
#include <vector>

#include "dcsim/ledger.hpp"
#include "dcsim/semantics.hpp"
#include "dcsim/variant.hpp"

namespace dcsim {

namespace topic {
inline constexpr std::string_view kDecided = "Decided";
inline constexpr std::string_view kAlreadyDecided = "AlreadyDecided";
}  // namespace topic

struct ChoiceConfig {
  std::vector<EventSpec> events;
  Semantics semantics = Semantics::TransactionDriven;
  OracleVariant variant;
  /// Oracle contract consulted by each conditional event.
  std::map<EventId, Address> oracles;
};

/// Throws ValidationError for unusable configurations, including a semantics
/// the variant cannot support.
void validate_choice_config(const ChoiceConfig& config);

/// Payload helpers for the consumer interface.
Bytes encode_activate(MaybeEvent preferred);
Bytes encode_trigger(MaybeEvent preferred, MaybeEvent message_event);

class ChoiceContract final : public Contract {
 public:
  explicit ChoiceContract(ChoiceConfig config);

  std::string kind() const override { return choice_kind(config_.variant); }
  Bytes invoke(CallContext& ctx, std::string_view function, ByteView payload) override;
  std::unique_ptr<Contract> clone() const override { return std::make_unique<ChoiceContract>(*this); }

  const ChoiceConfig& config() const { return config_; }
  bool activated() const { return activated_; }
  Timestamp activation_time() const { return t_a_; }
  Timestamp observed_time() const { return observed_; }
  MaybeEvent winner() const { return winner_; }
  /// Detection time the winner was ranked by (kTop while undecided).
  Timestamp winner_detection() const { return winner_det_; }
  Timestamp decided_at() const { return decided_at_; }
  bool evaluation_in_flight() const { return inflight_.has_value(); }
  std::size_t pending_callbacks() const { return inflight_ ? inflight_->pending.size() : 0; }
  std::uint64_t queries_issued() const { return queries_issued_; }
  std::uint64_t callbacks_received() const { return callbacks_received_; }

 private:
  struct Evaluation {
    Timestamp as_of = 0;
    MaybeEvent preferred;
    bool strict = false;  // finalize only on detections strictly in the past
    std::vector<Timestamp> det;
    std::map<std::uint64_t, EventId> pending;  // corr -> event
  };

  Bytes activate(CallContext& ctx, ByteView payload);
  Bytes try_trigger(CallContext& ctx, ByteView payload);
  Bytes oracle_callback(CallContext& ctx, ByteView payload);
  Bytes push(CallContext& ctx, ByteView payload);

  void evaluate(CallContext& ctx, MaybeEvent preferred, MaybeEvent message_now, bool strict);
  Timestamp local_detection(const EventSpec& e, Timestamp now, MaybeEvent message_now) const;
  Timestamp sync_query(CallContext& ctx, const EventSpec& e, Timestamp now);
  Timestamp read_result(const EventSpec& e, ByteView result, Timestamp as_of) const;
  void finish(CallContext& ctx, Evaluation ev);
  void finalize(CallContext& ctx, EventId winner, Timestamp det);

  const ConditionalEvent& conditional(const EventSpec& e) const;
  bool baseline() const { return config_.semantics == Semantics::ContinualBaseline; }

  ChoiceConfig config_;
  std::map<EventId, std::string> variables_;  // conditional event -> variable

  bool activated_ = false;
  Timestamp t_a_ = 0;
  Timestamp observed_ = 0;
  MaybeEvent winner_;
  Timestamp winner_det_ = kTop;
  Timestamp decided_at_ = kTop;
  std::map<EventId, Timestamp> messages_;  // first delivery per message event

  // pub/sub: detection per conditional event, snapshots not yet received
  std::map<EventId, Timestamp> detections_;
  std::set<EventId> awaiting_snapshot_;

  std::optional<Evaluation> inflight_;
  std::uint64_t next_corr_ = 1;
  std::uint64_t queries_issued_ = 0;
  std::uint64_t callbacks_received_ = 0;
};

}  // namespace dcsim
