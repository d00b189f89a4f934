#include "dcsim/choice.hpp"

#include <algorithm>

#include "dcsim/history.hpp"
#include "dcsim/oracles.hpp"

namespace dcsim {

namespace {

Timestamp saturating_add(Timestamp a, Timestamp b) { return a > kTop - b ? kTop : a + b; }

MaybeEvent read_event(AbiReader& r, std::size_t n_events) {
  const MaybeEvent e = decode_event(r.word());
  if (e && *e >= n_events) throw Revert("unknown event e" + std::to_string(*e));
  return e;
}

}  // namespace

void validate_choice_config(const ChoiceConfig& config) {
  if (config.events.empty()) throw ValidationError("a choice needs at least one event");
  try {
    validate_events(config.events);
  } catch (const ContractViolation& e) {
    throw ValidationError(e.what());
  }
  if (config.semantics != default_semantics(config.variant.architecture)) {
    throw ValidationError(std::string(to_string(config.variant.architecture)) + " oracles cannot run " +
                          std::string(to_string(config.semantics)) + " semantics");
  }
  for (const auto& e : config.events) {
    if (!e.is_conditional()) continue;
    const auto& c = std::get<ConditionalEvent>(e.kind);
    if (expr::variables(c.condition).size() != 1) {
      throw ValidationError("condition of e" + std::to_string(e.id) +
                            " must reference exactly one variable");
    }
    if (!config.oracles.contains(e.id)) {
      throw ValidationError("conditional event e" + std::to_string(e.id) + " has no oracle");
    }
  }
  if (config.variant.architecture == Architecture::PubSub) {
    std::set<Address> seen;
    for (const auto& [id, addr] : config.oracles) {
      if (!seen.insert(addr).second) {
        throw ValidationError("pub/sub events of one choice need distinct oracle instances");
      }
    }
  }
}

Bytes encode_activate(MaybeEvent preferred) { return AbiWriter().word(encode_event(preferred)).take(); }

Bytes encode_trigger(MaybeEvent preferred, MaybeEvent message_event) {
  return AbiWriter().word(encode_event(preferred)).word(encode_event(message_event)).take();
}

ChoiceContract::ChoiceContract(ChoiceConfig config) : config_(std::move(config)) {
  validate_choice_config(config_);
  for (const auto& e : config_.events) {
    if (e.is_conditional()) variables_[e.id] = *expr::variables(conditional(e).condition).begin();
  }
}

const ConditionalEvent& ChoiceContract::conditional(const EventSpec& e) const {
  return std::get<ConditionalEvent>(e.kind);
}

Bytes ChoiceContract::invoke(CallContext& ctx, std::string_view function, ByteView payload) {
  if (function == "activate") return activate(ctx, payload);
  if (function == "try_trigger") return try_trigger(ctx, payload);
  if (function == "oracle_callback") return oracle_callback(ctx, payload);
  if (function == "push") return push(ctx, payload);
  throw Revert("unknown function '" + std::string(function) + "'");
}

Bytes ChoiceContract::activate(CallContext& ctx, ByteView payload) {
  AbiReader r(payload);
  const MaybeEvent preferred = read_event(r, config_.events.size());
  if (!r.at_end()) throw Revert("trailing payload");
  ctx.read();
  if (activated_) throw Revert("already activated");
  activated_ = true;
  t_a_ = ctx.block_time();
  ctx.write_new(2);  // activation time, status

  const bool pubsub = config_.variant.architecture == Architecture::PubSub;
  if (pubsub) {
    for (const auto& e : config_.events) {
      if (!e.is_conditional()) continue;
      const Bytes params =
          config_.variant.conditional ? AbiWriter().text(expr::render(conditional(e).condition)).take()
                                      : Bytes{};
      ctx.call(config_.oracles.at(e.id), "subscribe", params);
      detections_[e.id] = kTop;
      awaiting_snapshot_.insert(e.id);
    }
  }
  // Pushes cannot have arrived yet, so pub/sub cannot rank anything here.
  evaluate(ctx, preferred, std::nullopt, pubsub);
  return {};
}

Bytes ChoiceContract::try_trigger(CallContext& ctx, ByteView payload) {
  AbiReader r(payload);
  const MaybeEvent preferred = read_event(r, config_.events.size());
  const MaybeEvent message = read_event(r, config_.events.size());
  if (!r.at_end()) throw Revert("trailing payload");
  ctx.read();
  if (!activated_) throw Revert("not activated");
  if (message && !config_.events[*message].is_message()) {
    throw Revert("e" + std::to_string(*message) + " is not a message event");
  }
  if (winner_) {
    ctx.emit(std::string(topic::kAlreadyDecided), AbiWriter().word(*winner_).take());
    return {};
  }
  if (inflight_) throw Revert("evaluation in progress");
  if (message && !messages_.contains(*message)) {
    messages_[*message] = ctx.block_time();
    ctx.write_new();
  }
  evaluate(ctx, preferred, message, false);
  return {};
}

Bytes ChoiceContract::oracle_callback(CallContext& ctx, ByteView payload) {
  AbiReader r(payload);
  const auto corr = r.word();
  ctx.read();
  if (winner_) return {};  // late answer, nothing left to decide
  if (!inflight_ || !inflight_->pending.contains(corr)) {
    throw Revert("unknown correlation id " + std::to_string(corr));
  }
  const EventId id = inflight_->pending.at(corr);
  inflight_->det[id] = read_result(config_.events[id], r.rest(), inflight_->as_of);
  inflight_->pending.erase(corr);
  ctx.write_update();
  ++callbacks_received_;
  if (inflight_->pending.empty()) {
    Evaluation ev = std::move(*inflight_);
    inflight_.reset();
    finish(ctx, std::move(ev));
  }
  return {};
}

Bytes ChoiceContract::push(CallContext& ctx, ByteView payload) {
  if (config_.variant.architecture != Architecture::PubSub) throw Revert("choice does not subscribe");
  AbiReader r(payload);
  const Address oracle{r.word()};
  const DataWord value = r.word();
  if (!r.at_end()) throw Revert("trailing payload");
  ctx.read();
  if (!activated_) throw Revert("not activated");
  if (winner_) return {};

  const auto it = std::find_if(config_.oracles.begin(), config_.oracles.end(),
                               [&](const auto& kv) { return kv.second == oracle; });
  if (it == config_.oracles.end()) throw Revert("push from unbound oracle #" + std::to_string(oracle.value));
  const EventId id = it->first;

  // The first push answers the subscription and describes the activation state.
  const bool snapshot = awaiting_snapshot_.erase(id) > 0;
  Timestamp& det = detections_[id];
  if (config_.variant.conditional) {
    det = std::min(det, value);
  } else if (det == kTop &&
             expr::eval_single(conditional(config_.events[id]).condition, variables_.at(id), value)) {
    det = snapshot ? t_a_ : ctx.block_time();
  }
  ctx.write_update();
  evaluate(ctx, std::nullopt, std::nullopt, true);
  return {};
}

Timestamp ChoiceContract::local_detection(const EventSpec& e, Timestamp now,
                                          MaybeEvent message_now) const {
  return std::visit(
      [&](const auto& k) -> Timestamp {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, MessageEvent>) {
          if (baseline()) return message_now == e.id ? now : kTop;
          const auto it = messages_.find(e.id);
          return it == messages_.end() ? kTop : it->second;
        } else if constexpr (std::is_same_v<T, AbsoluteTimer>) {
          if (k.deadline > now) return kTop;
          return baseline() ? now : std::max(k.deadline, t_a_);
        } else if constexpr (std::is_same_v<T, RelativeTimer>) {
          const Timestamp due = saturating_add(t_a_, k.delta);
          if (due > now) return kTop;
          return baseline() ? now : due;
        } else {
          return kTop;
        }
      },
      e.kind);
}

Timestamp ChoiceContract::sync_query(CallContext& ctx, const EventSpec& e, Timestamp now) {
  const auto params =
      encode_query_params(config_.variant, t_a_, conditional(e).condition);
  const Bytes result = ctx.call(config_.oracles.at(e.id), "query", params);
  return read_result(e, result, now);
}

Timestamp ChoiceContract::read_result(const EventSpec& e, ByteView result, Timestamp as_of) const {
  const auto& cond = conditional(e).condition;
  const auto& var = variables_.at(e.id);
  try {
    AbiReader r(result);
    Timestamp det = kTop;
    if (is_history(config_.variant.architecture)) {
      if (config_.variant.conditional) {
        det = r.word();
      } else {
        const auto entries = decode_history(r);
        det = earliest_true(entries, cond, var);
      }
      // Anything the oracle saw after the evaluation point is not ours to use.
      if (det > as_of) det = kTop;
      if (det != kTop) det = std::max(det, t_a_);
    } else {
      const bool holds = config_.variant.conditional ? r.boolean() : expr::eval_single(cond, var, r.word());
      det = holds ? as_of : kTop;
    }
    if (!r.at_end()) throw Revert("trailing oracle result");
    return det;
  } catch (const DecodeError& err) {
    throw Revert(std::string("malformed oracle result: ") + err.what());
  }
}

void ChoiceContract::evaluate(CallContext& ctx, MaybeEvent preferred, MaybeEvent message_now,
                              bool strict) {
  const Timestamp now = ctx.block_time();
  observed_ = now;
  ctx.write_update();

  Evaluation ev;
  ev.as_of = now;
  ev.preferred = preferred;
  ev.strict = strict;
  ev.det.assign(config_.events.size(), kTop);
  for (const auto& e : config_.events) {
    if (!e.is_conditional()) {
      ev.det[e.id] = local_detection(e, now, message_now);
      continue;
    }
    switch (config_.variant.architecture) {
      case Architecture::Storage:
      case Architecture::OnChainHistory:
        ev.det[e.id] = sync_query(ctx, e, now);
        break;
      case Architecture::RequestResponse:
      case Architecture::OffChainHistory: {
        const std::uint64_t corr = next_corr_++;
        AbiWriter w;
        w.word(corr).raw(encode_query_params(config_.variant, t_a_, conditional(e).condition));
        ctx.call(config_.oracles.at(e.id), "request", w.bytes());
        ev.pending.emplace(corr, e.id);
        ctx.write_new();
        ++queries_issued_;
        break;
      }
      case Architecture::PubSub:
        ev.det[e.id] = detections_.at(e.id);
        break;
    }
  }
  if (ev.pending.empty()) {
    finish(ctx, std::move(ev));
  } else {
    inflight_ = std::move(ev);
  }
}

void ChoiceContract::finish(CallContext& ctx, Evaluation ev) {
  const Timestamp first = *std::min_element(ev.det.begin(), ev.det.end());
  if (first == kTop) return;
  // Until every subscription has answered, some event may be unranked.
  if (!awaiting_snapshot_.empty()) return;
  // Pushes for the current block may still be queued behind this transaction.
  if (ev.strict && first >= ctx.block_time()) return;
  EventSet tied;
  for (EventId i = 0; i < ev.det.size(); ++i) {
    if (ev.det[i] == first) tied.insert(i);
  }
  finalize(ctx, *select_winner(tied, ev.preferred), first);
}

void ChoiceContract::finalize(CallContext& ctx, EventId winner, Timestamp det) {
  winner_ = winner;
  winner_det_ = det;
  decided_at_ = ctx.block_time();
  ctx.write_update();
  ctx.emit(std::string(topic::kDecided), AbiWriter().word(winner).word(det).take());
  if (config_.variant.architecture == Architecture::PubSub) {
    for (const auto& [id, oracle] : config_.oracles) ctx.call(oracle, "unsubscribe", {});
  }
}

}  // namespace dcsim
