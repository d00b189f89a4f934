#include "dcsim/providers.hpp"

#include "dcsim/oracles.hpp"

namespace dcsim {

OracleProvider::OracleProvider(Chain& chain, Address oracle, OracleVariant variant,
                               std::string variable, DataWord initial, ProviderOptions options)
    : chain_(chain),
      history_(initial),
      oracle_(oracle),
      account_(chain.new_account()),
      variant_(variant),
      variable_(std::move(variable)),
      options_(options) {
  if (options_.latency == 0) throw ValidationError("provider latency must be at least one block");
  chain_.add_listener([this](const std::vector<Receipt>& block) { on_block(block); });
}

void OracleProvider::update(DataWord value, Timestamp at) {
  if (at <= chain_.height()) {
    throw ContractViolation("update at t=" + std::to_string(at) + " targets an already mined block");
  }
  if (last_update_ && at <= *last_update_) {
    throw ContractViolation("non-monotone update at t=" + std::to_string(at) + " after t=" +
                            std::to_string(*last_update_));
  }
  last_update_ = at;
  if (history_.record(at, value)) on_change(at);
}

void OracleProvider::send(Address to, std::string function, Bytes payload, Timestamp delay) {
  chain_.submit(Transaction{account_, to, std::move(function), std::move(payload), 0}, delay);
}

void OracleProvider::on_block(const std::vector<Receipt>& block) {
  for (const auto& receipt : block) {
    if (!receipt.ok()) continue;
    for (const auto& log : receipt.logs) {
      if (log.source == oracle_) on_log(log, receipt.mined_at);
    }
  }
}

// ---- storage / on-chain history ----

void SyncOracleProvider::on_change(Timestamp at) {
  send(oracle(), "set", AbiWriter().word(current()).take(), at - chain_.height());
}

// ---- request/response / off-chain history ----

void QueryOracleProvider::on_log(const LogEntry& log, Timestamp) {
  if (log.topic != topic::kQuery) return;
  AbiReader r(log.payload);
  const Address consumer{r.word()};
  const auto corr = r.word();

  AbiWriter out;
  out.word(corr);
  if (is_history(variant().architecture)) {
    const auto slice = history_.slice(r.word());
    if (variant().conditional) {
      out.word(earliest_true(slice, parse_condition(r.text(), variable()), variable()));
    } else {
      encode_history(out, slice);
    }
  } else if (variant().conditional) {
    out.boolean(expr::eval_single(parse_condition(r.text(), variable()), variable(), current()));
  } else {
    out.word(current());
  }
  respond(consumer, "oracle_callback", out.take());
}

// ---- publish/subscribe ----

std::size_t PubSubOracleProvider::active_subscribers() const {
  std::size_t n = 0;
  for (const auto& s : subs_) n += s.active ? 1 : 0;
  return n;
}

void PubSubOracleProvider::push(const Subscription& sub, DataWord value_or_ts, Timestamp delay) {
  send(sub.subscriber, "push", AbiWriter().word(oracle().value).word(value_or_ts).take(), delay);
}

void PubSubOracleProvider::on_change(Timestamp at) {
  const Timestamp delay = at - chain_.height();
  for (auto& sub : subs_) {
    if (!sub.active) continue;
    if (!sub.condition) {
      push(sub, current(), delay);
      continue;
    }
    const bool verdict = expr::eval_single(*sub.condition, variable(), current());
    if (verdict && !sub.last_verdict) push(sub, at, delay);
    sub.last_verdict = verdict;
  }
}

void PubSubOracleProvider::on_log(const LogEntry& log, Timestamp mined_at) {
  AbiReader r(log.payload);
  const Address subscriber{r.word()};
  if (log.topic == topic::kUnsubscribe) {
    for (auto& sub : subs_) {
      if (sub.subscriber == subscriber) sub.active = false;
    }
    return;
  }
  if (log.topic != topic::kSubscribe) return;

  Subscription sub{subscriber, std::nullopt, true, false};
  if (variant().conditional) sub.condition = parse_condition(r.text(), variable());

  // Answer immediately so the subscriber has no gap: the current value, or a
  // signal stamped with the subscription's block. A condition that does not
  // hold yet is answered with TOP so the subscriber knows the snapshot is in.
  if (sub.condition) {
    sub.last_verdict = expr::eval_single(*sub.condition, variable(), current());
    push(sub, sub.last_verdict ? mined_at : kTop, options_latency());
  } else {
    push(sub, current(), options_latency());
  }

  for (auto& existing : subs_) {
    if (existing.subscriber == subscriber) {
      existing = std::move(sub);
      return;
    }
  }
  subs_.push_back(std::move(sub));
}

// ---- factory ----

OracleInstance deploy_oracle(Chain& chain, const OracleVariant& variant, std::string variable,
                             DataWord initial, ProviderOptions options) {
  OracleInstance out;
  switch (variant.architecture) {
    case Architecture::Storage:
      out.contract = chain.deploy(std::make_unique<StorageOracle>(variant.conditional, variable, initial));
      out.provider = std::make_unique<SyncOracleProvider>(chain, out.contract, variant,
                                                          std::move(variable), initial, options);
      break;
    case Architecture::OnChainHistory:
      out.contract =
          chain.deploy(std::make_unique<OnChainHistoryOracle>(variant.conditional, variable, initial));
      out.provider = std::make_unique<SyncOracleProvider>(chain, out.contract, variant,
                                                          std::move(variable), initial, options);
      break;
    case Architecture::RequestResponse:
    case Architecture::OffChainHistory:
      out.contract = chain.deploy(std::make_unique<AsyncQueryOracle>(variant, variable));
      out.provider = std::make_unique<QueryOracleProvider>(chain, out.contract, variant,
                                                           std::move(variable), initial, options);
      break;
    case Architecture::PubSub:
      out.contract = chain.deploy(std::make_unique<PubSubOracle>(variant.conditional, variable));
      out.provider = std::make_unique<PubSubOracleProvider>(chain, out.contract, variant,
                                                            std::move(variable), initial, options);
      break;
  }
  return out;
}

}  // namespace dcsim
