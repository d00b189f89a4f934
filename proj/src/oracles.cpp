#include "dcsim/oracles.hpp"

#include <bit>

namespace dcsim {

Bytes encode_query_params(const OracleVariant& v, Timestamp from_ts, const expr::Expr& condition) {
  AbiWriter w;
  if (is_history(v.architecture)) w.word(from_ts);
  if (v.conditional) w.text(expr::render(condition));
  return w.take();
}

expr::Expr parse_condition(std::string_view text, std::string_view variable) {
  try {
    auto e = expr::parse(text);
    for (const auto& name : expr::variables(e)) {
      if (name != variable) throw Revert("oracle does not provide variable '" + name + "'");
    }
    return e;
  } catch (const expr::ParseError& err) {
    throw Revert(std::string("malformed condition: ") + err.what());
  }
}

namespace {

[[noreturn]] void unknown_function(std::string_view function) {
  throw Revert("unknown function '" + std::string(function) + "'");
}

void require_end(const AbiReader& r) {
  if (!r.at_end()) throw Revert("trailing payload");
}

// Probes charged for locating the entry in effect at a timestamp.
std::size_t search_probes(std::size_t n) { return static_cast<std::size_t>(std::bit_width(n)); }

}  // namespace

// ---- storage ----

StorageOracle::StorageOracle(bool conditional, std::string variable, DataWord initial)
    : OracleContract({Architecture::Storage, conditional}, std::move(variable)), value_(initial) {}

Bytes StorageOracle::invoke(CallContext& ctx, std::string_view function, ByteView payload) {
  AbiReader r(payload);
  if (function == "set") {
    value_ = r.word();
    require_end(r);
    ctx.write_update();
    return {};
  }
  if (function == "query") {
    std::optional<expr::Expr> condition;
    if (variant_.conditional) condition = parse_condition(r.text(), variable_);
    require_end(r);
    ctx.read();
    AbiWriter w;
    if (condition) {
      w.boolean(expr::eval_single(*condition, variable_, value_));
    } else {
      w.word(value_);
    }
    return w.take();
  }
  if (function == "request" || function == "subscribe") {
    throw Revert("storage oracle is synchronous; use query");
  }
  unknown_function(function);
}

// ---- on-chain history ----

OnChainHistoryOracle::OnChainHistoryOracle(bool conditional, std::string variable, DataWord initial)
    : OracleContract({Architecture::OnChainHistory, conditional}, std::move(variable)),
      history_(initial) {}

Bytes OnChainHistoryOracle::invoke(CallContext& ctx, std::string_view function, ByteView payload) {
  AbiReader r(payload);
  if (function == "set") {
    const DataWord value = r.word();
    require_end(r);
    ctx.read();  // current tail
    if (history_.last_change() >= ctx.block_time()) throw Revert("one update per block");
    if (history_.record(ctx.block_time(), value)) {
      ctx.write_new();     // packed (ts, value) slot
      ctx.write_update();  // length
    }
    return {};
  }
  if (function == "query") {
    const Timestamp from = r.word();
    std::optional<expr::Expr> condition;
    if (variant_.conditional) condition = parse_condition(r.text(), variable_);
    require_end(r);

    ctx.read(search_probes(history_.entries().size()));
    const auto slice = history_.slice(from);
    AbiWriter w;
    if (condition) {
      const Timestamp hit = earliest_true(slice, *condition, variable_);
      std::size_t scanned = slice.size();
      if (hit != kTop) {
        scanned = 1;
        while (slice[scanned - 1].at != hit) ++scanned;
      }
      ctx.read(scanned);
      w.word(hit);
    } else {
      ctx.read(slice.size());
      encode_history(w, slice);
    }
    return w.take();
  }
  if (function == "request" || function == "subscribe") {
    throw Revert("on-chain history oracle is synchronous; use query");
  }
  unknown_function(function);
}

// ---- request/response, off-chain history ----

AsyncQueryOracle::AsyncQueryOracle(OracleVariant variant, std::string variable)
    : OracleContract(variant, std::move(variable)) {
  if (variant.architecture != Architecture::RequestResponse &&
      variant.architecture != Architecture::OffChainHistory) {
    throw ValidationError("AsyncQueryOracle only serves request/response and off-chain history");
  }
}

Bytes AsyncQueryOracle::invoke(CallContext& ctx, std::string_view function, ByteView payload) {
  if (function == "request") {
    AbiReader r(payload);
    const auto corr = r.word();
    const auto params = r.rest();
    // Validate eagerly so that malformed queries revert in the consumer's
    // transaction instead of being silently dropped off-chain.
    AbiReader check(params);
    if (is_history(variant_.architecture)) check.word();
    if (variant_.conditional) parse_condition(check.text(), variable_);
    require_end(check);

    AbiWriter log;
    log.word(ctx.caller().value).word(corr).raw(params);
    ctx.emit(std::string(topic::kQuery), log.take());
    return {};
  }
  if (function == "query") throw Revert("oracle is asynchronous; use request");
  if (function == "subscribe") throw Revert("oracle does not support subscriptions");
  unknown_function(function);
}

// ---- publish/subscribe ----

PubSubOracle::PubSubOracle(bool conditional, std::string variable)
    : OracleContract({Architecture::PubSub, conditional}, std::move(variable)) {}

bool PubSubOracle::is_subscribed(Address subscriber) const {
  const auto it = subscribers_.find(subscriber);
  return it != subscribers_.end() && it->second;
}

Bytes PubSubOracle::invoke(CallContext& ctx, std::string_view function, ByteView payload) {
  AbiReader r(payload);
  if (function == "subscribe") {
    const Address subscriber = ctx.caller();
    AbiWriter log;
    log.word(subscriber.value);
    if (variant_.conditional) {
      const auto text = r.text();
      parse_condition(text, variable_);
      log.text(text);
    }
    require_end(r);
    ctx.read();
    const auto it = subscribers_.find(subscriber);
    if (it != subscribers_.end() && it->second) throw Revert("duplicate subscription");
    if (it == subscribers_.end()) {
      ctx.write_new();
    } else {
      ctx.write_update();
    }
    subscribers_[subscriber] = true;
    ctx.emit(std::string(topic::kSubscribe), log.take());
    return {};
  }
  if (function == "unsubscribe") {
    require_end(r);
    const Address subscriber = ctx.caller();
    ctx.read();
    if (!is_subscribed(subscriber)) throw Revert("not subscribed");
    subscribers_[subscriber] = false;
    ctx.write_update();
    ctx.emit(std::string(topic::kUnsubscribe), AbiWriter().word(subscriber.value).take());
    return {};
  }
  if (function == "query" || function == "request") {
    throw Revert("publish/subscribe oracle only supports subscriptions");
  }
  unknown_function(function);
}

}  // namespace dcsim
