#pragma once

// On-chain halves of the oracle architectures. Every oracle observes exactly
// one external variable; conditional variants evaluate consumer-supplied
// expressions over it.
//
// Interfaces (words are 32 bytes, see abi.hpp):
//
//   variant              params                result
//   storage / req-res    -                     value
//     conditional        expr                  bool
//   history              from_ts               (ts, value)* as length + pairs
//     conditional        from_ts, expr         earliest ts or TOP
//   pub-sub              -                     pushes of value
//     conditional        expr                  signal carrying ts
//
// Synchronous oracles answer `query(params)` inline. Asynchronous ones accept
// `request(corr, params)` and log a "Query" entry that their provider answers
// with a callback transaction `oracle_callback(corr, result)`. Pub/sub oracles
// accept `subscribe(params)` / `unsubscribe()` and their provider sends
// `push(oracle, value_or_ts)` transactions to subscribers.

#include <map>
#include <memory>
#include <string>

#include "dcsim/abi.hpp"
#include "dcsim/expr.hpp"
#include "dcsim/history.hpp"
#include "dcsim/ledger.hpp"
#include "dcsim/variant.hpp"

namespace dcsim {

namespace topic {
inline constexpr std::string_view kQuery = "Query";
inline constexpr std::string_view kSubscribe = "Subscribe";
inline constexpr std::string_view kUnsubscribe = "Unsubscribe";
}  // namespace topic

/// Consumer-side parameter encoding for `v`.
Bytes encode_query_params(const OracleVariant& v, Timestamp from_ts, const expr::Expr& condition);

/// Parses an expression received as a parameter and checks that it only
/// references `variable`; throws Revert otherwise.
expr::Expr parse_condition(std::string_view text, std::string_view variable);

class OracleContract : public Contract {
 public:
  OracleContract(OracleVariant variant, std::string variable)
      : variant_(variant), variable_(std::move(variable)) {}

  std::string kind() const override { return oracle_kind(variant_); }
  const OracleVariant& variant() const { return variant_; }
  const std::string& variable() const { return variable_; }

 protected:
  OracleVariant variant_;
  std::string variable_;
};

/// Storage oracle: one overwritten slot.
class StorageOracle final : public OracleContract {
 public:
  StorageOracle(bool conditional, std::string variable, DataWord initial = 0);

  Bytes invoke(CallContext& ctx, std::string_view function, ByteView payload) override;
  std::unique_ptr<Contract> clone() const override { return std::make_unique<StorageOracle>(*this); }

  DataWord value() const { return value_; }

 private:
  DataWord value_;
};

/// On-chain history oracle: appends every change with its block timestamp.
class OnChainHistoryOracle final : public OracleContract {
 public:
  OnChainHistoryOracle(bool conditional, std::string variable, DataWord initial = 0);

  Bytes invoke(CallContext& ctx, std::string_view function, ByteView payload) override;
  std::unique_ptr<Contract> clone() const override {
    return std::make_unique<OnChainHistoryOracle>(*this);
  }

  const ValueHistory& history() const { return history_; }

 private:
  ValueHistory history_;
};

/// Request/response and off-chain history oracles: stateless query relays.
class AsyncQueryOracle final : public OracleContract {
 public:
  AsyncQueryOracle(OracleVariant variant, std::string variable);

  Bytes invoke(CallContext& ctx, std::string_view function, ByteView payload) override;
  std::unique_ptr<Contract> clone() const override { return std::make_unique<AsyncQueryOracle>(*this); }
};

class PubSubOracle final : public OracleContract {
 public:
  PubSubOracle(bool conditional, std::string variable);

  Bytes invoke(CallContext& ctx, std::string_view function, ByteView payload) override;
  std::unique_ptr<Contract> clone() const override { return std::make_unique<PubSubOracle>(*this); }

  bool is_subscribed(Address subscriber) const;

 private:
  std::map<Address, bool> subscribers_;  // address -> active
};

}  // namespace dcsim
