#pragma once

// Off-chain halves of the oracles. A provider observes its external variable
// through update(), reacts to its oracle's log entries after every block, and
// talks back to the chain only by submitting transactions.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dcsim/expr.hpp"
#include "dcsim/history.hpp"
#include "dcsim/ledger.hpp"
#include "dcsim/variant.hpp"

namespace dcsim {

struct ProviderOptions {
  /// Blocks between observing a query or subscription and the answering
  /// transaction being mined.
  Timestamp latency = 1;
};

class OracleProvider {
 public:
  OracleProvider(Chain& chain, Address oracle, OracleVariant variant, std::string variable,
                 DataWord initial, ProviderOptions options);
  virtual ~OracleProvider() = default;
  OracleProvider(const OracleProvider&) = delete;
  OracleProvider& operator=(const OracleProvider&) = delete;

  /**
   * The external variable takes `value` at time `at`. Transactions caused by
   * the update are mined in block `at`, so `at` must be after the current
   * height and after the previous update.
   */
  void update(DataWord value, Timestamp at);

  Address oracle() const { return oracle_; }
  Address account() const { return account_; }
  const OracleVariant& variant() const { return variant_; }
  const std::string& variable() const { return variable_; }
  DataWord current() const { return history_.current(); }
  const ValueHistory& history() const { return history_; }

 protected:
  virtual void on_change(Timestamp at) = 0;
  virtual void on_log(const LogEntry& log, Timestamp mined_at) = 0;

  void send(Address to, std::string function, Bytes payload, Timestamp delay);
  Timestamp options_latency() const { return options_.latency; }
  void respond(Address to, std::string function, Bytes payload) {
    send(to, std::move(function), std::move(payload), options_.latency);
  }

  Chain& chain_;
  ValueHistory history_;

 private:
  void on_block(const std::vector<Receipt>& block);

  Address oracle_;
  Address account_;
  OracleVariant variant_;
  std::string variable_;
  ProviderOptions options_;
  std::optional<Timestamp> last_update_;
};

/// Storage and on-chain history: mirror every change into the contract.
class SyncOracleProvider final : public OracleProvider {
 public:
  using OracleProvider::OracleProvider;

 protected:
  void on_change(Timestamp at) override;
  void on_log(const LogEntry&, Timestamp) override {}
};

/// Request/response and off-chain history: answer logged queries.
class QueryOracleProvider final : public OracleProvider {
 public:
  using OracleProvider::OracleProvider;

 protected:
  void on_change(Timestamp) override {}
  void on_log(const LogEntry& log, Timestamp mined_at) override;
};

class PubSubOracleProvider final : public OracleProvider {
 public:
  using OracleProvider::OracleProvider;

  std::size_t active_subscribers() const;

 protected:
  void on_change(Timestamp at) override;
  void on_log(const LogEntry& log, Timestamp mined_at) override;

 private:
  struct Subscription {
    Address subscriber;
    std::optional<expr::Expr> condition;
    bool active = true;
    bool last_verdict = false;
  };

  void push(const Subscription& sub, DataWord value_or_ts, Timestamp delay);

  std::vector<Subscription> subs_;  // registration order
};

struct OracleInstance {
  Address contract;
  std::unique_ptr<OracleProvider> provider;
};

/// Deploys the contract half of `variant` and attaches its provider.
OracleInstance deploy_oracle(Chain& chain, const OracleVariant& variant, std::string variable,
                             DataWord initial = 0, ProviderOptions options = {});

}  // namespace dcsim
