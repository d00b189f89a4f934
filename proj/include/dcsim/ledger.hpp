#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dcsim/abi.hpp"
#include "dcsim/gas.hpp"
#include "dcsim/transaction.hpp"

namespace dcsim {

class LedgerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Aborts the current transaction; the receipt records `what()` as the reason.
class Revert : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Chain;
struct Execution;

/// Handle a contract receives while executing: block data, gas metering,
/// logging and synchronous calls into other contracts.
class CallContext {
 public:
  Timestamp block_time() const;
  Address self() const { return self_; }
  /// Immediate caller: the transaction sender or the calling contract.
  Address caller() const { return caller_; }
  const GasSchedule& gas() const;

  void emit(std::string topic, Bytes payload);
  void write_new(std::size_t slots = 1);
  void write_update(std::size_t slots = 1);
  void read(std::size_t slots = 1);
  void copy_words(std::size_t words);

  /// Synchronous call; effects roll back with the enclosing transaction.
  Bytes call(Address target, std::string_view function, ByteView payload);

 private:
  friend class Chain;
  CallContext(Execution& exec, Address self, Address caller)
      : exec_(exec), self_(self), caller_(caller) {}

  Execution& exec_;
  Address self_;
  Address caller_;
};

class Contract {
 public:
  virtual ~Contract() = default;

  /// Deployment-cost key of this contract.
  virtual std::string kind() const = 0;
  /// Throws Revert (or any exception) to abort the transaction.
  virtual Bytes invoke(CallContext& ctx, std::string_view function, ByteView payload) = 0;
  /// Snapshot used to roll state back on revert.
  virtual std::unique_ptr<Contract> clone() const = 0;
};

/**
 * Deterministic single-owner ledger: one block per step, block timestamp equal
 * to block height. Transactions submitted before a step are mined in that
 * step in submission order; anything submitted while or after a block is mined
 * goes to a later block.
 */
class Chain {
 public:
  using BlockListener = std::function<void(const std::vector<Receipt>& block)>;

  explicit Chain(GasSchedule schedule = GasSchedule::defaults(), Timestamp genesis_height = 0);
  ~Chain();
  Chain(const Chain&) = delete;
  Chain& operator=(const Chain&) = delete;

  /// Registers the contract and charges its configured deployment cost.
  Address deploy(std::unique_ptr<Contract> contract);
  /// Fresh external account id (never collides with contract addresses).
  Address new_account();

  /// Queues `tx` for the block `delay` steps ahead (delay >= 1).
  void submit(Transaction tx, Timestamp delay = 1);
  /// Mines the next block and notifies listeners; returns its receipts.
  std::vector<Receipt> step();
  bool has_pending() const { return !pending_.empty(); }

  /// Read-only call outside any transaction; no gas, no logs, state untouched.
  Bytes view(Address target, std::string_view function, ByteView payload = {});

  void add_listener(BlockListener listener);

  Timestamp height() const { return height_; }
  const GasSchedule& schedule() const { return schedule_; }
  const std::vector<Receipt>& receipts() const { return receipts_; }
  bool has_contract(Address a) const { return contracts_.contains(a); }
  Contract& contract(Address a);
  const Contract& contract(Address a) const;
  template <typename T>
  T& contract_as(Address a) {
    auto* p = dynamic_cast<T*>(&contract(a));
    if (!p) throw LedgerError("contract at #" + std::to_string(a.value) + " has another type");
    return *p;
  }

  /// Deployment charge plus gas of every receipt addressed to `a`.
  std::uint64_t cumulative_gas(Address a) const;
  std::uint64_t deployment_gas() const { return deployment_gas_; }
  std::uint64_t operating_gas() const { return operating_gas_; }
  std::uint64_t deployment_gas(Address a) const;

 private:
  friend class CallContext;

  struct Pending {
    Transaction tx;
    Timestamp earliest;
  };

  Receipt execute(const Transaction& tx);
  Bytes invoke(Execution& exec, Address target, Address caller, std::string_view function,
               ByteView payload);

  GasSchedule schedule_;
  Timestamp height_;
  std::uint64_t next_contract_ = 1;
  std::uint64_t next_account_ = 1'000'001;
  std::map<Address, std::unique_ptr<Contract>> contracts_;
  std::map<Address, std::uint64_t> deploy_charge_;
  std::map<Address, std::uint64_t> cumulative_gas_;
  std::deque<Pending> pending_;
  std::vector<Receipt> receipts_;
  std::vector<BlockListener> listeners_;
  std::uint64_t deployment_gas_ = 0;
  std::uint64_t operating_gas_ = 0;
  bool mining_ = false;
};

}  // namespace dcsim
