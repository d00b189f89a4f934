#include "dcsim/ledger.hpp"

namespace dcsim {

struct Execution {
  Chain& chain;
  Timestamp block_time;
  std::size_t writes_new = 0;
  std::size_t writes_update = 0;
  std::size_t reads = 0;
  std::size_t copied_words = 0;
  std::vector<LogEntry> logs;
  // First-touch snapshots of every contract entered by this transaction.
  std::map<Address, std::unique_ptr<Contract>> snapshots;
  std::size_t depth = 0;
};

namespace {

constexpr std::size_t kMaxCallDepth = 16;
constexpr std::uint64_t kFirstAccount = 1'000'001;

void require_aligned(ByteView payload, const char* what) {
  if (payload.size() % kWordSize != 0) {
    throw LedgerError(std::string(what) + " payload is not word aligned");
  }
}

}  // namespace

// ---- CallContext ----

Timestamp CallContext::block_time() const { return exec_.block_time; }
const GasSchedule& CallContext::gas() const { return exec_.chain.schedule(); }

void CallContext::emit(std::string topic, Bytes payload) {
  require_aligned(payload, "log");
  exec_.logs.push_back({self_, std::move(topic), std::move(payload)});
}

void CallContext::write_new(std::size_t slots) { exec_.writes_new += slots; }
void CallContext::write_update(std::size_t slots) { exec_.writes_update += slots; }
void CallContext::read(std::size_t slots) { exec_.reads += slots; }
void CallContext::copy_words(std::size_t words) { exec_.copied_words += words; }

Bytes CallContext::call(Address target, std::string_view function, ByteView payload) {
  require_aligned(payload, "call");
  // Arguments and return data both cross the call boundary.
  copy_words(payload.size() / kWordSize);
  Bytes result = exec_.chain.invoke(exec_, target, self_, function, payload);
  copy_words(result.size() / kWordSize);
  return result;
}

// ---- Chain ----

Chain::Chain(GasSchedule schedule, Timestamp genesis_height)
    : schedule_(std::move(schedule)), height_(genesis_height) {
  schedule_.validate();
}

Chain::~Chain() = default;

Address Chain::deploy(std::unique_ptr<Contract> contract) {
  if (!contract) throw LedgerError("cannot deploy a null contract");
  const std::uint64_t cost = schedule_.deploy_cost(contract->kind());
  const Address addr{next_contract_++};
  contracts_.emplace(addr, std::move(contract));
  deploy_charge_[addr] = cost;
  cumulative_gas_[addr] += cost;
  deployment_gas_ += cost;
  return addr;
}

Address Chain::new_account() { return Address{next_account_++}; }

void Chain::submit(Transaction tx, Timestamp delay) {
  // Transactions to external accounts are accepted and revert when mined.
  const bool account = tx.to.value >= kFirstAccount && tx.to.value < next_account_;
  if (!contracts_.contains(tx.to) && !account) {
    throw LedgerError("unknown address #" + std::to_string(tx.to.value));
  }
  require_aligned(tx.payload, "transaction");
  if (delay == 0) throw LedgerError("transactions cannot join an already mined block");
  tx.submitted_at = height_;
  pending_.push_back({std::move(tx), height_ + delay});
}

std::vector<Receipt> Chain::step() {
  if (mining_) throw LedgerError("re-entrant step");
  if (height_ >= kTop - 1) throw SimulationError("block height overflow");
  ++height_;

  // Snapshot the eligible set first: anything submitted during execution or by
  // listeners lands in a later block.
  std::vector<Transaction> batch;
  std::deque<Pending> deferred;
  for (auto& p : pending_) {
    if (p.earliest <= height_) {
      batch.push_back(std::move(p.tx));
    } else {
      deferred.push_back(std::move(p));
    }
  }
  pending_ = std::move(deferred);

  std::vector<Receipt> block;
  block.reserve(batch.size());
  mining_ = true;
  for (const auto& tx : batch) block.push_back(execute(tx));
  mining_ = false;

  receipts_.insert(receipts_.end(), block.begin(), block.end());
  for (const auto& listener : listeners_) listener(block);
  return block;
}

Receipt Chain::execute(const Transaction& tx) {
  Execution exec{*this, height_};
  Receipt receipt{tx, height_, 0, {}, std::nullopt};
  try {
    invoke(exec, tx.to, tx.from, tx.function, tx.payload);
    receipt.logs = std::move(exec.logs);
    receipt.gas_used =
        gas_cost(schedule_, tx, exec.writes_new, exec.writes_update, receipt.logs) +
        exec.reads * schedule_.storage_read + exec.copied_words * schedule_.word_copy;
  } catch (const std::exception& e) {
    for (auto& [addr, snapshot] : exec.snapshots) contracts_[addr] = std::move(snapshot);
    receipt.revert_reason = e.what();
    receipt.gas_used = intrinsic_gas(schedule_, tx.payload);
  }
  cumulative_gas_[tx.to] += receipt.gas_used;
  operating_gas_ += receipt.gas_used;
  return receipt;
}

Bytes Chain::invoke(Execution& exec, Address target, Address caller, std::string_view function,
                    ByteView payload) {
  const auto it = contracts_.find(target);
  if (it == contracts_.end()) throw Revert("call to missing contract #" + std::to_string(target.value));
  if (exec.depth >= kMaxCallDepth) throw Revert("call depth exceeded");
  if (!exec.snapshots.contains(target)) exec.snapshots.emplace(target, it->second->clone());

  CallContext ctx(exec, target, caller);
  ++exec.depth;
  Bytes out = it->second->invoke(ctx, function, payload);
  --exec.depth;
  return out;
}

Bytes Chain::view(Address target, std::string_view function, ByteView payload) {
  Execution exec{*this, height_};
  Bytes out;
  try {
    out = invoke(exec, target, Address{}, function, payload);
  } catch (...) {
    for (auto& [addr, snapshot] : exec.snapshots) contracts_[addr] = std::move(snapshot);
    throw;
  }
  for (auto& [addr, snapshot] : exec.snapshots) contracts_[addr] = std::move(snapshot);
  return out;
}

void Chain::add_listener(BlockListener listener) { listeners_.push_back(std::move(listener)); }

Contract& Chain::contract(Address a) {
  const auto it = contracts_.find(a);
  if (it == contracts_.end()) throw LedgerError("no contract deployed at #" + std::to_string(a.value));
  return *it->second;
}

const Contract& Chain::contract(Address a) const {
  const auto it = contracts_.find(a);
  if (it == contracts_.end()) throw LedgerError("no contract deployed at #" + std::to_string(a.value));
  return *it->second;
}

std::uint64_t Chain::cumulative_gas(Address a) const {
  const auto it = cumulative_gas_.find(a);
  return it == cumulative_gas_.end() ? 0 : it->second;
}

std::uint64_t Chain::deployment_gas(Address a) const {
  const auto it = deploy_charge_.find(a);
  return it == deploy_charge_.end() ? 0 : it->second;
}

}  // namespace dcsim
