#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dcsim/abi.hpp"
#include "dcsim/types.hpp"

namespace dcsim {

/// Contract address or external account on the simulated ledger.
struct Address {
  std::uint64_t value = 0;

  friend auto operator<=>(const Address&, const Address&) = default;
};

struct LogEntry {
  Address source;
  std::string topic;
  Bytes payload;  // word aligned

  friend bool operator==(const LogEntry&, const LogEntry&) = default;
};

struct Transaction {
  Address from;
  Address to;
  std::string function;
  Bytes payload;  // word aligned
  Timestamp submitted_at = 0;

  friend bool operator==(const Transaction&, const Transaction&) = default;
};

struct Receipt {
  Transaction tx;
  Timestamp mined_at = 0;
  std::uint64_t gas_used = 0;
  std::vector<LogEntry> logs;
  std::optional<std::string> revert_reason;

  bool ok() const { return !revert_reason.has_value(); }
  friend bool operator==(const Receipt&, const Receipt&) = default;
};

}  // namespace dcsim
