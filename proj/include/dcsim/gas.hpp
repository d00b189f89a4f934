#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>

#include <json.hpp>

#include "dcsim/transaction.hpp"

namespace dcsim {

/**
 * Gas constants of the simulated ledger.
 *
 * The defaults follow public-chain magnitudes. `storage_read` and `word_copy`
 * are execution surcharges metered by contracts on top of gas_cost().
 */
struct GasSchedule {
  std::uint64_t tx_base = 21'000;
  std::uint64_t per_zero_byte = 4;
  std::uint64_t per_nonzero_byte = 16;
  std::uint64_t storage_write_new = 20'000;
  std::uint64_t storage_write_update = 5'000;
  std::uint64_t storage_read = 2'100;
  std::uint64_t word_copy = 3;
  std::uint64_t log_base = 375;
  std::uint64_t log_per_byte = 8;
  /// Keyed by contract kind, see oracle_kind()/choice_kind().
  std::map<std::string, std::uint64_t, std::less<>> deploy_per_contract;

  static GasSchedule defaults();

  std::uint64_t deploy_cost(std::string_view kind) const;
  void validate() const;
};

/// Defaults overridden by any subset of fields present in `doc`.
GasSchedule gas_schedule_from_json(const nlohmann::json& doc);
GasSchedule load_gas_schedule(const std::string& path);

std::uint64_t payload_gas(const GasSchedule& g, ByteView payload);
std::uint64_t intrinsic_gas(const GasSchedule& g, ByteView payload);
std::uint64_t log_gas(const GasSchedule& g, std::span<const LogEntry> logs);

/// tx_base + per-byte payload cost + storage terms + log terms.
std::uint64_t gas_cost(const GasSchedule& g, const Transaction& tx, std::size_t storage_writes_new,
                       std::size_t storage_writes_update, std::span<const LogEntry> logs);

}  // namespace dcsim
