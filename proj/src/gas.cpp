#include "dcsim/gas.hpp"

#include <algorithm>
#include <array>
#include <fstream>

#include <json.hpp>

#include "dcsim/types.hpp"
#include "dcsim/variant.hpp"

namespace dcsim {

GasSchedule GasSchedule::defaults() {
  GasSchedule g;
  // Average deployment costs observed on a private Ethereum node, in gas.
  const std::pair<const char*, std::array<std::uint64_t, 4>> table[] = {
      // oracle reg, oracle cond, choice reg, choice cond
      {"storage", {276'000, 408'000, 1'431'000, 1'406'000}},
      {"req-res", {281'000, 281'000, 1'502'000, 1'477'000}},
      {"on-chain-history", {467'000, 552'000, 1'520'000, 1'386'000}},
      {"off-chain-history", {281'000, 281'000, 1'592'000, 1'448'000}},
      {"pub-sub", {281'000, 281'000, 1'577'000, 1'490'000}},
  };
  for (const auto& [arch, costs] : table) {
    const std::string a(arch);
    g.deploy_per_contract[a + "-oracle"] = costs[0];
    g.deploy_per_contract[a + "-cond-oracle"] = costs[1];
    g.deploy_per_contract[a + "-choice"] = costs[2];
    g.deploy_per_contract[a + "-cond-choice"] = costs[3];
  }
  return g;
}

std::uint64_t GasSchedule::deploy_cost(std::string_view kind) const {
  const auto it = deploy_per_contract.find(kind);
  if (it == deploy_per_contract.end()) {
    throw ValidationError("no deployment cost configured for '" + std::string(kind) + "'");
  }
  return it->second;
}

void GasSchedule::validate() const {
  const std::pair<const char*, std::uint64_t> positive[] = {
      {"tx_base", tx_base},
      {"per_nonzero_byte", per_nonzero_byte},
      {"storage_write_new", storage_write_new},
      {"storage_write_update", storage_write_update},
      {"storage_read", storage_read},
      {"word_copy", word_copy},
      {"log_base", log_base},
      {"log_per_byte", log_per_byte},
  };
  for (const auto& [name, value] : positive) {
    if (value == 0) throw ValidationError(std::string("gas constant ") + name + " must be > 0");
  }
  for (const auto& [kind, value] : deploy_per_contract) {
    if (value == 0) throw ValidationError("deployment cost for " + kind + " must be > 0");
  }
}

GasSchedule gas_schedule_from_json(const nlohmann::json& doc) {
  GasSchedule g = GasSchedule::defaults();
  if (!doc.is_object()) throw ValidationError("gas schedule must be a JSON object");
  const std::pair<const char*, std::uint64_t GasSchedule::*> fields[] = {
      {"tx_base", &GasSchedule::tx_base},
      {"per_zero_byte", &GasSchedule::per_zero_byte},
      {"per_nonzero_byte", &GasSchedule::per_nonzero_byte},
      {"storage_write_new", &GasSchedule::storage_write_new},
      {"storage_write_update", &GasSchedule::storage_write_update},
      {"storage_read", &GasSchedule::storage_read},
      {"word_copy", &GasSchedule::word_copy},
      {"log_base", &GasSchedule::log_base},
      {"log_per_byte", &GasSchedule::log_per_byte},
  };
  for (const auto& [key, value] : doc.items()) {
    if (key == "deploy_per_contract") {
      for (const auto& [kind, cost] : value.items()) {
        if (!g.deploy_per_contract.contains(kind)) {
          throw ValidationError("unknown contract kind '" + kind + "' in gas schedule");
        }
        if (!cost.is_number_integer() || cost.get<std::int64_t>() < 0) {
          throw ValidationError("deployment cost for '" + kind + "' must be an unsigned integer");
        }
        g.deploy_per_contract[kind] = cost.get<std::uint64_t>();
      }
      continue;
    }
    const auto* field = std::find_if(std::begin(fields), std::end(fields),
                                     [&](const auto& f) { return key == f.first; });
    if (field == std::end(fields)) throw ValidationError("unknown gas schedule field '" + key + "'");
    if (!value.is_number_integer() || value.get<std::int64_t>() < 0) {
      throw ValidationError("gas schedule field '" + key + "' must be an unsigned integer");
    }
    g.*(field->second) = value.get<std::uint64_t>();
  }
  g.validate();
  return g;
}

GasSchedule load_gas_schedule(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open gas schedule '" + path + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("malformed gas schedule '" + path + "': " + e.what());
  }
  return gas_schedule_from_json(doc);
}

std::uint64_t payload_gas(const GasSchedule& g, ByteView payload) {
  const auto zeros = static_cast<std::uint64_t>(std::count(payload.begin(), payload.end(), 0));
  return zeros * g.per_zero_byte + (payload.size() - zeros) * g.per_nonzero_byte;
}

std::uint64_t intrinsic_gas(const GasSchedule& g, ByteView payload) {
  return g.tx_base + payload_gas(g, payload);
}

std::uint64_t log_gas(const GasSchedule& g, std::span<const LogEntry> logs) {
  std::uint64_t total = 0;
  for (const auto& log : logs) total += g.log_base + g.log_per_byte * log.payload.size();
  return total;
}

std::uint64_t gas_cost(const GasSchedule& g, const Transaction& tx, std::size_t storage_writes_new,
                       std::size_t storage_writes_update, std::span<const LogEntry> logs) {
  return intrinsic_gas(g, tx.payload) + storage_writes_new * g.storage_write_new +
         storage_writes_update * g.storage_write_update + log_gas(g, logs);
}

}  // namespace dcsim
