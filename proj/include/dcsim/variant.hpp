#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

namespace dcsim {

enum class Architecture { Storage, RequestResponse, OnChainHistory, OffChainHistory, PubSub };

enum class Semantics { ContinualBaseline, TransactionDriven };

struct OracleVariant {
  Architecture architecture = Architecture::Storage;
  bool conditional = false;

  friend bool operator==(const OracleVariant&, const OracleVariant&) = default;
  friend auto operator<=>(const OracleVariant&, const OracleVariant&) = default;
};

inline constexpr std::array<Architecture, 5> kArchitectures = {
    Architecture::Storage, Architecture::RequestResponse, Architecture::OnChainHistory,
    Architecture::OffChainHistory, Architecture::PubSub};

/// Storage and on-chain history answer queries inside the calling transaction.
constexpr bool is_synchronous(Architecture a) {
  return a == Architecture::Storage || a == Architecture::OnChainHistory;
}

constexpr bool is_history(Architecture a) {
  return a == Architecture::OnChainHistory || a == Architecture::OffChainHistory;
}

/// Storage and request/response only expose the current value, which is not
/// enough to rank events after the fact; they run the baseline semantics.
constexpr Semantics default_semantics(Architecture a) {
  return a == Architecture::Storage || a == Architecture::RequestResponse
             ? Semantics::ContinualBaseline
             : Semantics::TransactionDriven;
}

/// All ten variants, regular before conditional per architecture.
std::vector<OracleVariant> all_variants();

std::string_view to_string(Architecture a);
std::string_view to_string(Semantics s);
/// e.g. "storage", "pub-sub-cond".
std::string to_string(const OracleVariant& v);

/// Throws ValidationError on unknown names.
Architecture parse_architecture(std::string_view name);
Semantics parse_semantics(std::string_view name);
OracleVariant parse_variant(std::string_view name);

/// Deployment-cost keys, e.g. "storage-oracle", "pub-sub-cond-choice".
std::string oracle_kind(const OracleVariant& v);
std::string choice_kind(const OracleVariant& v);

}  // namespace dcsim
