#include "dcsim/variant.hpp"

#include "dcsim/types.hpp"

namespace dcsim {

std::vector<OracleVariant> all_variants() {
  std::vector<OracleVariant> out;
  for (auto a : kArchitectures) {
    out.push_back({a, false});
    out.push_back({a, true});
  }
  return out;
}

std::string_view to_string(Architecture a) {
  switch (a) {
    case Architecture::Storage: return "storage";
    case Architecture::RequestResponse: return "req-res";
    case Architecture::OnChainHistory: return "on-chain-history";
    case Architecture::OffChainHistory: return "off-chain-history";
    case Architecture::PubSub: return "pub-sub";
  }
  return "?";
}

std::string_view to_string(Semantics s) {
  return s == Semantics::ContinualBaseline ? "continual" : "transaction-driven";
}

std::string to_string(const OracleVariant& v) {
  std::string out(to_string(v.architecture));
  if (v.conditional) out += "-cond";
  return out;
}

Architecture parse_architecture(std::string_view name) {
  for (auto a : kArchitectures) {
    if (to_string(a) == name) return a;
  }
  throw ValidationError("unknown oracle architecture '" + std::string(name) + "'");
}

Semantics parse_semantics(std::string_view name) {
  if (name == "continual") return Semantics::ContinualBaseline;
  if (name == "transaction-driven") return Semantics::TransactionDriven;
  throw ValidationError("unknown semantics '" + std::string(name) + "'");
}

OracleVariant parse_variant(std::string_view name) {
  constexpr std::string_view kSuffix = "-cond";
  if (name.size() > kSuffix.size() && name.ends_with(kSuffix)) {
    return {parse_architecture(name.substr(0, name.size() - kSuffix.size())), true};
  }
  return {parse_architecture(name), false};
}

std::string oracle_kind(const OracleVariant& v) { return to_string(v) + "-oracle"; }
std::string choice_kind(const OracleVariant& v) { return to_string(v) + "-choice"; }

}  // namespace dcsim
