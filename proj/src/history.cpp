#include "dcsim/history.hpp"

#include <algorithm>

namespace dcsim {

bool ValueHistory::record(Timestamp at, DataWord value) {
  if (at <= entries_.back().at) {
    throw ContractViolation("history update at t=" + std::to_string(at) +
                            " is not after t=" + std::to_string(entries_.back().at));
  }
  if (value == entries_.back().value) return false;
  entries_.push_back({at, value});
  return true;
}

std::size_t ValueHistory::index_at(Timestamp t) const {
  const auto it = std::upper_bound(entries_.begin(), entries_.end(), t,
                                   [](Timestamp v, const HistoryEntry& e) { return v < e.at; });
  return static_cast<std::size_t>(it - entries_.begin()) - 1;
}

std::vector<HistoryEntry> ValueHistory::slice(Timestamp from) const {
  const std::size_t first = index_at(from);
  std::vector<HistoryEntry> out(entries_.begin() + static_cast<std::ptrdiff_t>(first), entries_.end());
  out.front().at = from;
  return out;
}

Timestamp earliest_true(std::span<const HistoryEntry> slice, const expr::Expr& condition,
                        std::string_view variable) {
  for (const auto& e : slice) {
    if (expr::eval_single(condition, variable, e.value)) return e.at;
  }
  return kTop;
}

void encode_history(AbiWriter& w, std::span<const HistoryEntry> entries) {
  w.word(entries.size());
  for (const auto& e : entries) w.word(e.at).word(e.value);
}

std::vector<HistoryEntry> decode_history(AbiReader& r) {
  const auto n = r.word();
  if (n > r.rest().size() / (2 * kWordSize)) throw DecodeError("history length exceeds payload");
  std::vector<HistoryEntry> out;
  out.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    const auto at = r.word();
    const auto value = r.word();
    if (!out.empty() && at <= out.back().at) throw DecodeError("history not strictly increasing");
    out.push_back({at, value});
  }
  return out;
}

}  // namespace dcsim
