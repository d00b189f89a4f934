#pragma once

#include <span>
#include <string>
#include <vector>

#include "dcsim/abi.hpp"
#include "dcsim/expr.hpp"
#include "dcsim/types.hpp"

namespace dcsim {

struct HistoryEntry {
  Timestamp at = 0;
  DataWord value = 0;

  friend bool operator==(const HistoryEntry&, const HistoryEntry&) = default;
};

/**
 * Change-point history of one external variable, read as a step function:
 * the value of entry i holds on [at_i, at_{i+1}). Starts with the initial
 * value at time 0.
 */
class ValueHistory {
 public:
  explicit ValueHistory(DataWord initial = 0) : entries_{{0, initial}} {}

  /// Appends unless `value` equals the current one; `at` must be strictly
  /// after the last recorded change. Returns whether an entry was appended.
  bool record(Timestamp at, DataWord value);

  DataWord current() const { return entries_.back().value; }
  Timestamp last_change() const { return entries_.back().at; }
  const std::vector<HistoryEntry>& entries() const { return entries_; }

  /// Index of the entry in effect at `t`.
  std::size_t index_at(Timestamp t) const;

  /// The step function restricted to [from, inf): the entry in effect at
  /// `from` (re-stamped to `from`) followed by every later change.
  std::vector<HistoryEntry> slice(Timestamp from) const;

 private:
  std::vector<HistoryEntry> entries_;
};

/// Earliest `at` in a slice whose value satisfies `condition`, or kTop.
Timestamp earliest_true(std::span<const HistoryEntry> slice, const expr::Expr& condition,
                        std::string_view variable);

void encode_history(AbiWriter& w, std::span<const HistoryEntry> entries);
std::vector<HistoryEntry> decode_history(AbiReader& r);

}  // namespace dcsim
