#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dcsim/types.hpp"

namespace dcsim {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

inline constexpr std::size_t kWordSize = 32;

class DecodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Appends 32-byte words: integers big-endian in the low-order bytes, text as
/// a length word followed by its bytes zero-padded to the word boundary.
class AbiWriter {
 public:
  AbiWriter& word(std::uint64_t value);
  AbiWriter& boolean(bool value) { return word(value ? 1 : 0); }
  AbiWriter& text(std::string_view s);
  AbiWriter& raw(ByteView words);

  const Bytes& bytes() const { return out_; }
  Bytes take() { return std::move(out_); }

 private:
  Bytes out_;
};

class AbiReader {
 public:
  explicit AbiReader(ByteView data);

  /// Throws DecodeError when the word does not fit 64 bits or input is exhausted.
  std::uint64_t word();
  bool boolean();
  std::string text();
  ByteView rest() const { return data_.subspan(pos_); }
  bool at_end() const { return pos_ == data_.size(); }

 private:
  ByteView data_;
  std::size_t pos_ = 0;
};

/// NIL is carried as the all-ones word, same as TOP.
inline std::uint64_t encode_event(MaybeEvent e) { return e ? *e : kTop; }
MaybeEvent decode_event(std::uint64_t word);

std::string to_hex(ByteView bytes);

}  // namespace dcsim
