#include "dcsim/abi.hpp"

#include <limits>

namespace dcsim {

AbiWriter& AbiWriter::word(std::uint64_t value) {
  const std::size_t base = out_.size();
  out_.resize(base + kWordSize, 0);
  for (std::size_t i = 0; i < 8; ++i) {
    out_[base + kWordSize - 1 - i] = static_cast<std::uint8_t>(value >> (8 * i));
  }
  return *this;
}

AbiWriter& AbiWriter::text(std::string_view s) {
  word(s.size());
  const std::size_t padded = (s.size() + kWordSize - 1) / kWordSize * kWordSize;
  const std::size_t base = out_.size();
  out_.resize(base + padded, 0);
  std::copy(s.begin(), s.end(), out_.begin() + static_cast<std::ptrdiff_t>(base));
  return *this;
}

AbiWriter& AbiWriter::raw(ByteView words) {
  if (words.size() % kWordSize != 0) throw DecodeError("raw payload is not word aligned");
  out_.insert(out_.end(), words.begin(), words.end());
  return *this;
}

AbiReader::AbiReader(ByteView data) : data_(data) {
  if (data.size() % kWordSize != 0) throw DecodeError("payload is not word aligned");
}

std::uint64_t AbiReader::word() {
  if (data_.size() - pos_ < kWordSize) throw DecodeError("payload exhausted");
  const auto w = data_.subspan(pos_, kWordSize);
  pos_ += kWordSize;
  for (std::size_t i = 0; i < kWordSize - 8; ++i) {
    if (w[i] != 0) throw DecodeError("word exceeds 64-bit range");
  }
  std::uint64_t value = 0;
  for (std::size_t i = kWordSize - 8; i < kWordSize; ++i) value = (value << 8) | w[i];
  return value;
}

bool AbiReader::boolean() {
  const auto v = word();
  if (v > 1) throw DecodeError("invalid boolean word");
  return v == 1;
}

std::string AbiReader::text() {
  const auto len = word();
  if (len > data_.size()) throw DecodeError("text exceeds payload");
  const std::size_t padded = (len + kWordSize - 1) / kWordSize * kWordSize;
  if (data_.size() - pos_ < padded) throw DecodeError("text exceeds payload");
  std::string out(data_.begin() + static_cast<std::ptrdiff_t>(pos_),
                  data_.begin() + static_cast<std::ptrdiff_t>(pos_ + len));
  pos_ += padded;
  return out;
}

MaybeEvent decode_event(std::uint64_t word) {
  if (word == kTop) return std::nullopt;
  if (word > std::numeric_limits<EventId>::max()) throw DecodeError("event id out of range");
  return static_cast<EventId>(word);
}

std::string to_hex(ByteView bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (auto b : bytes) {
    out += kDigits[b >> 4];
    out += kDigits[b & 0xf];
  }
  return out;
}

}  // namespace dcsim
