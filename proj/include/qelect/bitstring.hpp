#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace qelect {

class Rng;

/// Fixed-length bit sequence with value semantics. Bits are addressed from 0.
class BitString {
 public:
  BitString() = default;
  explicit BitString(std::size_t length) : bits_(length, 0) {}

  static BitString from_string(std::string_view s);
  static BitString from_uint(std::uint64_t value, std::size_t length);

  std::size_t size() const { return bits_.size(); }
  bool empty() const { return bits_.empty(); }

  int operator[](std::size_t i) const;
  void set(std::size_t i, bool value);
  void flip(std::size_t i);

  /// XOR of all bits; 0 for the empty string.
  int parity() const;
  std::size_t count_ones() const;

  BitString slice(std::size_t pos, std::size_t len) const;
  BitString prefix(std::size_t len) const { return slice(0, len); }
  /// Bits at the given positions, in the given order.
  BitString select(const std::vector<std::size_t>& positions) const;

  std::string str() const;
  /// Packed, length-prefixed byte form used for digests.
  std::vector<std::uint8_t> packed() const;
  /// Reads the bits as a big-endian integer; size() must be at most 64.
  std::uint64_t to_uint() const;

  bool operator==(const BitString&) const = default;
  auto operator<=>(const BitString&) const = default;

 private:
  std::vector<std::uint8_t> bits_;
};

/// Bitwise XOR of equal-length strings; commutative and self-inverse.
BitString operator^(const BitString& a, const BitString& b);
BitString concat(const BitString& a, const BitString& b);
BitString random_bits(std::size_t n, Rng& rng);

/// Elements of sorted `a` that are not in sorted `b`.
std::vector<std::size_t> index_difference(const std::vector<std::size_t>& a,
                                          const std::vector<std::size_t>& b);

}  // namespace qelect
