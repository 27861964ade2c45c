#include "qelect/bitstring.hpp"

#include <algorithm>
#include <stdexcept>

#include "qelect/rng.hpp"

namespace qelect {

BitString BitString::from_string(std::string_view s) {
  BitString out(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '1') {
      out.bits_[i] = 1;
    } else if (s[i] != '0') {
      throw std::invalid_argument("BitString::from_string: expected only 0/1");
    }
  }
  return out;
}

BitString BitString::from_uint(std::uint64_t value, std::size_t length) {
  if (length > 64) {
    throw std::invalid_argument("BitString::from_uint: length exceeds 64");
  }
  BitString out(length);
  for (std::size_t i = 0; i < length; ++i) {
    out.bits_[i] = static_cast<std::uint8_t>((value >> (length - 1 - i)) & 1u);
  }
  return out;
}

int BitString::operator[](std::size_t i) const {
  if (i >= bits_.size()) throw std::out_of_range("BitString: index out of range");
  return bits_[i];
}

void BitString::set(std::size_t i, bool value) {
  if (i >= bits_.size()) throw std::out_of_range("BitString: index out of range");
  bits_[i] = value ? 1 : 0;
}

void BitString::flip(std::size_t i) {
  if (i >= bits_.size()) throw std::out_of_range("BitString: index out of range");
  bits_[i] ^= 1;
}

int BitString::parity() const {
  int p = 0;
  for (auto b : bits_) p ^= b;
  return p;
}

std::size_t BitString::count_ones() const {
  std::size_t n = 0;
  for (auto b : bits_) n += b;
  return n;
}

BitString BitString::slice(std::size_t pos, std::size_t len) const {
  if (pos + len > bits_.size()) {
    throw std::out_of_range("BitString::slice: range out of bounds");
  }
  BitString out(len);
  std::copy(bits_.begin() + static_cast<std::ptrdiff_t>(pos),
            bits_.begin() + static_cast<std::ptrdiff_t>(pos + len),
            out.bits_.begin());
  return out;
}

BitString BitString::select(const std::vector<std::size_t>& positions) const {
  BitString out(positions.size());
  for (std::size_t i = 0; i < positions.size(); ++i) {
    out.bits_[i] = static_cast<std::uint8_t>((*this)[positions[i]]);
  }
  return out;
}

std::string BitString::str() const {
  std::string s(bits_.size(), '0');
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i]) s[i] = '1';
  }
  return s;
}

std::vector<std::uint8_t> BitString::packed() const {
  std::vector<std::uint8_t> out;
  const std::uint64_t n = bits_.size();
  for (int i = 7; i >= 0; --i) {
    out.push_back(static_cast<std::uint8_t>((n >> (8 * i)) & 0xff));
  }
  std::uint8_t acc = 0;
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    acc = static_cast<std::uint8_t>((acc << 1) | bits_[i]);
    if (i % 8 == 7) {
      out.push_back(acc);
      acc = 0;
    }
  }
  if (bits_.size() % 8 != 0) {
    acc = static_cast<std::uint8_t>(acc << (8 - bits_.size() % 8));
    out.push_back(acc);
  }
  return out;
}

std::uint64_t BitString::to_uint() const {
  if (bits_.size() > 64) {
    throw std::invalid_argument("BitString::to_uint: more than 64 bits");
  }
  std::uint64_t v = 0;
  for (auto b : bits_) v = (v << 1) | b;
  return v;
}

BitString operator^(const BitString& a, const BitString& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("BitString xor: length mismatch");
  }
  BitString out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    out.set(i, (a[i] ^ b[i]) != 0);
  }
  return out;
}

BitString concat(const BitString& a, const BitString& b) {
  BitString out(a.size() + b.size());
  for (std::size_t i = 0; i < a.size(); ++i) out.set(i, a[i] != 0);
  for (std::size_t i = 0; i < b.size(); ++i) out.set(a.size() + i, b[i] != 0);
  return out;
}

BitString random_bits(std::size_t n, Rng& rng) {
  BitString out(n);
  for (std::size_t i = 0; i < n; ++i) out.set(i, rng.bit() != 0);
  return out;
}

std::vector<std::size_t> index_difference(const std::vector<std::size_t>& a,
                                          const std::vector<std::size_t>& b) {
  std::vector<std::size_t> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(),
                      std::back_inserter(out));
  return out;
}

}  // namespace qelect
