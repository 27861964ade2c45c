#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "qelect/bitstring.hpp"

namespace qelect {

class Rng;

/// One-time pad over the leading key bits. Encrypt and decrypt are the same
/// map; callers are responsible for never reusing a pad (see SingleUseKey).
BitString otp_encrypt(const BitString& key, const BitString& msg);
BitString otp_decrypt(const BitString& key, const BitString& ciphertext);

/// Wraps key material that must be consumed exactly once within a session.
class SingleUseKey {
 public:
  SingleUseKey() = default;
  explicit SingleUseKey(BitString bits) : bits_(std::move(bits)) {}
  /// Returns the bits and marks them spent; throws on a second call.
  const BitString& use();
  bool used() const { return used_; }
  std::size_t size() const { return bits_.size(); }

 private:
  BitString bits_;
  bool used_ = false;
};

/// Expands each bit t_j into a block of `block` bits drawn uniformly from
/// the 2^(block-1) strings whose XOR equals t_j.
BitString parity_expand(const BitString& t, std::size_t block, Rng& rng);

/// Collapses consecutive blocks of `block` bits to their XOR.
BitString parity_collapse(const BitString& x, std::size_t block);

/// Folds a string into `width` parity bits, bit i contributing to output
/// position i mod width. Any single-bit flip flips exactly one output bit.
BitString parity_fold(const BitString& bits, std::size_t width);

/// Error-correcting code selector. Repetition(r) repeats each bit r times
/// and corrects floor((r-1)/2) flips per group by majority vote.
struct EccCode {
  enum class Scheme { None, Repetition };
  Scheme scheme = Scheme::None;
  int repeat = 1;

  static EccCode none() { return {Scheme::None, 1}; }
  static EccCode repetition(int r);

  bool enabled() const { return scheme == Scheme::Repetition; }
  int correction_capability() const { return (repeat - 1) / 2; }
  std::size_t encoded_length(std::size_t info_len) const;
  std::size_t info_length(std::size_t encoded_len) const;
};

BitString ecc_encode(const BitString& info, const EccCode& code);

/// Majority-vote decode; nullopt when a group is undecodable (tie).
std::optional<BitString> ecc_decode(const BitString& encoded,
                                    const EccCode& code);

/// Decode with erasures at known positions: only positions with present[i]
/// nonzero vote. A group with no surviving copy, or a tied vote, fails.
std::optional<BitString> ecc_decode_punctured(
    const BitString& encoded, const std::vector<std::uint8_t>& present,
    const EccCode& code);

/// Splits a key into (left, right) halves, left taking the extra bit when
/// the length is odd. An explicit left length overrides the default ratio.
std::pair<BitString, BitString> split_key(const BitString& key);
std::pair<BitString, BitString> split_key(const BitString& key,
                                          std::size_t left_len);

/// One administrator's share of the string-protocol key material: the
/// per-position basis bits (l*m), the block parity bits (l), the
/// eligibility check bits (m) and the tag pad bits (l).
struct KeyBundle {
  BitString basis_share;
  BitString parity_share;
  BitString check_share;
  BitString pad_share;

  static KeyBundle random(std::size_t l, std::size_t m, Rng& rng);
  void validate(std::size_t l, std::size_t m) const;
};

}  // namespace qelect
