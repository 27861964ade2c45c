#include "qelect/primitives.hpp"

#include <stdexcept>

#include "qelect/rng.hpp"

namespace qelect {

BitString otp_encrypt(const BitString& key, const BitString& msg) {
  if (key.size() < msg.size()) {
    throw std::invalid_argument("otp_encrypt: key shorter than message");
  }
  return key.prefix(msg.size()) ^ msg;
}

BitString otp_decrypt(const BitString& key, const BitString& ciphertext) {
  return otp_encrypt(key, ciphertext);
}

const BitString& SingleUseKey::use() {
  if (used_) {
    throw std::logic_error("SingleUseKey: pad reuse detected within session");
  }
  used_ = true;
  return bits_;
}

BitString parity_expand(const BitString& t, std::size_t block, Rng& rng) {
  if (block < 1) {
    throw std::invalid_argument("parity_expand: block size must be positive");
  }
  BitString out(t.size() * block);
  for (std::size_t j = 0; j < t.size(); ++j) {
    int acc = 0;
    for (std::size_t k = 0; k + 1 < block; ++k) {
      int b = rng.bit();
      acc ^= b;
      out.set(j * block + k, b != 0);
    }
    out.set(j * block + block - 1, (acc ^ t[j]) != 0);
  }
  return out;
}

BitString parity_collapse(const BitString& x, std::size_t block) {
  if (block < 1) {
    throw std::invalid_argument("parity_collapse: block size must be positive");
  }
  if (x.size() % block != 0) {
    throw std::invalid_argument(
        "parity_collapse: length not divisible by block size");
  }
  BitString out(x.size() / block);
  for (std::size_t j = 0; j < out.size(); ++j) {
    int acc = 0;
    for (std::size_t k = 0; k < block; ++k) acc ^= x[j * block + k];
    out.set(j, acc != 0);
  }
  return out;
}

BitString parity_fold(const BitString& bits, std::size_t width) {
  BitString out(width);
  if (width == 0) return out;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i]) out.flip(i % width);
  }
  return out;
}

EccCode EccCode::repetition(int r) {
  if (r < 1) {
    throw std::invalid_argument("EccCode: repetition factor must be positive");
  }
  return {Scheme::Repetition, r};
}

std::size_t EccCode::encoded_length(std::size_t info_len) const {
  return scheme == Scheme::Repetition
             ? info_len * static_cast<std::size_t>(repeat)
             : info_len;
}

std::size_t EccCode::info_length(std::size_t encoded_len) const {
  if (scheme == Scheme::Repetition) {
    if (encoded_len % static_cast<std::size_t>(repeat) != 0) {
      throw std::invalid_argument(
          "EccCode: encoded length not divisible by repetition factor");
    }
    return encoded_len / static_cast<std::size_t>(repeat);
  }
  return encoded_len;
}

BitString ecc_encode(const BitString& info, const EccCode& code) {
  if (code.scheme == EccCode::Scheme::None) return info;
  BitString out(code.encoded_length(info.size()));
  for (std::size_t i = 0; i < info.size(); ++i) {
    for (int k = 0; k < code.repeat; ++k) {
      out.set(i * static_cast<std::size_t>(code.repeat) +
                  static_cast<std::size_t>(k),
              info[i] != 0);
    }
  }
  return out;
}

std::optional<BitString> ecc_decode_punctured(
    const BitString& encoded, const std::vector<std::uint8_t>& present,
    const EccCode& code) {
  if (present.size() != encoded.size()) {
    throw std::invalid_argument("ecc_decode: presence mask length mismatch");
  }
  if (code.scheme == EccCode::Scheme::None) {
    for (auto p : present) {
      if (!p) return std::nullopt;
    }
    return encoded;
  }
  const auto r = static_cast<std::size_t>(code.repeat);
  const std::size_t info_len = code.info_length(encoded.size());
  BitString out(info_len);
  for (std::size_t i = 0; i < info_len; ++i) {
    int ones = 0;
    int zeros = 0;
    for (std::size_t k = 0; k < r; ++k) {
      const std::size_t pos = i * r + k;
      if (!present[pos]) continue;
      (encoded[pos] ? ones : zeros)++;
    }
    if (ones == zeros) return std::nullopt;  // erased or tied group
    out.set(i, ones > zeros);
  }
  return out;
}

std::optional<BitString> ecc_decode(const BitString& encoded,
                                    const EccCode& code) {
  return ecc_decode_punctured(
      encoded, std::vector<std::uint8_t>(encoded.size(), 1), code);
}

std::pair<BitString, BitString> split_key(const BitString& key,
                                          std::size_t left_len) {
  if (key.size() < 2) {
    throw std::invalid_argument("split_key: key too short to split");
  }
  if (left_len == 0 || left_len >= key.size()) {
    throw std::invalid_argument("split_key: both halves must be nonempty");
  }
  return {key.prefix(left_len), key.slice(left_len, key.size() - left_len)};
}

std::pair<BitString, BitString> split_key(const BitString& key) {
  return split_key(key, (key.size() + 1) / 2);
}

KeyBundle KeyBundle::random(std::size_t l, std::size_t m, Rng& rng) {
  KeyBundle b;
  b.basis_share = random_bits(l * m, rng);
  b.parity_share = random_bits(l, rng);
  b.check_share = random_bits(m, rng);
  b.pad_share = random_bits(l, rng);
  b.validate(l, m);
  return b;
}

void KeyBundle::validate(std::size_t l, std::size_t m) const {
  if (l <= m) {
    throw std::invalid_argument("KeyBundle: requires l > m");
  }
  if (basis_share.size() != l * m || parity_share.size() != l ||
      check_share.size() != m || pad_share.size() != l) {
    throw std::invalid_argument("KeyBundle: field lengths inconsistent");
  }
}

}  // namespace qelect
