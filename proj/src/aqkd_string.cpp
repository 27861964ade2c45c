#include "qelect/aqkd_string.hpp"

#include <algorithm>
#include <stdexcept>

#include "qelect/rng.hpp"

namespace qelect::aqkd_string {

void Params::validate() const {
  if (m < 2) {
    throw std::invalid_argument("aqkd_string: m must be at least 2");
  }
  if (l <= m) {
    throw std::invalid_argument("aqkd_string: requires l > m");
  }
  if (max_retries < 0) {
    throw std::invalid_argument("aqkd_string: max_retries must be nonnegative");
  }
  if (ecc.enabled()) {
    const auto r = static_cast<std::size_t>(ecc.repeat);
    if (l % r != 0) {
      throw std::invalid_argument(
          "aqkd_string: repetition factor must divide l");
    }
    if (l / r <= m + ecc_key_fold_bits) {
      throw std::invalid_argument(
          "aqkd_string: ECC path needs l / r > m + key fold bits");
    }
    if (ecc_residual_rate_limit < 0.0 || ecc_residual_rate_limit >= 1.0) {
      throw std::invalid_argument(
          "aqkd_string: residual rate limit must be in [0,1)");
    }
  }
  if (verify_check_bits < 1) {
    throw std::invalid_argument(
        "aqkd_string: verification needs at least one check bit");
  }
  if (verify_check_bits >= key_len(*this)) {
    throw std::invalid_argument(
        "aqkd_string: verification check bits exhaust the key");
  }
}

double Params::residual_rate_limit() const {
  if (ecc_residual_rate_limit > 0.0) return ecc_residual_rate_limit;
  // Half the code's correction radius, as an error-rate fraction.
  return 0.5 * static_cast<double>(ecc.correction_capability()) /
         static_cast<double>(ecc.repeat);
}

std::size_t key_len(const Params& params) {
  if (params.ecc.enabled()) {
    return ecc_info_blocks(params) - params.m - params.ecc_key_fold_bits;
  }
  return params.l - params.m;
}

std::size_t ecc_info_blocks(const Params& params) {
  if (!params.ecc.enabled()) {
    throw std::logic_error("ecc_info_blocks: ECC path not enabled");
  }
  return params.l / static_cast<std::size_t>(params.ecc.repeat);
}

BitString Keys::measurement_basis() const {
  return bundle1.basis_share ^ bundle2.basis_share;
}

BitString Keys::parity_key() const {
  return bundle1.parity_share ^ bundle2.parity_share;
}

BitString Keys::check_key() const {
  return bundle1.check_share ^ bundle2.check_share;
}

BitString Keys::pad_key() const {
  return bundle1.pad_share ^ bundle2.pad_share;
}

Keys Keys::setup(std::size_t l, std::size_t m, Rng& rng) {
  if (m < 2 || l <= m) {
    throw std::invalid_argument("Keys::setup: requires l > m >= 2");
  }
  Keys keys;
  keys.bundle1 = KeyBundle::random(l, m, rng);
  keys.bundle2 = KeyBundle::random(l, m, rng);
  keys.l = l;
  keys.m = m;
  return keys;
}

BobPrepared bob_prepare(const Keys& keys, const Params& params, Rng& rng) {
  SessionMasks masks;
  masks.mask1 = parity_expand(keys.bundle1.parity_share, keys.m, rng);
  masks.mask2 = parity_expand(keys.bundle2.parity_share, keys.m, rng);
  QubitRegister reg = prepare_layered(keys.bundle1.basis_share, masks.mask1,
                                      keys.bundle2.basis_share, masks.mask2);
  BobPrepared out{std::move(masks), std::move(reg), BitString(), BitString()};
  if (params.bob_flip_mask) {
    out.guard1 = random_bits(keys.l * keys.m, rng);
    out.guard2 = random_bits(keys.l * keys.m, rng);
    for (std::size_t i = 0; i < out.reg.size(); ++i) {
      if (out.guard1[i]) out.reg.apply_at(i, Gate::FlipY);
      if (out.guard2[i]) out.reg.apply_at(i, Gate::FlipY);
    }
  }
  return out;
}

void voter_remove_guard(QubitRegister& reg, const BitString& guard1,
                        const BitString& guard2) {
  if (guard1.empty() && guard2.empty()) return;
  if (guard1.size() != reg.size() || guard2.size() != reg.size()) {
    throw std::invalid_argument("voter_remove_guard: guard length mismatch");
  }
  // Y is its own inverse up to a global sign, so reapplying undoes the guard.
  for (std::size_t i = 0; i < reg.size(); ++i) {
    if (reg.is_lost(i)) continue;
    if (guard1[i]) reg.apply_at(i, Gate::FlipY);
    if (guard2[i]) reg.apply_at(i, Gate::FlipY);
  }
}

VoterRandomized voter_randomize(QubitRegister&& reg,
                                const BitString& check_key,
                                const BitString& pad_key, std::size_t l,
                                std::size_t m, Rng& rng) {
  if (reg.size() != l * m) {
    throw std::invalid_argument("voter_randomize: register length mismatch");
  }
  if (check_key.size() != m || pad_key.size() != l) {
    throw std::invalid_argument("voter_randomize: key length mismatch");
  }
  if (reg.received_count() != reg.size()) {
    throw std::invalid_argument(
        "voter_randomize: lost positions present; use the ECC path");
  }
  VoterRandomized out{{}, std::move(reg)};
  out.view.key = random_bits(l - m, rng);
  out.view.tag = otp_encrypt(pad_key, concat(out.view.key, check_key));
  out.view.block_mask = parity_expand(out.view.tag, m, rng);
  for (std::size_t i = 0; i < out.reg.size(); ++i) {
    if (out.view.block_mask[i]) out.reg.apply_at(i, Gate::FlipY);
  }
  return out;
}

DecodeResult charlie_decode(QubitRegister&& reg, const Keys& keys, Rng& rng) {
  if (reg.size() != keys.l * keys.m) {
    throw std::invalid_argument("charlie_decode: register length mismatch");
  }
  if (reg.received_count() != reg.size()) {
    throw std::invalid_argument(
        "charlie_decode: lost positions present; use charlie_decode_ecc");
  }
  DecodeResult result;
  MeasurementResult meas =
      measure_register(reg, keys.measurement_basis(), rng);
  result.raw_outcome = std::move(meas.outcome);
  const BitString parity_outcome = parity_collapse(result.raw_outcome, keys.m);
  result.tag_decoded = keys.parity_key() ^ parity_outcome;
  const BitString payload = otp_decrypt(keys.pad_key(), result.tag_decoded);
  result.key = payload.prefix(keys.l - keys.m);
  result.check_decoded = payload.slice(keys.l - keys.m, keys.m);
  result.accepted = result.check_decoded == keys.check_key();
  return result;
}

std::optional<EccRandomized> voter_randomize_ecc(QubitRegister&& reg,
                                                 const BitString& check_key,
                                                 const BitString& pad_key,
                                                 const Params& params,
                                                 Rng& rng) {
  if (!params.ecc.enabled()) {
    throw std::logic_error("voter_randomize_ecc: ECC path not enabled");
  }
  if (reg.size() != params.l * params.m) {
    throw std::invalid_argument(
        "voter_randomize_ecc: register length mismatch");
  }
  if (check_key.size() != params.m || pad_key.size() != params.l) {
    throw std::invalid_argument("voter_randomize_ecc: key length mismatch");
  }
  const std::size_t blocks = ecc_info_blocks(params);
  const auto r = static_cast<std::size_t>(params.ecc.repeat);

  EccRandomized out{{}, std::move(reg)};
  out.view.serials = out.reg.received_positions();

  // Every code group needs at least one surviving copy before it is worth
  // transmitting; otherwise signal a restart.
  {
    std::vector<std::uint8_t> group_alive(blocks * params.m, 0);
    for (auto pos : out.view.serials) group_alive[pos / r] = 1;
    for (auto alive : group_alive) {
      if (!alive) return std::nullopt;
    }
  }

  out.view.key = random_bits(key_len(params), rng);
  const BitString payload = concat(
      out.view.key,
      concat(parity_fold(out.view.key, params.ecc_key_fold_bits), check_key));
  const BitString tag = otp_encrypt(pad_key.prefix(blocks), payload);
  out.view.info_word = parity_expand(tag, params.m, rng);
  out.view.code_mask = ecc_encode(out.view.info_word, params.ecc);
  for (auto pos : out.view.serials) {
    if (out.view.code_mask[pos]) out.reg.apply_at(pos, Gate::FlipY);
  }
  return out;
}

std::optional<EccDecodeResult> decode_ecc_outcome(
    const BitString& outcome, const std::vector<std::size_t>& usable,
    const SessionMasks& masks, const Keys& keys, const Params& params) {
  if (!params.ecc.enabled()) {
    throw std::logic_error("decode_ecc_outcome: ECC path not enabled");
  }
  const BitString expected = masks.combined();
  if (outcome.size() != expected.size()) {
    throw std::invalid_argument("decode_ecc_outcome: length mismatch");
  }
  BitString code_observed(expected.size());
  std::vector<std::uint8_t> present(expected.size(), 0);
  for (auto pos : usable) {
    present[pos] = 1;
    code_observed.set(pos, (outcome[pos] ^ expected[pos]) != 0);
  }

  auto info = ecc_decode_punctured(code_observed, present, params.ecc);
  if (!info) return std::nullopt;

  EccDecodeResult result;
  result.info_word = std::move(*info);
  result.tag_bits = parity_collapse(result.info_word, params.m);

  const BitString reencoded = ecc_encode(result.info_word, params.ecc);
  std::size_t flips = 0;
  for (auto pos : usable) {
    if (code_observed[pos] != reencoded[pos]) ++flips;
  }
  result.residual_error_rate =
      usable.empty() ? 1.0
                     : static_cast<double>(flips) /
                           static_cast<double>(usable.size());

  const std::size_t blocks = ecc_info_blocks(params);
  const std::size_t klen = key_len(params);
  const BitString payload =
      otp_decrypt(keys.pad_key().prefix(blocks), result.tag_bits);
  result.key = payload.prefix(klen);
  const BitString fold_decoded =
      payload.slice(klen, params.ecc_key_fold_bits);
  result.check_decoded = payload.slice(klen + params.ecc_key_fold_bits,
                                       keys.m);
  result.accepted =
      result.residual_error_rate <= params.residual_rate_limit() &&
      fold_decoded == parity_fold(result.key, params.ecc_key_fold_bits) &&
      result.check_decoded == keys.check_key();
  return result;
}

std::optional<EccDecodeResult> charlie_decode_ecc(
    QubitRegister&& reg, const std::vector<std::size_t>& serials,
    const SessionMasks& masks, const Keys& keys, const Params& params,
    Rng& rng) {
  if (!params.ecc.enabled()) {
    throw std::logic_error("charlie_decode_ecc: ECC path not enabled");
  }
  if (reg.size() != keys.l * keys.m) {
    throw std::invalid_argument("charlie_decode_ecc: register length mismatch");
  }
  const auto usable = reg.received_positions();
  if (!std::includes(serials.begin(), serials.end(), usable.begin(),
                     usable.end())) {
    throw std::invalid_argument(
        "charlie_decode_ecc: received positions not among announced serials");
  }
  MeasurementResult meas =
      measure_register(reg, keys.measurement_basis(), rng);
  return decode_ecc_outcome(meas.outcome, usable, masks, keys, params);
}

std::vector<VerificationRecord> publish_verification(
    const std::vector<BitString>& session_keys, std::size_t check_bits) {
  if (check_bits < 1) {
    throw std::invalid_argument(
        "publish_verification: check subset must be nonempty");
  }
  std::vector<VerificationRecord> records;
  records.reserve(session_keys.size());
  for (std::size_t i = 0; i < session_keys.size(); ++i) {
    records.push_back({i, session_keys[i].prefix(check_bits)});
  }
  return records;
}

bool voter_confirm(const BitString& own_key, std::size_t check_bits,
                   const std::vector<VerificationRecord>& records) {
  const BitString own = own_key.prefix(check_bits);
  for (const auto& record : records) {
    if (record.prefix == own) return true;
  }
  return false;
}

BitString usable_key(const BitString& key, std::size_t check_bits) {
  if (check_bits >= key.size()) {
    throw std::invalid_argument("usable_key: disclosure exhausts the key");
  }
  return key.slice(check_bits, key.size() - check_bits);
}

}  // namespace qelect::aqkd_string
