#include "qelect/aqkd_basic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qelect/rng.hpp"

namespace qelect::aqkd_basic {

void Params::validate() const {
  if (raw_len < 2) {
    throw std::invalid_argument("aqkd_basic: raw_len must be at least 2");
  }
  if (tag_len < 1) {
    throw std::invalid_argument("aqkd_basic: tag_len must be positive");
  }
  if (check_fraction < 0.0 || check_fraction > 1.0) {
    throw std::invalid_argument("aqkd_basic: check_fraction must be in [0,1]");
  }
  if (error_threshold < 0.0 || error_threshold >= 1.0) {
    throw std::invalid_argument("aqkd_basic: error_threshold must be in [0,1)");
  }
  if (max_retries < 0) {
    throw std::invalid_argument("aqkd_basic: max_retries must be nonnegative");
  }
}

Preshared Preshared::issue(std::size_t raw_len, std::size_t tag_len,
                           Rng& rng) {
  Preshared p;
  p.basis_half1 = random_bits(raw_len, rng);
  p.basis_half2 = random_bits(raw_len, rng);
  p.tag_half1 = random_bits(tag_len, rng);
  p.tag_half2 = random_bits(tag_len, rng);
  return p;
}

bool TagRegistry::try_accept(const BitString& tag) {
  return seen_.insert(tag).second;
}

VoterPrepared voter_prepare(const BitString& bases, std::size_t raw_len,
                            Rng& rng) {
  if (bases.size() != raw_len) {
    throw std::invalid_argument("voter_prepare: basis length mismatch");
  }
  BitString raw = random_bits(raw_len, rng);
  QubitRegister reg = encode_conjugate(raw, bases);
  return {std::move(raw), std::move(reg)};
}

std::optional<CharlieMeasured> charlie_measure_announce(
    QubitRegister&& reg, const BitString& bases, const BitString& tag,
    double check_fraction, TagRegistry& registry, Rng& rng) {
  if (reg.size() == 0) {
    throw std::invalid_argument("charlie_measure_announce: empty register");
  }
  if (bases.size() != reg.size()) {
    throw std::invalid_argument("charlie_measure_announce: basis mismatch");
  }
  if (check_fraction < 0.0 || check_fraction > 1.0) {
    throw std::invalid_argument(
        "charlie_measure_announce: check_fraction out of range");
  }
  if (!registry.try_accept(tag)) {
    return std::nullopt;  // tag seen before: session rejected
  }
  MeasurementResult meas = measure_register(reg, bases, rng);
  const std::size_t received = meas.received.size();
  const auto check_count = static_cast<std::size_t>(
      std::ceil(check_fraction * static_cast<double>(received)));
  const auto picks = rng.sample_indices(received, check_count);

  CharlieMeasured out;
  out.outcome = std::move(meas.outcome);
  out.announcement.received_positions = std::move(meas.received);
  out.announcement.check_positions.reserve(picks.size());
  for (auto p : picks) {
    out.announcement.check_positions.push_back(
        out.announcement.received_positions[p]);
  }
  out.announcement.check_bits =
      out.outcome.select(out.announcement.check_positions);
  return out;
}

ExtractResult voter_verify_extract(const BitString& raw_key,
                                   const CheckAnnouncement& announcement,
                                   double error_threshold) {
  if (!std::includes(announcement.received_positions.begin(),
                     announcement.received_positions.end(),
                     announcement.check_positions.begin(),
                     announcement.check_positions.end())) {
    throw std::invalid_argument(
        "voter_verify_extract: check positions not among received positions");
  }
  ExtractResult result;
  const std::size_t checks = announcement.check_positions.size();
  std::size_t mismatches = 0;
  for (std::size_t i = 0; i < checks; ++i) {
    if (announcement.check_bits[i] !=
        raw_key[announcement.check_positions[i]]) {
      ++mismatches;
    }
  }
  result.mismatch_rate =
      checks == 0 ? 0.0
                  : static_cast<double>(mismatches) / static_cast<double>(checks);
  if (result.mismatch_rate > error_threshold) {
    return result;  // attack or excessive noise: abort
  }
  const auto residual_positions = index_difference(
      announcement.received_positions, announcement.check_positions);
  if (residual_positions.size() < 2) {
    return result;  // nothing splittable left: abort
  }
  result.key = raw_key.select(residual_positions);
  auto halves = split_key(result.key);
  result.key_left = std::move(halves.first);
  result.key_right = std::move(halves.second);
  result.accepted = true;
  return result;
}

BitString residual_key(const BitString& bits,
                       const CheckAnnouncement& announcement) {
  return bits.select(index_difference(announcement.received_positions,
                                      announcement.check_positions));
}

QuantumChannel lossy_channel(const ChannelConfig& ch) {
  ch.validate();
  return [ch](QubitRegister&& reg, Rng& rng) {
    return channel_transmit(std::move(reg), ch, rng);
  };
}

QuantumChannel identity_channel() {
  return [](QubitRegister&& reg, Rng&) { return std::move(reg); };
}

SessionOutcome run_session(const Params& params, const QuantumChannel& channel,
                           TagRegistry& registry, Rng& rng,
                           Transcript* transcript) {
  params.validate();
  SessionOutcome outcome;
  for (int attempt = 0; attempt <= params.max_retries; ++attempt) {
    outcome.attempts = attempt + 1;
    Phase phase = Phase::Prepared;

    const Preshared shared =
        Preshared::issue(params.raw_len, params.tag_len, rng);
    VoterPrepared prepared =
        voter_prepare(shared.bases(), params.raw_len, rng);
    if (transcript) {
      transcript->emit("keydist", "voter", "register_prepared",
                       prepared.raw_key.str());
    }

    QubitRegister transit = channel(std::move(prepared.reg), rng);
    auto measured = charlie_measure_announce(std::move(transit),
                                             shared.bases(), shared.tag(),
                                             params.check_fraction, registry,
                                             rng);
    if (!measured) {
      advance_phase(phase, Phase::Aborted);
      continue;  // replayed tag; fresh pre-shared material next attempt
    }
    advance_phase(phase, Phase::Measured);
    if (transcript) {
      transcript->emit("keydist", "counter", "check_announced",
                       measured->announcement.check_bits.str());
    }

    ExtractResult extract = voter_verify_extract(
        prepared.raw_key, measured->announcement, params.error_threshold);
    advance_phase(phase, Phase::Checked);
    outcome.mismatch_rate = extract.mismatch_rate;
    if (!extract.accepted) {
      advance_phase(phase, Phase::Aborted);
      if (transcript) {
        transcript->emit("keydist", "voter", "session_aborted",
                         std::to_string(extract.mismatch_rate));
      }
      continue;
    }
    advance_phase(phase, Phase::Completed);
    outcome.completed = true;
    outcome.final_phase = phase;
    outcome.voter_key = std::move(extract.key);
    outcome.voter_key_left = std::move(extract.key_left);
    outcome.voter_key_right = std::move(extract.key_right);
    outcome.charlie_key = residual_key(measured->outcome,
                                       measured->announcement);
    if (transcript) {
      transcript->emit("keydist", "voter", "key_established",
                       outcome.voter_key.str());
    }
    return outcome;
  }
  outcome.final_phase = Phase::Aborted;
  return outcome;
}

}  // namespace qelect::aqkd_basic
