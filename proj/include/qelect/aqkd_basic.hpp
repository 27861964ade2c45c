#pragma once

#include <functional>
#include <optional>
#include <set>

#include "qelect/bitstring.hpp"
#include "qelect/primitives.hpp"
#include "qelect/register.hpp"
#include "qelect/transcript.hpp"

// Qubit-based anonymous key distribution. The voter conjugate-codes a random
// raw key under pre-shared basis bits, ships the register anonymously with a
// pre-shared tag, the counter measures and publishes a check subset, and the
// voter keeps the unchecked remainder as the session key. The lossy-channel
// variant carries over unchanged: the counter announces which positions
// arrived and both sides restrict themselves to those.
namespace qelect::aqkd_basic {

struct Params {
  std::size_t raw_len = 64;        // conjugate-coded bits per session
  std::size_t tag_len = 32;
  double check_fraction = 0.5;     // share of received bits disclosed
  double error_threshold = 0.05;   // above this the voter aborts
  int max_retries = 3;
  void validate() const;
};

/// Pre-shared per-session material. Each administrator issues one half to
/// both the voter and the counter; the combined strings are invisible to
/// either administrator alone.
struct Preshared {
  BitString basis_half1, tag_half1;
  BitString basis_half2, tag_half2;

  BitString bases() const { return basis_half1 ^ basis_half2; }
  BitString tag() const { return tag_half1 ^ tag_half2; }

  static Preshared issue(std::size_t raw_len, std::size_t tag_len, Rng& rng);
};

struct CheckAnnouncement {
  BitString check_bits;
  std::vector<std::size_t> check_positions;
  std::vector<std::size_t> received_positions;
};

/// Replay guard: every tag is accepted at most once across all sessions.
class TagRegistry {
 public:
  bool try_accept(const BitString& tag);
  bool seen(const BitString& tag) const { return seen_.count(tag) > 0; }

 private:
  std::set<BitString> seen_;
};

enum class Phase { Prepared, Measured, Checked, Completed, Aborted };

struct VoterPrepared {
  BitString raw_key;
  QubitRegister reg;
};

VoterPrepared voter_prepare(const BitString& bases, std::size_t raw_len,
                            Rng& rng);

struct CharlieMeasured {
  BitString outcome;  // private full-length record
  CheckAnnouncement announcement;
};

/// Measures in the pre-shared bases and publishes the check subset together
/// with the received-position list. Returns nullopt when the tag has been
/// presented before (replayed session, rejected).
std::optional<CharlieMeasured> charlie_measure_announce(
    QubitRegister&& reg, const BitString& bases, const BitString& tag,
    double check_fraction, TagRegistry& registry, Rng& rng);

struct ExtractResult {
  bool accepted = false;
  double mismatch_rate = 0.0;
  BitString key;  // residual raw key; empty on abort
  BitString key_left, key_right;
};

/// Compares the announced check bits with the voter's raw key, and on
/// acceptance deletes them, keeping received-minus-checked positions in
/// ascending order as the session key.
ExtractResult voter_verify_extract(const BitString& raw_key,
                                   const CheckAnnouncement& announcement,
                                   double error_threshold);

/// The counter's residual of his own outcome over the same positions.
BitString residual_key(const BitString& bits,
                       const CheckAnnouncement& announcement);

using QuantumChannel = std::function<QubitRegister(QubitRegister&&, Rng&)>;

QuantumChannel lossy_channel(const ChannelConfig& ch);
QuantumChannel identity_channel();

struct SessionOutcome {
  bool completed = false;
  int attempts = 0;
  double mismatch_rate = 0.0;
  Phase final_phase = Phase::Aborted;
  BitString voter_key, voter_key_left, voter_key_right;
  BitString charlie_key;
};

/// Runs one session end to end, drawing fresh pre-shared material per
/// attempt; an aborted attempt restarts up to max_retries times.
SessionOutcome run_session(const Params& params, const QuantumChannel& channel,
                           TagRegistry& registry, Rng& rng,
                           Transcript* transcript = nullptr);

}  // namespace qelect::aqkd_basic
