#pragma once

#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "qelect/aqkd_string.hpp"
#include "qelect/bitstring.hpp"
#include "qelect/primitives.hpp"
#include "qelect/register.hpp"
#include "qelect/transcript.hpp"

// The distributed election: trusted setup issues split key material, every
// voter anonymously establishes a session key with the counter through the
// qubit-string protocol, ballots are one-time-pad encrypted under the right
// key half and tagged with the left half, and the counter publishes a
// shuffled (tag, vote) board for self-verification. A classical baseline of
// the same shape (split pre-shared strings, no qubits) is included for the
// collusion contrast.
namespace qelect::election {

struct AbortError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Params {
  std::size_t n_voters = 5;
  std::size_t n_candidates = 2;
  std::size_t ballot_bits = 8;  // length of a candidate code
  std::size_t min_code_distance = 0;
  aqkd_string::Params kd;
  ChannelConfig admin_to_voter;
  ChannelConfig voter_to_counter;
  std::size_t message_budget = 0;  // 0 selects 4 * n_voters + 16

  void validate() const;
  std::size_t effective_message_budget() const;
};

struct Candidate {
  std::string name;
  BitString code;
};

class CandidateSet {
 public:
  CandidateSet() = default;
  static CandidateSet sample(std::size_t count, std::size_t bits,
                             std::size_t min_distance, Rng& rng);

  bool contains(const BitString& code) const;
  const Candidate* find(const BitString& code) const;
  const std::vector<Candidate>& items() const { return items_; }
  std::size_t size() const { return items_.size(); }

 private:
  std::vector<Candidate> items_;
};

struct Ballot {
  BitString ciphertext;
  BitString tag;
};

struct BoardEntry {
  BitString tag;
  BitString vote;
};

using Tally = std::map<std::string, std::size_t>;

enum class Phase { Initial, KeyDistribution, Voting, Counting, Done };

struct VoterRecord {
  std::string id;
  BitString key;       // usable session key after disclosure drop
  BitString key_left;  // ballot tag
  SingleUseKey key_right;
  bool kd_confirmed = false;
  bool cast = false;
  bool board_verified = false;
  BitString cast_code;
};

/// What the colluding parties retain after a run. Session records are the
/// counter's knowledge, masks are the administrators'; truth_voter exists
/// for scoring only and is never consulted by an attack strategy.
struct AdversaryArchive {
  struct SessionRecord {
    BitString raw_outcome;
    BitString tag_decoded;
    BitString key;
    std::size_t truth_voter = 0;
  };
  std::vector<SessionRecord> sessions;
  std::vector<aqkd_string::SessionMasks> masks_by_voter;
  std::map<BitString, std::size_t> session_by_tag;
  std::size_t l = 0, m = 0;
};

struct State {
  Params params;
  Phase phase = Phase::Initial;
  std::uint64_t run_id = 0;
  CandidateSet candidates;
  aqkd_string::Keys keys;
  std::vector<VoterRecord> voters;
  std::map<BitString, BitString> counter_keys;  // ballot tag -> pad half
  std::set<BitString> used_tags;
  std::vector<BoardEntry> accepted;  // acceptance order, pre-shuffle
  std::vector<BoardEntry> board;     // published order
  Tally tally;
  std::size_t messages_seen = 0;
  Transcript transcript;
  AdversaryArchive archive;
};

using ChannelFn = std::function<QubitRegister(QubitRegister&&, Rng&)>;

ChannelFn config_channel(const ChannelConfig& ch);

State initialize_election(const Params& params, Rng& rng,
                          std::uint64_t run_id = 0);

/// Runs the anonymous key distribution phase with explicit quantum channels;
/// failed sessions retry with fresh randomness up to kd.max_retries rounds.
/// Throws AbortError when some voter exhausts its retries.
void run_key_distribution(State& st, const ChannelFn& admin_leg,
                          const ChannelFn& counter_leg, Rng& rng);
void run_key_distribution(State& st, Rng& rng);

/// Encrypts the chosen candidate code under the right key half; the tag is
/// the left half. Refuses codes outside the candidate set and pad reuse.
Ballot make_ballot(VoterRecord& voter, const BitString& candidate_code,
                   const CandidateSet& candidates);

enum class BallotDecision { Accepted, UnknownTag, ReplayedTag, InvalidVote };

const char* decision_name(BallotDecision d);

BallotDecision counter_receive(State& st, const Ballot& ballot);

bool voting_closed(const State& st);

/// Publishes the shuffled board, lets every voter check its own entry and
/// moves the election to Done.
void publish_and_verify(State& st, Rng& rng);

struct Result {
  bool completed = false;
  std::string abort_reason;
  Tally tally;
  std::vector<BoardEntry> board;
  std::vector<bool> voter_verified;
  std::vector<BitString> cast_codes;
  Transcript transcript;
  AdversaryArchive archive;
  CandidateSet candidates;

  std::string transcript_jsonl() const { return transcript.to_jsonl(); }
};

/// Drives all four phases. `choices` maps voter index to candidate index;
/// when empty every voter picks uniformly at random.
Result run_full_election(const Params& params,
                         const std::vector<std::size_t>& choices,
                         std::uint64_t seed);

/// True when board/tally publications appear only in the counting phase or
/// later; the transcript-level fairness check.
bool tally_confined_to_counting(const Transcript& transcript);

// ---- classical baseline ----------------------------------------------------

/// Duplicate-registration guard of the baseline scheme.
class RegistrationDesk {
 public:
  bool register_request(const BitString& voter_secret);

 private:
  std::set<BitString> seen_;
};

struct BaselineParams {
  std::size_t n_voters = 5;
  std::size_t n_candidates = 2;
  std::size_t ballot_bits = 8;
  std::size_t tag_bits = 16;
  void validate() const;
};

struct BaselineResult {
  bool completed = false;
  Tally tally;
  std::vector<BoardEntry> board;
  std::vector<BitString> cast_codes;
  Transcript transcript;
  CandidateSet candidates;
  /// Collusion view: both administrators together reconstruct every voter's
  /// combined tag, which links board entries back to voters.
  std::vector<BitString> tag_of_voter;

  std::string transcript_jsonl() const { return transcript.to_jsonl(); }
};

BaselineResult classical_baseline_run(const BaselineParams& params,
                                      const std::vector<std::size_t>& choices,
                                      std::uint64_t seed);

}  // namespace qelect::election
