#pragma once

#include <optional>
#include <vector>

#include "qelect/bitstring.hpp"
#include "qelect/primitives.hpp"
#include "qelect/register.hpp"

// Qubit-string anonymous key distribution. Two administrators jointly layer
// a register of l blocks of m qubits: each applies a Y mask whose block
// parities equal its secret parity share, under its own secret basis bits.
// The voter injects a pad-encrypted tag by a further Y mask whose block
// parities carry the tag, and the counter decodes by measuring in the
// combined basis and collapsing block parities. Used qubit by qubit, the Y
// masks cancel blockwise, so the counter learns the tag (hence the key)
// without anything in the transcript linking it to the voter.
namespace qelect::aqkd_string {

struct Params {
  std::size_t l = 32;  // blocks per register
  std::size_t m = 8;   // qubits per block
  std::size_t verify_check_bits = 4;
  int max_retries = 3;
  bool bob_flip_mask = false;      // optional transit-hardening Y masks
  EccCode ecc = EccCode::none();   // repetition(r) enables the lossy path
  double ecc_residual_rate_limit = 0.0;  // 0 selects the default for the code
  // Encrypted parity fold of the key inside the ECC payload; a silent
  // repetition-group miscorrection flips one payload bit and is caught here
  // instead of surfacing as a dead ballot key.
  std::size_t ecc_key_fold_bits = 4;

  void validate() const;
  double residual_rate_limit() const;
};

/// Length of the session key a voter establishes: l - m on the noiseless
/// path, l/r - m on the ECC path.
std::size_t key_len(const Params& params);

/// Number of tag blocks on the ECC path (l / repetition factor).
std::size_t ecc_info_blocks(const Params& params);

/// The key material shared during setup. Each administrator holds one
/// bundle; the counter holds both. Voters are issued only the combined
/// check and pad strings. The same strings serve every voter.
struct Keys {
  KeyBundle bundle1, bundle2;
  std::size_t l = 0, m = 0;

  BitString measurement_basis() const;  // combined per-position basis bits
  BitString parity_key() const;         // combined block parity bits
  BitString check_key() const;          // combined eligibility check bits
  BitString pad_key() const;            // combined tag pad bits

  static Keys setup(std::size_t l, std::size_t m, Rng& rng);
};

/// Per-session administrator Y masks, fresh for every voter session.
struct SessionMasks {
  BitString mask1, mask2;
  BitString combined() const { return mask1 ^ mask2; }
};

struct BobPrepared {
  SessionMasks masks;
  QubitRegister reg;
  BitString guard1, guard2;  // empty unless the transit guard is enabled
};

BobPrepared bob_prepare(const Keys& keys, const Params& params, Rng& rng);

/// Strips the optional transit guard at every received position.
void voter_remove_guard(QubitRegister& reg, const BitString& guard1,
                        const BitString& guard2);

struct VoterView {
  BitString key;         // freshly drawn session key
  BitString tag;         // pad-encrypted key || check string
  BitString block_mask;  // Y mask whose block parities equal the tag
};

struct VoterRandomized {
  VoterView view;
  QubitRegister reg;
};

/// Draws the session key, encrypts key || check under the pad, expands the
/// result into a parity-constrained Y mask and applies it. Requires a
/// complete register; lossy channels use voter_randomize_ecc.
VoterRandomized voter_randomize(QubitRegister&& reg,
                                const BitString& check_key,
                                const BitString& pad_key, std::size_t l,
                                std::size_t m, Rng& rng);

struct DecodeResult {
  bool accepted = false;
  BitString key;            // decoded session key
  BitString check_decoded;  // decoded check string; accepted iff it matches
  BitString raw_outcome;    // measured bits in the combined basis
  BitString tag_decoded;
};

DecodeResult charlie_decode(QubitRegister&& reg, const Keys& keys, Rng& rng);

// ---- lossy/noisy variant -------------------------------------------------

struct EccView {
  BitString key;        // session key carried by the info-word parities
  BitString info_word;  // parity-expanded payload before coding
  BitString code_mask;  // codeword applied positionwise as a Y mask
  std::vector<std::size_t> serials;  // positions the voter received
};

struct EccRandomized {
  EccView view;
  QubitRegister reg;
};

/// ECC-path randomization: the payload is carried by the parities of an
/// encoded info word applied only at received positions. Returns nullopt
/// when some code group has no received qubit left (session restart).
std::optional<EccRandomized> voter_randomize_ecc(QubitRegister&& reg,
                                                 const BitString& check_key,
                                                 const BitString& pad_key,
                                                 const Params& params,
                                                 Rng& rng);

struct EccDecodeResult {
  bool accepted = false;
  BitString key;
  BitString check_decoded;
  BitString info_word;  // recovered info word
  BitString tag_bits;   // its block parities
  double residual_error_rate = 0.0;
};

/// Measures the received positions, recovers the applied codeword relative
/// to the session masks, decodes with erasures punctured out, and accepts
/// when the re-encoded residual error rate is inside the code budget and
/// the decoded check string matches. nullopt means the code itself failed
/// (an empty or tied group): the session must restart.
std::optional<EccDecodeResult> charlie_decode_ecc(
    QubitRegister&& reg, const std::vector<std::size_t>& serials,
    const SessionMasks& masks, const Keys& keys, const Params& params,
    Rng& rng);

/// Same decode applied to an already-recorded measurement outcome. A
/// register can only be measured once, so pairing an anonymous submission
/// with its session masks means testing each candidate mask against the one
/// recorded outcome.
std::optional<EccDecodeResult> decode_ecc_outcome(
    const BitString& outcome, const std::vector<std::size_t>& usable,
    const SessionMasks& masks, const Keys& keys, const Params& params);

// ---- verification broadcast ----------------------------------------------

struct VerificationRecord {
  std::size_t session = 0;
  BitString prefix;
};

/// The counter publishes the leading check_bits of every accepted key.
std::vector<VerificationRecord> publish_verification(
    const std::vector<BitString>& session_keys, std::size_t check_bits);

/// A voter confirms when some published record equals its own key prefix.
bool voter_confirm(const BitString& own_key, std::size_t check_bits,
                   const std::vector<VerificationRecord>& records);

/// Key left over after the disclosed prefix is dropped; disclosed bits never
/// reach the ballot pad.
BitString usable_key(const BitString& key, std::size_t check_bits);

}  // namespace qelect::aqkd_string
