#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qelect/aqkd_string.hpp"
#include "qelect/bitstring.hpp"
#include "qelect/register.hpp"

// Attack models and exact security audits. Monte Carlo attacks report an
// estimate with its binomial standard error next to the closed form they
// are checked against; density audits are exact enumerations and report a
// trace distance that must vanish.
namespace qelect::adversary {

struct Outcome {
  std::string metric;
  double estimate = 0.0;
  double std_error = 0.0;
  std::optional<double> closed_form;
  std::size_t trials = 0;
};

/// Builds a probability outcome from a hit count; validates the range.
Outcome probability_outcome(std::string metric, std::size_t hits,
                            std::size_t trials,
                            std::optional<double> closed_form);

enum class AttackKind {
  InterceptResend,
  ForgeBallot,
  BasisCollusion,
  TraceCollusion,
  DensityAudit,
};

struct AttackConfig {
  AttackKind kind = AttackKind::InterceptResend;
  std::size_t trials = 10000;
  std::size_t m = 4;
  std::size_t l = 8;
  std::size_t n_voters = 2;
  std::string view = "all";  // density audit view selector
  std::uint64_t seed = 1;

  void validate() const;
};

std::vector<Outcome> run_attack(const AttackConfig& config);

/// Eavesdropper transform: measures every transit qubit in a uniformly
/// random basis and forwards the post-measurement eigenstate.
QubitRegister intercept_resend_channel(QubitRegister&& reg, Rng& rng);

/// Runs qubit-based sessions under the eavesdropper and reports the induced
/// check-bit error rate (closed form 1/4) plus the detection frequency with
/// `check_bits` check bits (closed form 1 - (3/4)^n).
std::vector<Outcome> intercept_resend_attack(std::size_t transit_qubits,
                                             std::size_t check_bits,
                                             std::size_t detection_trials,
                                             std::uint64_t seed);

/// A forger who knows the voter-side strings but not the preparation basis
/// or parity key submits fabricated registers; acceptance is checked
/// against the closed form 2^-m.
std::vector<Outcome> forge_ballot_attack(std::size_t l, std::size_t m,
                                         std::size_t trials,
                                         std::uint64_t seed);

/// m holders of honest registers jointly test a guessed basis substring by
/// comparing first-block parities. Wrong guesses coincide with probability
/// 1/2^(m-1); correct guesses always coincide.
std::vector<Outcome> basis_collusion_attack(std::size_t m, std::size_t trials,
                                            std::uint64_t seed);

/// Post-election collusion of both administrators and the counter against
/// the quantum path: every voter hypothesis is parity-consistent with every
/// session, so linking cannot beat chance 1/n.
std::vector<Outcome> trace_collusion_attack(std::size_t n_voters,
                                            std::size_t runs,
                                            std::uint64_t seed);

/// The same collusion against the classical baseline links every ballot.
std::vector<Outcome> baseline_collusion_attack(std::size_t n_voters,
                                               std::size_t runs,
                                               std::uint64_t seed);

// ---- exact density audits --------------------------------------------------

/// Mixture over all basis/flip mask pairs of a register of l*m qubits,
/// audited against the maximally mixed state. Requires l*m <= 8.
double outsider_density_distance(std::size_t l, std::size_t m);

/// Residual mixtures seen by a single administrator, anchored on a sampled
/// assignment of its own layer. `which` selects the inner (1) or outer (2)
/// administrator. Requires l*m <= 8.
double administrator_density_distance(std::size_t l, std::size_t m, int which,
                                      std::uint64_t anchor_seed);

/// Counter's per-block residual: all mask triples consistent with the given
/// block parities, audited against the uniform parity-subspace mixture.
/// Bit-level enumeration, m <= 8.
double counter_block_density_distance(std::size_t m, int parity1, int parity2,
                                      int tag_parity);

/// Same audit carried through the full state pipeline (prepare, mask,
/// rotate into the measurement frame); m <= 3 keeps it cheap.
double counter_block_density_distance_states(std::size_t m, int parity1,
                                             int parity2, int tag_parity,
                                             std::uint64_t anchor_seed);

/// All audits for one view ("outsider", "admin1", "admin2", "counter" or
/// "all") as outcome rows with closed form 0.
std::vector<Outcome> density_audit(const std::string& view, std::size_t l,
                                   std::size_t m, std::uint64_t seed);

// ---- ECC-path forger study -------------------------------------------------

struct ForgerEccReport {
  double mean_error_rate = 0.0;       // observed codeword error rate
  std::size_t uncorrectable = 0;      // trials with a group beyond capability
  std::size_t wrong_recovery = 0;     // decode failed or wrong info word
  std::size_t rejected = 0;           // end-to-end rejections
  std::size_t trials = 0;
};

/// Measures what a forger ignorant of the basis and parity strings does to
/// the recovered codeword, for a fabricated-register forger and for an
/// intercept-and-modify forger. Reported, not asserted against a closed
/// form; the repetition-code capability is the reference line.
ForgerEccReport ecc_forger_study(const aqkd_string::Params& params,
                                 std::size_t trials, std::uint64_t seed,
                                 bool intercept_modify);

}  // namespace qelect::adversary
