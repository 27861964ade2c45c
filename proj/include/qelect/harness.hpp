#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qelect/adversary.hpp"

namespace qelect::harness {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitProtocolAbort = 3;
inline constexpr int kExitCheckFailure = 4;

struct RunConfig {
  std::string subcommand;
  std::uint64_t seed = 1;
  std::size_t l = 32;
  std::size_t m = 8;
  std::size_t ballot_bits = 8;
  std::size_t n_voters = 5;
  std::size_t n_candidates = 2;
  double loss_p = 0.0;        // voter-to-counter leg
  double flip_p = 0.0;
  double admin_loss_p = 0.0;  // admin-to-voter leg
  double admin_flip_p = 0.0;
  std::size_t trials = 10000;
  std::size_t sessions = 1000;
  int ecc_repeat = 0;  // 0 disables the ECC path
  bool bob_flip_mask = false;
  std::size_t verify_check_bits = 4;
  int max_retries = 3;
  double check_fraction = 0.5;
  double error_threshold = 0.05;
  std::string attack_kind;  // attack subcommand only
  std::string view = "all";
  std::string out_dir = "out";

  /// Cross-field validation beyond what the flag parser enforces.
  void validate() const;
};

struct ParseOutcome {
  int exit_code = kExitOk;
  std::optional<RunConfig> config;  // set only when parsing succeeded
  std::string message;              // help text or error description
};

/// Parses argv-style arguments (no program name). Supports an INI config
/// file via --config; command-line flags override file values and unknown
/// keys are rejected. QELECT_OUT_DIR overrides the output directory.
ParseOutcome parse_args(const std::vector<std::string>& args);

/// Executes the parsed run, writing transcript.jsonl and stats.csv under
/// the output directory. Returns kExitOk, kExitProtocolAbort when a
/// protocol run aborted, or kExitCheckFailure when a statistic with a
/// closed form missed it by more than four standard errors (exact audits:
/// by more than 1e-12).
int run_subcommand(const RunConfig& config);

/// metric,estimate,stderr,closed_form,trials with closed_form left empty
/// when absent. Deterministic shortest-round-trip float formatting.
std::string stats_csv(const std::vector<adversary::Outcome>& rows);

std::string format_double(double v);

}  // namespace qelect::harness
