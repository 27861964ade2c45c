#include "qelect/harness.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "CLI11.hpp"
#include "qelect/aqkd_basic.hpp"
#include "qelect/election.hpp"
#include "qelect/rng.hpp"
#include "qelect/transcript.hpp"

namespace qelect::harness {

std::string format_double(double v) {
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, result.ptr);
}

std::string stats_csv(const std::vector<adversary::Outcome>& rows) {
  std::string out = "metric,estimate,stderr,closed_form,trials\n";
  for (const auto& row : rows) {
    out += row.metric + "," + format_double(row.estimate) + "," +
           format_double(row.std_error) + ",";
    if (row.closed_form) out += format_double(*row.closed_form);
    out += "," + std::to_string(row.trials) + "\n";
  }
  return out;
}

void RunConfig::validate() const {
  if (subcommand.empty()) {
    throw std::invalid_argument("no subcommand selected");
  }
  if (loss_p < 0.0 || loss_p > 1.0 || flip_p < 0.0 || flip_p > 1.0 ||
      admin_loss_p < 0.0 || admin_loss_p > 1.0 || admin_flip_p < 0.0 ||
      admin_flip_p > 1.0) {
    throw std::invalid_argument("channel probabilities must be in [0,1]");
  }
  if (ecc_repeat < 0) {
    throw std::invalid_argument("ecc repetition factor must be nonnegative");
  }
  if (subcommand == "aqkd-string" || subcommand == "election") {
    if (l <= m) {
      throw std::invalid_argument("l must exceed m");
    }
  }
  if (subcommand == "attack" && attack_kind.empty()) {
    throw std::invalid_argument("attack requires --kind");
  }
}

ParseOutcome parse_args(const std::vector<std::string>& args) {
  RunConfig cfg;
  CLI::App app{"qelect: distributed quantum election simulator"};
  app.require_subcommand(1);
  app.set_config("--config", "", "INI config file; flags take precedence");
  app.allow_config_extras(false);

  auto add_common = [&](CLI::App* sub) {
    sub->fallthrough(true);  // so --config reaches the top-level parser
    sub->add_option("--seed", cfg.seed, "master random seed");
    sub->add_option("--out-dir", cfg.out_dir, "output directory");
  };
  auto add_channel = [&](CLI::App* sub) {
    sub->add_option("--loss", cfg.loss_p,
                    "per-qubit loss probability, voter-to-counter leg")
        ->check(CLI::Range(0.0, 1.0));
    sub->add_option("--flip", cfg.flip_p,
                    "per-qubit flip probability, voter-to-counter leg")
        ->check(CLI::Range(0.0, 1.0));
    sub->add_option("--admin-loss", cfg.admin_loss_p,
                    "per-qubit loss probability, admin-to-voter leg")
        ->check(CLI::Range(0.0, 1.0));
    sub->add_option("--admin-flip", cfg.admin_flip_p,
                    "per-qubit flip probability, admin-to-voter leg")
        ->check(CLI::Range(0.0, 1.0));
  };
  auto add_dims = [&](CLI::App* sub) {
    sub->add_option("--l", cfg.l, "blocks per register");
    sub->add_option("--m", cfg.m, "qubits per block");
  };

  CLI::App* basic = app.add_subcommand("aqkd-basic",
                                       "qubit-based key distribution runs");
  add_common(basic);
  // One quantum hop here, so only the direct channel applies.
  basic->add_option("--loss", cfg.loss_p, "per-qubit loss probability")
      ->check(CLI::Range(0.0, 1.0));
  basic->add_option("--flip", cfg.flip_p, "per-qubit flip probability")
      ->check(CLI::Range(0.0, 1.0));
  basic->add_option("--m", cfg.m, "raw key length per session");
  basic->add_option("--sessions", cfg.sessions, "number of sessions");
  basic->add_option("--check-fraction", cfg.check_fraction,
                    "fraction of received bits disclosed")
      ->check(CLI::Range(0.0, 1.0));
  basic->add_option("--threshold", cfg.error_threshold,
                    "abort threshold on the check mismatch rate")
      ->check(CLI::Range(0.0, 1.0));
  basic->add_option("--retries", cfg.max_retries, "session retry budget");

  CLI::App* string_kd = app.add_subcommand(
      "aqkd-string", "qubit-string key distribution runs");
  add_common(string_kd);
  add_channel(string_kd);
  add_dims(string_kd);
  string_kd->add_option("--sessions", cfg.sessions, "number of sessions");
  string_kd->add_option("--ecc", cfg.ecc_repeat,
                        "repetition factor; 0 disables the ECC path");
  string_kd->add_flag("--flip-mask", cfg.bob_flip_mask,
                      "enable the administrators' transit guard masks");

  CLI::App* election_cmd =
      app.add_subcommand("election", "full distributed election");
  add_common(election_cmd);
  add_channel(election_cmd);
  add_dims(election_cmd);
  election_cmd->add_option("--voters", cfg.n_voters, "registered voters");
  election_cmd->add_option("--candidates", cfg.n_candidates,
                           "number of candidates");
  election_cmd->add_option("--s", cfg.ballot_bits, "candidate code length");
  election_cmd->add_option("--ecc", cfg.ecc_repeat,
                           "repetition factor; 0 disables the ECC path");
  election_cmd->add_option("--retries", cfg.max_retries,
                           "key distribution retry budget");
  election_cmd->add_option("--check-bits", cfg.verify_check_bits,
                           "verification disclosure size");
  election_cmd->add_flag("--flip-mask", cfg.bob_flip_mask,
                         "enable the administrators' transit guard masks");

  CLI::App* baseline =
      app.add_subcommand("baseline", "classical distributed baseline");
  add_common(baseline);
  baseline->add_option("--voters", cfg.n_voters, "registered voters");
  baseline->add_option("--candidates", cfg.n_candidates,
                       "number of candidates");
  baseline->add_option("--s", cfg.ballot_bits, "candidate code length");

  CLI::App* attack = app.add_subcommand("attack", "adversary simulations");
  add_common(attack);
  attack
      ->add_option("--kind", cfg.attack_kind,
                   "intercept-resend | forge-ballot | basis-collusion | "
                   "trace-collusion")
      ->required();
  attack->add_option("--trials", cfg.trials, "Monte Carlo trials");
  attack->add_option("--m", cfg.m, "protocol block size");
  attack->add_option("--l", cfg.l, "blocks per register");
  attack->add_option("--voters", cfg.n_voters, "anonymity set size");

  CLI::App* audit =
      app.add_subcommand("density-audit", "exact density-matrix audits");
  add_common(audit);
  add_dims(audit);
  audit->add_option("--view", cfg.view,
                    "outsider | admin1 | admin2 | counter | all");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  ParseOutcome outcome;
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    outcome.exit_code = kExitOk;
    outcome.message = app.help();
    return outcome;
  } catch (const CLI::ParseError& e) {
    outcome.exit_code = kExitConfig;
    outcome.message = e.what();
    return outcome;
  }

  cfg.subcommand = app.get_subcommands().front()->get_name();
  if (const char* env = std::getenv("QELECT_OUT_DIR")) {
    cfg.out_dir = env;
  }
  try {
    cfg.validate();
  } catch (const std::exception& e) {
    outcome.exit_code = kExitConfig;
    outcome.message = e.what();
    return outcome;
  }
  outcome.config = std::move(cfg);
  return outcome;
}

namespace {

aqkd_string::Params string_params(const RunConfig& cfg) {
  aqkd_string::Params kd;
  kd.l = cfg.l;
  kd.m = cfg.m;
  kd.verify_check_bits = cfg.verify_check_bits;
  kd.max_retries = cfg.max_retries;
  if (cfg.ecc_repeat > 0) kd.ecc = EccCode::repetition(cfg.ecc_repeat);
  kd.bob_flip_mask = cfg.bob_flip_mask;
  return kd;
}

adversary::Outcome plain_row(std::string metric, double estimate,
                             std::size_t trials) {
  adversary::Outcome out;
  out.metric = std::move(metric);
  out.estimate = estimate;
  out.trials = trials;
  return out;
}

int run_aqkd_basic(const RunConfig& cfg, Transcript& transcript,
                   std::vector<adversary::Outcome>& rows) {
  aqkd_basic::Params params;
  params.raw_len = cfg.m;
  params.check_fraction = cfg.check_fraction;
  params.error_threshold = cfg.error_threshold;
  params.max_retries = cfg.max_retries;
  params.validate();
  ChannelConfig ch{cfg.loss_p, cfg.flip_p};

  Rng rng(cfg.seed);
  aqkd_basic::TagRegistry registry;
  std::size_t completed = 0;
  std::size_t matched = 0;
  double mismatch_sum = 0.0;
  for (std::size_t s = 0; s < cfg.sessions; ++s) {
    auto outcome = aqkd_basic::run_session(
        params, aqkd_basic::lossy_channel(ch), registry, rng, &transcript);
    if (outcome.completed) {
      ++completed;
      if (outcome.voter_key == outcome.charlie_key) ++matched;
    }
    mismatch_sum += outcome.mismatch_rate;
  }
  rows.push_back(adversary::probability_outcome("basic_session_completed",
                                                completed, cfg.sessions,
                                                std::nullopt));
  if (completed > 0) {
    rows.push_back(adversary::probability_outcome("basic_keys_identical",
                                                  matched, completed, 1.0));
  }
  rows.push_back(plain_row("basic_mean_check_mismatch",
                           mismatch_sum / static_cast<double>(cfg.sessions),
                           cfg.sessions));
  return completed == 0 ? kExitProtocolAbort : kExitOk;
}

int run_aqkd_string(const RunConfig& cfg, Transcript& transcript,
                    std::vector<adversary::Outcome>& rows) {
  aqkd_string::Params kd = string_params(cfg);
  kd.validate();
  const ChannelConfig admin_leg{cfg.admin_loss_p, cfg.admin_flip_p};
  const ChannelConfig counter_leg{cfg.loss_p, cfg.flip_p};
  if (!kd.ecc.enabled() &&
      (admin_leg.loss_p > 0.0 || counter_leg.loss_p > 0.0)) {
    throw std::invalid_argument(
        "aqkd-string: losses require --ecc for the coded path");
  }

  Rng rng(cfg.seed);
  std::size_t completed = 0;
  std::size_t exact = 0;
  for (std::size_t s = 0; s < cfg.sessions; ++s) {
    auto keys = aqkd_string::Keys::setup(kd.l, kd.m, rng);
    auto prepared = aqkd_string::bob_prepare(keys, kd, rng);
    QubitRegister reg =
        channel_transmit(std::move(prepared.reg), admin_leg, rng);
    aqkd_string::voter_remove_guard(reg, prepared.guard1, prepared.guard2);
    if (kd.ecc.enabled()) {
      auto randomized = aqkd_string::voter_randomize_ecc(
          std::move(reg), keys.check_key(), keys.pad_key(), kd, rng);
      if (!randomized) {
        transcript.emit("keydist", "anon", "session_restart_requested", "");
        continue;
      }
      QubitRegister transit =
          channel_transmit(std::move(randomized->reg), counter_leg, rng);
      auto decoded = aqkd_string::charlie_decode_ecc(
          std::move(transit), randomized->view.serials,
          prepared.masks, keys, kd, rng);
      if (decoded && decoded->accepted) {
        ++completed;
        if (decoded->key == randomized->view.key) ++exact;
      }
      transcript.emit("keydist", "counter",
                      decoded && decoded->accepted ? "session_accepted"
                                                   : "session_rejected",
                      "");
    } else {
      auto randomized = aqkd_string::voter_randomize(
          std::move(reg), keys.check_key(), keys.pad_key(), kd.l, kd.m, rng);
      QubitRegister transit =
          channel_transmit(std::move(randomized.reg), counter_leg, rng);
      auto decoded = aqkd_string::charlie_decode(std::move(transit), keys, rng);
      if (decoded.accepted) {
        ++completed;
        if (decoded.key == randomized.view.key) ++exact;
      }
      transcript.emit("keydist", "counter",
                      decoded.accepted ? "session_accepted"
                                       : "session_rejected",
                      decoded.key.str());
    }
  }
  rows.push_back(adversary::probability_outcome("string_session_completed",
                                                completed, cfg.sessions,
                                                std::nullopt));
  if (completed > 0) {
    rows.push_back(adversary::probability_outcome("string_key_exact", exact,
                                                  completed, 1.0));
  }
  return completed == 0 ? kExitProtocolAbort : kExitOk;
}

int run_election(const RunConfig& cfg, Transcript& transcript,
                 std::vector<adversary::Outcome>& rows) {
  election::Params params;
  params.n_voters = cfg.n_voters;
  params.n_candidates = cfg.n_candidates;
  params.ballot_bits = cfg.ballot_bits;
  params.kd = string_params(cfg);
  params.admin_to_voter = ChannelConfig{cfg.admin_loss_p, cfg.admin_flip_p};
  params.voter_to_counter = ChannelConfig{cfg.loss_p, cfg.flip_p};

  auto result = election::run_full_election(params, {}, cfg.seed);
  transcript = result.transcript;
  rows.push_back(plain_row("election_completed",
                           result.completed ? 1.0 : 0.0, 1));
  for (const auto& [name, count] : result.tally) {
    rows.push_back(plain_row("tally_" + name, static_cast<double>(count), 1));
  }
  if (!result.voter_verified.empty()) {
    std::size_t verified = 0;
    for (bool v : result.voter_verified) verified += v ? 1 : 0;
    rows.push_back(adversary::probability_outcome(
        "voters_verified", verified, result.voter_verified.size(),
        std::nullopt));
  }
  return result.completed ? kExitOk : kExitProtocolAbort;
}

int run_baseline(const RunConfig& cfg, Transcript& transcript,
                 std::vector<adversary::Outcome>& rows) {
  election::BaselineParams params;
  params.n_voters = cfg.n_voters;
  params.n_candidates = cfg.n_candidates;
  params.ballot_bits = cfg.ballot_bits;
  auto result = election::classical_baseline_run(params, {}, cfg.seed);
  transcript = result.transcript;
  rows.push_back(plain_row("baseline_completed",
                           result.completed ? 1.0 : 0.0, 1));
  for (const auto& [name, count] : result.tally) {
    rows.push_back(plain_row("tally_" + name, static_cast<double>(count), 1));
  }
  return result.completed ? kExitOk : kExitProtocolAbort;
}

int run_attack_cmd(const RunConfig& cfg, Transcript& transcript,
                   std::vector<adversary::Outcome>& rows) {
  adversary::AttackConfig attack;
  attack.trials = cfg.trials;
  attack.m = cfg.m;
  attack.l = cfg.l;
  attack.n_voters = cfg.n_voters;
  attack.view = cfg.view;
  attack.seed = cfg.seed;
  if (cfg.attack_kind == "intercept-resend") {
    attack.kind = adversary::AttackKind::InterceptResend;
  } else if (cfg.attack_kind == "forge-ballot") {
    attack.kind = adversary::AttackKind::ForgeBallot;
  } else if (cfg.attack_kind == "basis-collusion") {
    attack.kind = adversary::AttackKind::BasisCollusion;
  } else if (cfg.attack_kind == "trace-collusion") {
    attack.kind = adversary::AttackKind::TraceCollusion;
  } else {
    throw std::invalid_argument("unknown attack kind: " + cfg.attack_kind);
  }
  rows = adversary::run_attack(attack);
  for (const auto& row : rows) {
    transcript.emit("attack", "harness", row.metric,
                    format_double(row.estimate));
  }
  return kExitOk;
}

int run_density_audit(const RunConfig& cfg, Transcript& transcript,
                      std::vector<adversary::Outcome>& rows) {
  rows = adversary::density_audit(cfg.view, cfg.l, cfg.m, cfg.seed);
  for (const auto& row : rows) {
    transcript.emit("audit", "harness", row.metric,
                    format_double(row.estimate));
  }
  return kExitOk;
}

/// Exact rows must hit the closed form to 1e-12; statistical rows must land
/// within four binomial standard errors of it, with the spread taken at the
/// closed-form probability.
bool row_check_passes(const adversary::Outcome& row) {
  if (!row.closed_form) return true;
  const double cf = *row.closed_form;
  const double gap = std::abs(row.estimate - cf);
  double sigma = row.std_error;
  if (cf > 0.0 && cf < 1.0 && row.trials > 0) {
    sigma = std::sqrt(cf * (1.0 - cf) / static_cast<double>(row.trials));
  }
  if (sigma == 0.0) return gap <= 1e-12;
  return gap <= 4.0 * sigma;
}

}  // namespace

int run_subcommand(const RunConfig& cfg) {
  cfg.validate();
  Transcript transcript(cfg.seed);
  std::vector<adversary::Outcome> rows;

  int exit_code = kExitOk;
  if (cfg.subcommand == "aqkd-basic") {
    exit_code = run_aqkd_basic(cfg, transcript, rows);
  } else if (cfg.subcommand == "aqkd-string") {
    exit_code = run_aqkd_string(cfg, transcript, rows);
  } else if (cfg.subcommand == "election") {
    exit_code = run_election(cfg, transcript, rows);
  } else if (cfg.subcommand == "baseline") {
    exit_code = run_baseline(cfg, transcript, rows);
  } else if (cfg.subcommand == "attack") {
    exit_code = run_attack_cmd(cfg, transcript, rows);
  } else if (cfg.subcommand == "density-audit") {
    exit_code = run_density_audit(cfg, transcript, rows);
  } else {
    throw std::invalid_argument("unknown subcommand: " + cfg.subcommand);
  }

  std::filesystem::create_directories(cfg.out_dir);
  {
    std::ofstream out(std::filesystem::path(cfg.out_dir) / "transcript.jsonl",
                      std::ios::binary);
    out << transcript.to_jsonl();
  }
  {
    std::ofstream out(std::filesystem::path(cfg.out_dir) / "stats.csv",
                      std::ios::binary);
    out << stats_csv(rows);
  }

  if (exit_code == kExitOk) {
    for (const auto& row : rows) {
      if (!row_check_passes(row)) {
        exit_code = kExitCheckFailure;
        break;
      }
    }
  }
  return exit_code;
}

}  // namespace qelect::harness
