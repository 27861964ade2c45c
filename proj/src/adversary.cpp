#include "qelect/adversary.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

#include "qelect/aqkd_basic.hpp"
#include "qelect/density.hpp"
#include "qelect/election.hpp"
#include "qelect/rng.hpp"

namespace qelect::adversary {

Outcome probability_outcome(std::string metric, std::size_t hits,
                            std::size_t trials,
                            std::optional<double> closed_form) {
  if (trials == 0) {
    throw std::invalid_argument("probability_outcome: needs trials >= 1");
  }
  const double p = static_cast<double>(hits) / static_cast<double>(trials);
  if (p < 0.0 || p > 1.0) {
    throw std::logic_error("probability_outcome: estimate outside [0,1]");
  }
  Outcome out;
  out.metric = std::move(metric);
  out.estimate = p;
  out.std_error = std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
  out.closed_form = closed_form;
  out.trials = trials;
  return out;
}

void AttackConfig::validate() const {
  if (trials < 1) {
    throw std::invalid_argument("AttackConfig: trials must be positive");
  }
  if (m < 1) {
    throw std::invalid_argument("AttackConfig: m must be positive");
  }
  if (kind == AttackKind::TraceCollusion && n_voters < 1) {
    throw std::invalid_argument("AttackConfig: n_voters must be positive");
  }
}

QubitRegister intercept_resend_channel(QubitRegister&& reg, Rng& rng) {
  std::vector<QubitState> resent;
  std::vector<std::size_t> lost;
  resent.reserve(reg.size());
  for (std::size_t i = 0; i < reg.size(); ++i) {
    if (reg.is_lost(i)) {
      resent.push_back(QubitState::zero());
      lost.push_back(i);
      continue;
    }
    const Basis guess = basis_from_bit(rng.bit());
    auto [outcome, post] = measure_collapse(reg.state_at(i), guess, rng);
    (void)outcome;
    resent.push_back(post);
  }
  QubitRegister out(std::move(resent));
  for (auto i : lost) out.mark_lost(i);
  return out;
}

std::vector<Outcome> intercept_resend_attack(std::size_t transit_qubits,
                                             std::size_t check_bits,
                                             std::size_t detection_trials,
                                             std::uint64_t seed) {
  std::vector<Outcome> rows;

  // Error rate on announced check bits, accumulated over enough sessions to
  // cover the requested number of transit qubits.
  {
    aqkd_basic::TagRegistry registry;
    const std::size_t session_len = 100;
    std::size_t checked = 0;
    std::size_t mismatched = 0;
    std::uint64_t session = 0;
    while (checked < transit_qubits) {
      Rng rng(Rng::derive_seed(seed, session++));
      const auto shared = aqkd_basic::Preshared::issue(session_len, 32, rng);
      auto prepared =
          aqkd_basic::voter_prepare(shared.bases(), session_len, rng);
      QubitRegister transit =
          intercept_resend_channel(std::move(prepared.reg), rng);
      auto measured = aqkd_basic::charlie_measure_announce(
          std::move(transit), shared.bases(), shared.tag(), 0.5, registry,
          rng);
      if (!measured) continue;  // replayed tag draw; skip the session
      const auto& ann = measured->announcement;
      for (std::size_t i = 0; i < ann.check_positions.size(); ++i) {
        ++checked;
        if (ann.check_bits[i] != prepared.raw_key[ann.check_positions[i]]) {
          ++mismatched;
        }
      }
    }
    rows.push_back(probability_outcome("intercept_resend_error_rate",
                                       mismatched, checked, 0.25));
  }

  // Control arm: no eavesdropper, no errors.
  {
    Rng rng(Rng::derive_seed(seed, 1));
    aqkd_basic::TagRegistry registry;
    std::size_t checked = 0;
    std::size_t mismatched = 0;
    for (int s = 0; s < 20; ++s) {
      const auto shared = aqkd_basic::Preshared::issue(100, 32, rng);
      auto prepared = aqkd_basic::voter_prepare(shared.bases(), 100, rng);
      auto measured = aqkd_basic::charlie_measure_announce(
          std::move(prepared.reg), shared.bases(), shared.tag(), 0.5, registry,
          rng);
      if (!measured) continue;
      const auto& ann = measured->announcement;
      for (std::size_t i = 0; i < ann.check_positions.size(); ++i) {
        ++checked;
        if (ann.check_bits[i] != prepared.raw_key[ann.check_positions[i]]) {
          ++mismatched;
        }
      }
    }
    rows.push_back(probability_outcome("no_attack_error_rate", mismatched,
                                       checked, 0.0));
  }

  // Detection frequency with exactly check_bits disclosed positions; any
  // mismatch on a check bit reveals the eavesdropper.
  {
    aqkd_basic::TagRegistry registry;
    const std::size_t session_len = 2 * check_bits;
    std::size_t detected = 0;
    std::size_t done = 0;
    for (std::uint64_t t = 0; done < detection_trials; ++t) {
      Rng rng(Rng::derive_seed(seed ^ 0xde7ec7ULL, t));
      const auto shared = aqkd_basic::Preshared::issue(session_len, 32, rng);
      auto prepared =
          aqkd_basic::voter_prepare(shared.bases(), session_len, rng);
      QubitRegister transit =
          intercept_resend_channel(std::move(prepared.reg), rng);
      auto measured = aqkd_basic::charlie_measure_announce(
          std::move(transit), shared.bases(), shared.tag(), 0.5, registry,
          rng);
      if (!measured) continue;  // replayed tag draw; skip the session
      ++done;
      const auto extract = aqkd_basic::voter_verify_extract(
          prepared.raw_key, measured->announcement, 0.0);
      if (extract.mismatch_rate > 0.0) ++detected;
    }
    const double closed =
        1.0 - std::pow(0.75, static_cast<double>(check_bits));
    rows.push_back(probability_outcome(
        "intercept_resend_detection_n" + std::to_string(check_bits), detected,
        detection_trials, closed));
  }
  return rows;
}

namespace {

/// Key material without the protocol-level m >= 2 gate, so the single-check-
/// bit attack arms can run.
aqkd_string::Keys raw_keys(std::size_t l, std::size_t m, Rng& rng) {
  aqkd_string::Keys keys;
  keys.bundle1 = KeyBundle::random(l, m, rng);
  keys.bundle2 = KeyBundle::random(l, m, rng);
  keys.l = l;
  keys.m = m;
  return keys;
}

}  // namespace

std::vector<Outcome> forge_ballot_attack(std::size_t l, std::size_t m,
                                         std::size_t trials,
                                         std::uint64_t seed) {
  std::vector<Outcome> rows;
  {
    std::size_t accepted = 0;
    for (std::size_t t = 0; t < trials; ++t) {
      Rng rng(Rng::derive_seed(seed, t));  // independent, reorderable trials
      auto keys = raw_keys(l, m, rng);
      QubitRegister forged = encode_conjugate(random_bits(l * m, rng),
                                              random_bits(l * m, rng));
      auto decoded = aqkd_string::charlie_decode(std::move(forged), keys, rng);
      if (decoded.accepted) ++accepted;
    }
    rows.push_back(probability_outcome(
        "forge_acceptance_m" + std::to_string(m), accepted, trials,
        std::pow(0.5, static_cast<double>(m))));
  }
  {
    const std::size_t control = std::min<std::size_t>(trials, 500);
    std::size_t accepted = 0;
    aqkd_string::Params params;
    params.l = l;
    params.m = m;
    params.verify_check_bits = 1;
    for (std::size_t t = 0; t < control; ++t) {
      Rng rng(Rng::derive_seed(seed ^ 0xc0117201ULL, t));
      auto keys = raw_keys(l, m, rng);
      auto prepared = aqkd_string::bob_prepare(keys, params, rng);
      auto randomized = aqkd_string::voter_randomize(
          std::move(prepared.reg), keys.check_key(), keys.pad_key(), l, m,
          rng);
      auto decoded =
          aqkd_string::charlie_decode(std::move(randomized.reg), keys, rng);
      if (decoded.accepted) ++accepted;
    }
    rows.push_back(probability_outcome(
        "honest_acceptance_m" + std::to_string(m), accepted, control, 1.0));
  }
  return rows;
}

namespace {

/// One parity-comparison trial: each of m register holders measures its
/// first block in the guessed bases and reports the block XOR.
bool collusion_parities_coincide(const aqkd_string::Keys& keys,
                                 const aqkd_string::Params& params,
                                 const BitString& guess, Rng& rng) {
  const std::size_t m = params.m;
  BitString full_bases(keys.l * keys.m);
  for (std::size_t k = 0; k < m; ++k) full_bases.set(k, guess[k] != 0);

  int first_parity = 0;
  for (std::size_t holder = 0; holder < m; ++holder) {
    auto prepared = aqkd_string::bob_prepare(keys, params, rng);
    auto meas = measure_register(prepared.reg, full_bases, rng);
    int parity = 0;
    for (std::size_t k = 0; k < m; ++k) parity ^= meas.outcome[k];
    if (holder == 0) {
      first_parity = parity;
    } else if (parity != first_parity) {
      return false;
    }
  }
  return true;
}

}  // namespace

std::vector<Outcome> basis_collusion_attack(std::size_t m, std::size_t trials,
                                            std::uint64_t seed) {
  if (m < 1 || m > 16) {
    throw std::invalid_argument("basis_collusion_attack: need 1 <= m <= 16");
  }
  std::vector<Outcome> rows;
  aqkd_string::Params params;
  params.l = m + 1;
  params.m = m;
  params.verify_check_bits = 0;  // unused here
  const std::size_t guesses = std::size_t{1} << m;

  {
    std::size_t coincide = 0;
    for (std::size_t t = 0; t < trials; ++t) {
      Rng rng(Rng::derive_seed(seed, t));  // independent, reorderable trials
      auto keys = raw_keys(params.l, params.m, rng);
      const BitString true_block = keys.measurement_basis().prefix(m);
      BitString guess = true_block;
      if (guesses > 1) {
        const std::uint64_t delta = rng.below(guesses - 1) + 1;
        guess = true_block ^ BitString::from_uint(delta, m);
      }
      if (collusion_parities_coincide(keys, params, guess, rng)) ++coincide;
    }
    rows.push_back(probability_outcome(
        "collusion_parity_match_wrong_m" + std::to_string(m), coincide, trials,
        std::pow(0.5, static_cast<double>(m) - 1.0)));
  }
  {
    const std::size_t control = std::min<std::size_t>(trials, 2000);
    std::size_t coincide = 0;
    for (std::size_t t = 0; t < control; ++t) {
      Rng rng(Rng::derive_seed(seed ^ 0xc0115e1fULL, t));
      auto keys = raw_keys(params.l, params.m, rng);
      const BitString guess = keys.measurement_basis().prefix(m);
      if (collusion_parities_coincide(keys, params, guess, rng)) ++coincide;
    }
    rows.push_back(probability_outcome(
        "collusion_parity_match_correct_m" + std::to_string(m), coincide,
        control, 1.0));
  }

  // Exclusion economics: ruling out all wrong basis substrings takes
  // (2^m - 1) * m cooperating register holders in the single-pass strategy.
  {
    Outcome cost;
    cost.metric = "collusion_exclusion_cost_m" + std::to_string(m);
    cost.estimate = static_cast<double>((guesses - 1) * m);
    cost.closed_form = cost.estimate;
    cost.trials = 1;
    rows.push_back(cost);
  }
  if (m <= 4) {
    Rng rng(Rng::derive_seed(seed, 2));
    const std::size_t passes = 200;
    std::size_t excluded = 0;
    std::size_t tested = 0;
    for (std::size_t pass = 0; pass < passes; ++pass) {
      auto keys = raw_keys(params.l, params.m, rng);
      const BitString true_block = keys.measurement_basis().prefix(m);
      for (std::uint64_t g = 0; g < guesses; ++g) {
        const BitString guess = BitString::from_uint(g, m);
        if (guess == true_block) continue;
        ++tested;
        if (!collusion_parities_coincide(keys, params, guess, rng)) {
          ++excluded;
        }
      }
    }
    rows.push_back(probability_outcome(
        "collusion_exclusion_pass_rate_m" + std::to_string(m), excluded,
        tested, 1.0 - std::pow(0.5, static_cast<double>(m) - 1.0)));
  }
  return rows;
}

namespace {

election::Params trace_attack_params(std::size_t n_voters) {
  election::Params params;
  params.n_voters = n_voters;
  params.n_candidates = 2;
  params.ballot_bits = 2;
  params.kd.l = 20;
  params.kd.m = 2;
  params.kd.verify_check_bits = 4;
  return params;
}

}  // namespace

std::vector<Outcome> trace_collusion_attack(std::size_t n_voters,
                                            std::size_t runs,
                                            std::uint64_t seed) {
  if (n_voters < 1) {
    throw std::invalid_argument("trace_collusion_attack: need a voter");
  }
  const election::Params params = trace_attack_params(n_voters);
  std::size_t linked = 0;
  std::size_t consistent = 0;
  std::size_t consistency_checks = 0;

  for (std::size_t t = 0; t < runs; ++t) {
    election::Result result;
    for (std::uint64_t attempt = 0;; ++attempt) {
      result = election::run_full_election(
          params, {}, Rng::derive_seed(seed, t * 64 + attempt));
      if (result.completed && !result.board.empty()) break;
      if (attempt > 16) {
        throw std::runtime_error("trace_collusion_attack: election stuck");
      }
    }
    const auto& archive = result.archive;

    // Deterministic sub-check: every voter hypothesis reproduces a mask
    // whose block parities match the decoded tag, for every session.
    for (const auto& session : archive.sessions) {
      for (std::size_t v = 0; v < n_voters; ++v) {
        const BitString hypothesis =
            session.raw_outcome ^ archive.masks_by_voter[v].combined();
        ++consistency_checks;
        if (parity_collapse(hypothesis, archive.m) == session.tag_decoded) {
          ++consistent;
        }
      }
    }

    // Every hypothesis being consistent, the best link is a uniform guess.
    Rng guess_rng(Rng::derive_seed(seed ^ 0x5eedULL, t));
    const auto& target = result.board.front();
    const std::size_t session_index = archive.session_by_tag.at(target.tag);
    const std::size_t guess =
        static_cast<std::size_t>(guess_rng.below(n_voters));
    if (guess == archive.sessions[session_index].truth_voter) ++linked;
  }

  std::vector<Outcome> rows;
  rows.push_back(probability_outcome(
      "trace_link_accuracy_n" + std::to_string(n_voters), linked, runs,
      1.0 / static_cast<double>(n_voters)));
  rows.push_back(probability_outcome("trace_parity_consistent", consistent,
                                     consistency_checks, 1.0));
  return rows;
}

std::vector<Outcome> baseline_collusion_attack(std::size_t n_voters,
                                               std::size_t runs,
                                               std::uint64_t seed) {
  election::BaselineParams params;
  params.n_voters = n_voters;
  std::size_t linked = 0;
  for (std::size_t t = 0; t < runs; ++t) {
    auto result = election::classical_baseline_run(params, {},
                                                   Rng::derive_seed(seed, t));
    const auto& target = result.board.front();
    // Both administrators together know every voter's combined tag.
    std::size_t owner = n_voters;
    for (std::size_t v = 0; v < n_voters; ++v) {
      if (result.tag_of_voter[v] == target.tag) {
        owner = v;
        break;
      }
    }
    if (owner < n_voters && result.cast_codes[owner] == target.vote) ++linked;
  }
  std::vector<Outcome> rows;
  rows.push_back(probability_outcome(
      "baseline_link_accuracy_n" + std::to_string(n_voters), linked, runs,
      1.0));
  return rows;
}

// ---- density audits --------------------------------------------------------

namespace {

void require_enumeration_budget(std::size_t n) {
  if (n < 1 || n > 8) {
    throw std::invalid_argument(
        "density audit: exact enumeration budget is 1 <= l*m <= 8");
  }
}

/// Statevector of per-position gates applied to a product anchor state.
Eigen::VectorXd masked_statevector(const std::vector<QubitState>& anchor,
                                   std::uint64_t flip_mask,
                                   std::uint64_t basis_mask,
                                   std::uint64_t outer_basis_mask) {
  std::vector<QubitState> qubits;
  qubits.reserve(anchor.size());
  const std::size_t n = anchor.size();
  for (std::size_t i = 0; i < n; ++i) {
    QubitState q = anchor[i];
    if ((flip_mask >> (n - 1 - i)) & 1) q = apply_gate(q, Gate::FlipY);
    if ((basis_mask >> (n - 1 - i)) & 1) q = apply_gate(q, Gate::Hadamard);
    if ((outer_basis_mask >> (n - 1 - i)) & 1) {
      q = apply_gate(q, Gate::Hadamard);
    }
    qubits.push_back(q);
  }
  QubitRegister reg(std::move(qubits));
  return register_statevector(reg);
}

double mask_pair_mixture_distance(const std::vector<QubitState>& anchor,
                                  std::uint64_t outer_basis_mask) {
  const std::size_t n = anchor.size();
  const int dim = 1 << n;
  DensityAccumulator acc(dim);
  const double weight = std::pow(0.5, 2.0 * static_cast<double>(n));
  const std::uint64_t space = std::uint64_t{1} << n;
  for (std::uint64_t h = 0; h < space; ++h) {
    for (std::uint64_t y = 0; y < space; ++y) {
      acc.add(masked_statevector(anchor, y, h, outer_basis_mask), weight);
    }
  }
  return trace_distance(acc.finish(), DensityMatrix::maximally_mixed(dim));
}

}  // namespace

double outsider_density_distance(std::size_t l, std::size_t m) {
  const std::size_t n = l * m;
  require_enumeration_budget(n);
  return mask_pair_mixture_distance(
      std::vector<QubitState>(n, QubitState::zero()), 0);
}

double administrator_density_distance(std::size_t l, std::size_t m, int which,
                                      std::uint64_t anchor_seed) {
  const std::size_t n = l * m;
  require_enumeration_budget(n);
  if (which != 1 && which != 2) {
    throw std::invalid_argument("administrator_density_distance: which is 1 or 2");
  }
  Rng rng(anchor_seed);
  if (which == 1) {
    // The inner administrator knows its own layer; the unknown outer basis
    // and combined flip masks mix any anchored product state to uniform.
    std::vector<QubitState> anchor;
    anchor.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      QubitState q = QubitState::zero();
      if (rng.bit()) q = apply_gate(q, Gate::FlipY);
      if (rng.bit()) q = apply_gate(q, Gate::Hadamard);
      anchor.push_back(q);
    }
    return mask_pair_mixture_distance(anchor, 0);
  }
  // The outer administrator knows its basis layer; the voter's flip mask
  // absorbs its flip layer, leaving unknown inner pairs under a known outer
  // rotation.
  std::uint64_t outer = 0;
  for (std::size_t i = 0; i < n; ++i) {
    outer = (outer << 1) | static_cast<std::uint64_t>(rng.bit());
  }
  return mask_pair_mixture_distance(
      std::vector<QubitState>(n, QubitState::zero()), outer);
}

double counter_block_density_distance(std::size_t m, int parity1, int parity2,
                                      int tag_parity) {
  if (m < 2 || m > 8) {
    throw std::invalid_argument("counter audit: need 2 <= m <= 8");
  }
  const int dim = 1 << m;
  std::vector<double> histogram(static_cast<std::size_t>(dim), 0.0);
  double total = 0.0;
  for (int r1 = 0; r1 < dim; ++r1) {
    if ((std::popcount(static_cast<unsigned>(r1)) & 1) != (parity1 & 1)) {
      continue;
    }
    for (int r2 = 0; r2 < dim; ++r2) {
      if ((std::popcount(static_cast<unsigned>(r2)) & 1) != (parity2 & 1)) {
        continue;
      }
      for (int p = 0; p < dim; ++p) {
        if ((std::popcount(static_cast<unsigned>(p)) & 1) != (tag_parity & 1)) {
          continue;
        }
        histogram[static_cast<std::size_t>(r1 ^ r2 ^ p)] += 1.0;
        total += 1.0;
      }
    }
  }
  Eigen::MatrixXd rho = Eigen::MatrixXd::Zero(dim, dim);
  for (int x = 0; x < dim; ++x) {
    rho(x, x) = histogram[static_cast<std::size_t>(x)] / total;
  }
  return trace_distance(
      DensityMatrix(std::move(rho)),
      DensityMatrix::parity_subspace_mixture(static_cast<int>(m),
                                             (parity1 ^ parity2 ^ tag_parity) &
                                                 1));
}

double counter_block_density_distance_states(std::size_t m, int parity1,
                                             int parity2, int tag_parity,
                                             std::uint64_t anchor_seed) {
  if (m < 2 || m > 3) {
    throw std::invalid_argument("counter state audit: need 2 <= m <= 3");
  }
  const int dim = 1 << m;
  Rng rng(anchor_seed);
  const BitString basis1 = random_bits(m, rng);
  const BitString basis2 = random_bits(m, rng);
  const BitString basis = basis1 ^ basis2;

  DensityAccumulator acc(dim);
  std::vector<BitString> admissible1, admissible2, admissible_tag;
  for (int x = 0; x < dim; ++x) {
    BitString bits = BitString::from_uint(static_cast<std::uint64_t>(x), m);
    if (bits.parity() == (parity1 & 1)) admissible1.push_back(bits);
    if (bits.parity() == (parity2 & 1)) admissible2.push_back(bits);
    if (bits.parity() == (tag_parity & 1)) admissible_tag.push_back(bits);
  }
  const double weight =
      1.0 / (static_cast<double>(admissible1.size()) *
             static_cast<double>(admissible2.size()) *
             static_cast<double>(admissible_tag.size()));
  for (const auto& r1 : admissible1) {
    for (const auto& r2 : admissible2) {
      for (const auto& p : admissible_tag) {
        QubitRegister reg = prepare_layered(basis1, r1, basis2, r2);
        for (std::size_t k = 0; k < m; ++k) {
          if (p[k]) reg.apply_at(k, Gate::FlipY);
        }
        // Rotate into the counter's measurement frame.
        for (std::size_t k = 0; k < m; ++k) {
          if (basis[k]) reg.apply_at(k, Gate::Hadamard);
        }
        acc.add(register_statevector(reg), weight);
      }
    }
  }
  return trace_distance(
      acc.finish(),
      DensityMatrix::parity_subspace_mixture(static_cast<int>(m),
                                             (parity1 ^ parity2 ^ tag_parity) &
                                                 1));
}

std::vector<Outcome> density_audit(const std::string& view, std::size_t l,
                                   std::size_t m, std::uint64_t seed) {
  std::vector<Outcome> rows;
  auto distance_row = [](std::string metric, double distance,
                         std::size_t enumerated) {
    Outcome out;
    out.metric = std::move(metric);
    out.estimate = distance;
    out.closed_form = 0.0;
    out.trials = enumerated;
    return out;
  };
  const bool all = view == "all";
  const std::size_t n = l * m;
  const std::size_t pairs = n <= 8 ? (std::size_t{1} << (2 * n)) : 0;

  if (all || view == "outsider") {
    rows.push_back(distance_row("density_outsider",
                                outsider_density_distance(l, m), pairs));
  }
  if (all || view == "admin1") {
    rows.push_back(distance_row(
        "density_admin1", administrator_density_distance(l, m, 1, seed),
        pairs));
  }
  if (all || view == "admin2") {
    rows.push_back(distance_row(
        "density_admin2", administrator_density_distance(l, m, 2, seed),
        pairs));
  }
  if (all || view == "counter") {
    const std::size_t triples = std::size_t{1} << (3 * (m - 1));
    if (all) {
      // One row per view: the worst distance over all block parity values.
      double worst = 0.0;
      for (int bits = 0; bits < 8; ++bits) {
        worst = std::max(worst,
                         counter_block_density_distance(m, bits & 1,
                                                        (bits >> 1) & 1,
                                                        (bits >> 2) & 1));
      }
      if (m <= 3) {
        worst = std::max(
            worst, counter_block_density_distance_states(m, 0, 1, 1, seed));
      }
      rows.push_back(distance_row(
          "density_counter_blockwise_m" + std::to_string(m), worst,
          8 * triples));
    } else {
      for (int bits = 0; bits < 8; ++bits) {
        const int p1 = bits & 1;
        const int p2 = (bits >> 1) & 1;
        const int pt = (bits >> 2) & 1;
        rows.push_back(distance_row(
            "density_counter_block_m" + std::to_string(m) + "_p" +
                std::to_string(p1) + std::to_string(p2) + std::to_string(pt),
            counter_block_density_distance(m, p1, p2, pt), triples));
      }
      if (m <= 3) {
        rows.push_back(distance_row(
            "density_counter_block_states_m" + std::to_string(m),
            counter_block_density_distance_states(m, 0, 1, 1, seed), triples));
      }
    }
  }
  if (rows.empty()) {
    throw std::invalid_argument("density_audit: unknown view " + view);
  }
  return rows;
}

// ---- ECC-path forger study -------------------------------------------------

ForgerEccReport ecc_forger_study(const aqkd_string::Params& params,
                                 std::size_t trials, std::uint64_t seed,
                                 bool intercept_modify) {
  params.validate();
  if (!params.ecc.enabled()) {
    throw std::invalid_argument("ecc_forger_study: ECC path required");
  }
  ForgerEccReport report;
  report.trials = trials;
  double rate_sum = 0.0;
  const auto r = static_cast<std::size_t>(params.ecc.repeat);
  const int capability = params.ecc.correction_capability();
  const std::size_t n = params.l * params.m;

  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng(Rng::derive_seed(seed, t));
    auto keys = aqkd_string::Keys::setup(params.l, params.m, rng);
    auto prepared = aqkd_string::bob_prepare(keys, params, rng);

    QubitRegister carrier = intercept_modify
                                ? intercept_resend_channel(
                                      std::move(prepared.reg), rng)
                                : encode_conjugate(random_bits(n, rng),
                                                   random_bits(n, rng));

    // The forger runs the honest randomization with fabricated strings: it
    // knows the code but neither the basis nor the parity material.
    const BitString fake_check = random_bits(params.m, rng);
    const BitString fake_pad = random_bits(params.l, rng);
    auto randomized = aqkd_string::voter_randomize_ecc(
        std::move(carrier), fake_check, fake_pad, params, rng);
    const BitString& true_code = randomized->view.code_mask;
    const BitString& true_info = randomized->view.info_word;

    // Counter side, expanded so the observed codeword stays visible for the
    // ground-truth error accounting.
    const auto usable = randomized->reg.received_positions();
    MeasurementResult meas =
        measure_register(randomized->reg, keys.measurement_basis(), rng);
    const BitString expected = prepared.masks.combined();
    BitString code_observed(n);
    for (auto pos : usable) {
      code_observed.set(pos, (meas.outcome[pos] ^ expected[pos]) != 0);
    }

    std::size_t flips = 0;
    bool beyond_capability = false;
    for (std::size_t g = 0; g < n / r; ++g) {
      int group_flips = 0;
      for (std::size_t k = 0; k < r; ++k) {
        const std::size_t pos = g * r + k;
        if (code_observed[pos] != true_code[pos]) {
          ++flips;
          ++group_flips;
        }
      }
      if (group_flips > capability) beyond_capability = true;
    }
    rate_sum += static_cast<double>(flips) / static_cast<double>(n);
    if (beyond_capability) ++report.uncorrectable;

    auto decoded = aqkd_string::decode_ecc_outcome(meas.outcome, usable,
                                                   prepared.masks, keys,
                                                   params);
    if (!decoded || decoded->info_word != true_info) ++report.wrong_recovery;
    if (!decoded || !decoded->accepted) ++report.rejected;
  }
  report.mean_error_rate = rate_sum / static_cast<double>(trials);
  return report;
}

std::vector<Outcome> run_attack(const AttackConfig& config) {
  config.validate();
  switch (config.kind) {
    case AttackKind::InterceptResend:
      return intercept_resend_attack(config.trials, 20,
                                     std::max<std::size_t>(config.trials / 4,
                                                           1000),
                                     config.seed);
    case AttackKind::ForgeBallot:
      return forge_ballot_attack(config.m + 1, config.m, config.trials,
                                 config.seed);
    case AttackKind::BasisCollusion:
      return basis_collusion_attack(config.m, config.trials, config.seed);
    case AttackKind::TraceCollusion: {
      auto rows =
          trace_collusion_attack(config.n_voters, config.trials, config.seed);
      auto baseline = baseline_collusion_attack(
          config.n_voters, std::min<std::size_t>(config.trials, 200),
          config.seed + 1);
      rows.insert(rows.end(), baseline.begin(), baseline.end());
      return rows;
    }
    case AttackKind::DensityAudit:
      return density_audit(config.view, config.l, config.m, config.seed);
  }
  throw std::invalid_argument("run_attack: unknown attack kind");
}

}  // namespace qelect::adversary
