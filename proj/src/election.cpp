#include "qelect/election.hpp"

#include <algorithm>

#include "qelect/rng.hpp"

namespace qelect::election {

void Params::validate() const {
  kd.validate();
  admin_to_voter.validate();
  voter_to_counter.validate();
  if (n_candidates < 2) {
    throw std::invalid_argument("election: need at least two candidates");
  }
  if (ballot_bits < 1 || ballot_bits > 63) {
    throw std::invalid_argument("election: ballot_bits must be in [1,63]");
  }
  if (n_candidates > (std::size_t{1} << ballot_bits)) {
    throw std::invalid_argument(
        "election: candidate codes cannot be pairwise distinct");
  }
  if (min_code_distance > ballot_bits) {
    throw std::invalid_argument("election: min_code_distance too large");
  }
  const std::size_t usable =
      aqkd_string::key_len(kd) - kd.verify_check_bits;
  if (usable < 2 || usable / 2 < ballot_bits) {
    throw std::invalid_argument(
        "election: session key too short for the ballot pad; "
        "need key_len - check_bits >= 2 * ballot_bits");
  }
  if (!kd.ecc.enabled() &&
      (admin_to_voter.loss_p > 0.0 || voter_to_counter.loss_p > 0.0 ||
       admin_to_voter.flip_p > 0.0 || voter_to_counter.flip_p > 0.0)) {
    throw std::invalid_argument(
        "election: lossy or noisy channels require the ECC path");
  }
}

std::size_t Params::effective_message_budget() const {
  return message_budget ? message_budget : 4 * n_voters + 16;
}

CandidateSet CandidateSet::sample(std::size_t count, std::size_t bits,
                                  std::size_t min_distance, Rng& rng) {
  CandidateSet set;
  std::size_t attempts = 0;
  while (set.items_.size() < count) {
    if (++attempts > 1000 * (count + 1)) {
      throw std::invalid_argument(
          "CandidateSet: cannot satisfy distance constraint");
    }
    BitString code = random_bits(bits, rng);
    bool ok = true;
    for (const auto& existing : set.items_) {
      std::size_t distance = (existing.code ^ code).count_ones();
      if (distance == 0 || distance < min_distance) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    const auto i = set.items_.size();
    std::string name =
        i < 26 ? std::string(1, static_cast<char>('A' + i))
               : "C" + std::to_string(i);
    set.items_.push_back({std::move(name), std::move(code)});
  }
  return set;
}

bool CandidateSet::contains(const BitString& code) const {
  return find(code) != nullptr;
}

const Candidate* CandidateSet::find(const BitString& code) const {
  for (const auto& c : items_) {
    if (c.code == code) return &c;
  }
  return nullptr;
}

ChannelFn config_channel(const ChannelConfig& ch) {
  ch.validate();
  return [ch](QubitRegister&& reg, Rng& rng) {
    return channel_transmit(std::move(reg), ch, rng);
  };
}

State initialize_election(const Params& params, Rng& rng,
                          std::uint64_t run_id) {
  params.validate();
  State st;
  st.params = params;
  st.run_id = run_id;
  st.transcript = Transcript(run_id);
  st.keys = aqkd_string::Keys::setup(params.kd.l, params.kd.m, rng);
  st.candidates = CandidateSet::sample(params.n_candidates, params.ballot_bits,
                                       params.min_code_distance, rng);
  st.voters.resize(params.n_voters);
  for (std::size_t v = 0; v < params.n_voters; ++v) {
    st.voters[v].id = "V" + std::to_string(v + 1);
  }
  st.archive.l = params.kd.l;
  st.archive.m = params.kd.m;
  st.archive.masks_by_voter.resize(params.n_voters);

  std::string codes;
  for (const auto& c : st.candidates.items()) codes += c.code.str() + ";";
  st.transcript.emit("initial", "admin", "setup_distributed", "bundles");
  st.transcript.emit("initial", "admin", "candidates_published", codes);
  advance_phase(st.phase, Phase::KeyDistribution);
  return st;
}

namespace {

struct Submission {
  QubitRegister reg;
  std::vector<std::size_t> serials;
  std::size_t truth_voter;
};

struct MaskEntry {
  aqkd_string::SessionMasks masks;
  std::size_t truth_voter;
  bool used = false;
};

}  // namespace

void run_key_distribution(State& st, const ChannelFn& admin_leg,
                          const ChannelFn& counter_leg, Rng& rng) {
  if (st.phase != Phase::KeyDistribution) {
    throw std::logic_error("run_key_distribution: wrong phase");
  }
  const auto& kd = st.params.kd;
  const BitString check_key = st.keys.check_key();
  const BitString pad_key = st.keys.pad_key();

  std::vector<std::size_t> pending(st.voters.size());
  for (std::size_t v = 0; v < pending.size(); ++v) pending[v] = v;

  for (int round = 0; round <= kd.max_retries && !pending.empty(); ++round) {
    std::vector<Submission> submissions;
    std::vector<MaskEntry> mask_pool;  // published for decode on the ECC path
    std::map<std::size_t, BitString> round_key;  // voter -> session key drawn
    std::map<std::size_t, aqkd_string::SessionMasks> round_masks;

    for (auto v : pending) {
      auto prepared = aqkd_string::bob_prepare(st.keys, kd, rng);
      round_masks[v] = prepared.masks;
      st.transcript.emit("keydist", "admin", "register_issued",
                         prepared.masks.combined().str());
      QubitRegister reg = admin_leg(std::move(prepared.reg), rng);
      aqkd_string::voter_remove_guard(reg, prepared.guard1, prepared.guard2);

      if (kd.ecc.enabled()) {
        auto randomized = aqkd_string::voter_randomize_ecc(
            std::move(reg), check_key, pad_key, kd, rng);
        if (!randomized) {
          st.transcript.emit("keydist", "anon", "session_restart_requested",
                             st.voters[v].id);
          continue;  // too few received qubits; fresh register next round
        }
        round_key[v] = randomized->view.key;
        QubitRegister out = counter_leg(std::move(randomized->reg), rng);
        submissions.push_back(
            {std::move(out), std::move(randomized->view.serials), v});
        mask_pool.push_back({prepared.masks, v});
      } else {
        auto randomized = aqkd_string::voter_randomize(
            std::move(reg), check_key, pad_key, kd.l, kd.m, rng);
        round_key[v] = randomized.view.key;
        QubitRegister out = counter_leg(std::move(randomized.reg), rng);
        submissions.push_back({std::move(out), {}, v});
      }
    }

    // Anonymity channel: sender identity stripped, delivery order shuffled.
    rng.shuffle(submissions);
    rng.shuffle(mask_pool);

    std::vector<BitString> accepted_keys;
    std::vector<AdversaryArchive::SessionRecord> round_sessions;
    std::set<BitString> round_tags;

    for (auto& sub : submissions) {
      st.transcript.emit("keydist", "anon", "register_submitted",
                         std::to_string(sub.reg.size()));
      AdversaryArchive::SessionRecord record;
      BitString session_key;
      bool accepted = false;

      if (kd.ecc.enabled()) {
        // A register can be measured only once; record the outcome and test
        // each unused published mask against it until one decodes cleanly.
        const auto usable = sub.reg.received_positions();
        MeasurementResult meas =
            measure_register(sub.reg, st.keys.measurement_basis(), rng);
        for (auto& entry : mask_pool) {
          if (entry.used) continue;
          auto decoded = aqkd_string::decode_ecc_outcome(
              meas.outcome, usable, entry.masks, st.keys, kd);
          if (!decoded || !decoded->accepted) continue;
          entry.used = true;
          session_key = decoded->key;
          record.raw_outcome = meas.outcome;
          record.tag_decoded = decoded->tag_bits;
          accepted = true;
          break;
        }
      } else {
        auto decoded =
            aqkd_string::charlie_decode(std::move(sub.reg), st.keys, rng);
        if (decoded.accepted) {
          session_key = decoded.key;
          record.raw_outcome = decoded.raw_outcome;
          record.tag_decoded = decoded.tag_decoded;
          accepted = true;
        }
      }

      if (!accepted) {
        st.transcript.emit("keydist", "counter", "session_rejected", "decode");
        continue;
      }

      const BitString usable_bits =
          aqkd_string::usable_key(session_key, kd.verify_check_bits);
      const BitString tag = split_key(usable_bits).first;
      if (round_tags.count(tag) || st.counter_keys.count(tag)) {
        // Tag collision across sessions; drop this one, the voter retries.
        st.transcript.emit("keydist", "counter", "session_rejected",
                           "tag_collision");
        continue;
      }
      round_tags.insert(tag);
      record.key = session_key;
      record.truth_voter = sub.truth_voter;
      accepted_keys.push_back(session_key);
      round_sessions.push_back(std::move(record));
      st.transcript.emit("keydist", "counter", "session_accepted",
                         session_key.str());
    }

    const auto records = aqkd_string::publish_verification(
        accepted_keys, kd.verify_check_bits);
    st.transcript.emit("keydist", "counter", "verification_published",
                       std::to_string(records.size()));

    std::vector<std::size_t> still_pending;
    for (auto v : pending) {
      const auto it = round_key.find(v);
      const bool confirmed =
          it != round_key.end() &&
          aqkd_string::voter_confirm(it->second, kd.verify_check_bits,
                                     records);
      st.transcript.emit("keydist", st.voters[v].id,
                         confirmed ? "kd_confirmed" : "kd_failed", "");
      if (!confirmed) {
        still_pending.push_back(v);
        continue;
      }
      auto& voter = st.voters[v];
      voter.key = aqkd_string::usable_key(it->second, kd.verify_check_bits);
      auto halves = split_key(voter.key);
      voter.key_left = halves.first;
      voter.key_right = SingleUseKey(halves.second);
      voter.kd_confirmed = true;
      st.archive.masks_by_voter[v] = round_masks[v];
    }

    // The counter keeps every accepted session; anonymity means he cannot
    // tell which of them the publicly confirmed voters actually own.
    for (auto& record : round_sessions) {
      const BitString usable_bits =
          aqkd_string::usable_key(record.key, kd.verify_check_bits);
      auto halves = split_key(usable_bits);
      st.counter_keys[halves.first] = halves.second;
      st.archive.session_by_tag[halves.first] = st.archive.sessions.size();
      st.archive.sessions.push_back(std::move(record));
    }

    pending = std::move(still_pending);
  }

  if (!pending.empty()) {
    throw AbortError("key distribution failed for voter " +
                     st.voters[pending.front()].id + " after retries");
  }
  advance_phase(st.phase, Phase::Voting);
  st.transcript.emit("voting", "admin", "voting_opened", "");
}

void run_key_distribution(State& st, Rng& rng) {
  run_key_distribution(st, config_channel(st.params.admin_to_voter),
                       config_channel(st.params.voter_to_counter), rng);
}

Ballot make_ballot(VoterRecord& voter, const BitString& candidate_code,
                   const CandidateSet& candidates) {
  if (!candidates.contains(candidate_code)) {
    throw std::invalid_argument("make_ballot: choice not in candidate set");
  }
  Ballot ballot;
  ballot.ciphertext = otp_encrypt(voter.key_right.use(), candidate_code);
  ballot.tag = voter.key_left;
  voter.cast = true;
  voter.cast_code = candidate_code;
  return ballot;
}

const char* decision_name(BallotDecision d) {
  switch (d) {
    case BallotDecision::Accepted: return "accepted";
    case BallotDecision::UnknownTag: return "unknown_tag";
    case BallotDecision::ReplayedTag: return "replayed_tag";
    case BallotDecision::InvalidVote: return "invalid_vote";
  }
  return "invalid";
}

BallotDecision counter_receive(State& st, const Ballot& ballot) {
  if (st.phase != Phase::Voting) {
    throw std::logic_error("counter_receive: voting phase not open");
  }
  ++st.messages_seen;
  st.transcript.emit("voting", "anon", "ballot_submitted",
                     ballot.tag.str() + "|" + ballot.ciphertext.str());

  BallotDecision decision = BallotDecision::Accepted;
  const auto it = st.counter_keys.find(ballot.tag);
  if (it == st.counter_keys.end()) {
    decision = BallotDecision::UnknownTag;
  } else if (st.used_tags.count(ballot.tag)) {
    decision = BallotDecision::ReplayedTag;
  } else {
    const BitString vote = otp_decrypt(it->second, ballot.ciphertext);
    const Candidate* candidate = st.candidates.find(vote);
    if (candidate == nullptr) {
      decision = BallotDecision::InvalidVote;
    } else {
      st.used_tags.insert(ballot.tag);
      st.accepted.push_back({ballot.tag, vote});
      ++st.tally[candidate->name];
    }
  }
  st.transcript.emit("voting", "counter", "ballot_decision",
                     decision_name(decision));
  return decision;
}

bool voting_closed(const State& st) {
  return st.messages_seen >= st.voters.size() ||
         st.messages_seen >= st.params.effective_message_budget();
}

void publish_and_verify(State& st, Rng& rng) {
  if (st.phase != Phase::Voting) {
    throw std::logic_error("publish_and_verify: wrong phase");
  }
  if (!voting_closed(st)) {
    throw std::logic_error(
        "publish_and_verify: ballots outstanding and budget not exhausted");
  }
  advance_phase(st.phase, Phase::Counting);

  st.board = st.accepted;
  rng.shuffle(st.board);

  std::size_t total = 0;
  for (const auto& [name, count] : st.tally) total += count;
  if (total != st.accepted.size() || st.board.size() != st.accepted.size()) {
    throw std::logic_error("publish_and_verify: tally/board size mismatch");
  }

  std::string board_payload;
  for (const auto& entry : st.board) {
    board_payload += entry.tag.str() + ":" + entry.vote.str() + ";";
  }
  st.transcript.emit("counting", "counter", "board_published", board_payload);
  std::string tally_payload;
  for (const auto& [name, count] : st.tally) {
    tally_payload += name + "=" + std::to_string(count) + ";";
  }
  st.transcript.emit("counting", "counter", "tally_published", tally_payload);

  for (auto& voter : st.voters) {
    bool found = false;
    if (voter.cast) {
      for (const auto& entry : st.board) {
        if (entry.tag == voter.key_left && entry.vote == voter.cast_code) {
          found = true;
          break;
        }
      }
    }
    voter.board_verified = found;
    st.transcript.emit("counting", voter.id,
                       found ? "board_verified" : "board_verify_failed", "");
  }
  advance_phase(st.phase, Phase::Done);
}

Result run_full_election(const Params& params,
                         const std::vector<std::size_t>& choices,
                         std::uint64_t seed) {
  params.validate();
  if (!choices.empty() && choices.size() != params.n_voters) {
    throw std::invalid_argument("run_full_election: one choice per voter");
  }
  Rng rng(seed);
  Result result;
  State st = initialize_election(params, rng, seed);
  try {
    run_key_distribution(st, rng);

    std::vector<Ballot> ballots;
    for (std::size_t v = 0; v < st.voters.size(); ++v) {
      const std::size_t choice =
          choices.empty() ? static_cast<std::size_t>(
                                rng.below(st.candidates.size()))
                          : choices[v];
      if (choice >= st.candidates.size()) {
        throw std::invalid_argument("run_full_election: bad candidate index");
      }
      const BitString& code = st.candidates.items()[choice].code;
      ballots.push_back(make_ballot(st.voters[v], code, st.candidates));
      result.cast_codes.push_back(code);
    }
    rng.shuffle(ballots);  // anonymity channel for the voting phase
    for (const auto& ballot : ballots) {
      counter_receive(st, ballot);
    }
    publish_and_verify(st, rng);
    result.completed = true;
  } catch (const AbortError& err) {
    result.completed = false;
    result.abort_reason = err.what();
    st.transcript.emit("aborted", "admin", "election_aborted", err.what());
  }

  result.tally = st.tally;
  result.board = st.board;
  for (const auto& voter : st.voters) {
    result.voter_verified.push_back(voter.board_verified);
  }
  result.transcript = st.transcript;
  result.archive = std::move(st.archive);
  result.candidates = st.candidates;
  return result;
}

bool tally_confined_to_counting(const Transcript& transcript) {
  for (const auto& event : transcript.events()) {
    if (event.event == "board_published" || event.event == "tally_published") {
      if (event.phase != "counting" && event.phase != "done") return false;
    }
  }
  return true;
}

// ---- classical baseline ----------------------------------------------------

bool RegistrationDesk::register_request(const BitString& voter_secret) {
  return seen_.insert(voter_secret).second;
}

void BaselineParams::validate() const {
  if (n_candidates < 2) {
    throw std::invalid_argument("baseline: need at least two candidates");
  }
  if (ballot_bits < 1 || ballot_bits > 63) {
    throw std::invalid_argument("baseline: ballot_bits must be in [1,63]");
  }
  if (n_candidates > (std::size_t{1} << ballot_bits)) {
    throw std::invalid_argument("baseline: candidate codes cannot be distinct");
  }
  if (tag_bits < 1) {
    throw std::invalid_argument("baseline: tag_bits must be positive");
  }
}

BaselineResult classical_baseline_run(const BaselineParams& params,
                                      const std::vector<std::size_t>& choices,
                                      std::uint64_t seed) {
  params.validate();
  if (!choices.empty() && choices.size() != params.n_voters) {
    throw std::invalid_argument("classical_baseline_run: one choice per voter");
  }
  Rng rng(seed);
  BaselineResult result;
  result.transcript = Transcript(seed);
  result.candidates = CandidateSet::sample(params.n_candidates,
                                           params.ballot_bits, 0, rng);
  {
    std::string codes;
    for (const auto& c : result.candidates.items()) codes += c.code.str() + ";";
    result.transcript.emit("initial", "admin", "candidates_published", codes);
  }

  RegistrationDesk desk;
  struct VoterStrings {
    BitString pad;  // combined one-time pad for the ballot
    BitString tag;  // combined tag
  };
  std::vector<VoterStrings> voters(params.n_voters);
  std::map<BitString, BitString> counter_table;  // tag -> pad

  for (std::size_t v = 0; v < params.n_voters; ++v) {
    const BitString secret = random_bits(32, rng);
    if (!desk.register_request(secret)) {
      throw std::logic_error("baseline: duplicate registration in honest run");
    }
    result.transcript.emit("initial", "V" + std::to_string(v + 1),
                           "registered", secret.str());
    const BitString pad_half1 = random_bits(params.ballot_bits, rng);
    const BitString tag_half1 = random_bits(params.tag_bits, rng);
    const BitString pad_half2 = random_bits(params.ballot_bits, rng);
    const BitString tag_half2 = random_bits(params.tag_bits, rng);
    voters[v].pad = pad_half1 ^ pad_half2;
    voters[v].tag = tag_half1 ^ tag_half2;
    counter_table[voters[v].tag] = voters[v].pad;
    result.tag_of_voter.push_back(voters[v].tag);
  }

  struct BaselineBallot {
    BitString tag;
    BitString ciphertext;
  };
  std::vector<BaselineBallot> ballots;
  for (std::size_t v = 0; v < params.n_voters; ++v) {
    const std::size_t choice =
        choices.empty()
            ? static_cast<std::size_t>(rng.below(result.candidates.size()))
            : choices[v];
    const BitString& code = result.candidates.items()[choice].code;
    ballots.push_back({voters[v].tag, otp_encrypt(voters[v].pad, code)});
    result.cast_codes.push_back(code);
  }
  rng.shuffle(ballots);

  std::set<BitString> used;
  std::vector<BoardEntry> accepted;
  for (const auto& ballot : ballots) {
    result.transcript.emit("voting", "anon", "ballot_submitted",
                           ballot.tag.str() + "|" + ballot.ciphertext.str());
    const auto it = counter_table.find(ballot.tag);
    if (it == counter_table.end() || used.count(ballot.tag)) {
      result.transcript.emit("voting", "counter", "ballot_decision",
                             "rejected");
      continue;
    }
    const BitString vote = otp_decrypt(it->second, ballot.ciphertext);
    const Candidate* candidate = result.candidates.find(vote);
    if (candidate == nullptr) {
      result.transcript.emit("voting", "counter", "ballot_decision",
                             "invalid_vote");
      continue;
    }
    used.insert(ballot.tag);
    accepted.push_back({ballot.tag, vote});
    ++result.tally[candidate->name];
    result.transcript.emit("voting", "counter", "ballot_decision", "accepted");
  }

  result.board = std::move(accepted);
  rng.shuffle(result.board);
  std::string board_payload;
  for (const auto& entry : result.board) {
    board_payload += entry.tag.str() + ":" + entry.vote.str() + ";";
  }
  result.transcript.emit("counting", "counter", "board_published",
                         board_payload);
  result.completed = true;
  return result;
}

}  // namespace qelect::election
