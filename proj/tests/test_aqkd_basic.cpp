#include "doctest.h"

#include <cmath>

#include "oracles.hpp"
#include "qelect/adversary.hpp"
#include "qelect/aqkd_basic.hpp"
#include "qelect/rng.hpp"

using namespace qelect;
using namespace qelect::aqkd_basic;

namespace {
BitString bs(const char* s) { return BitString::from_string(s); }
}  // namespace

TEST_CASE("voter_prepare encodes under the pre-shared bases") {
  Rng rng(21);
  SUBCASE("known basis pattern") {
    // With bases 0110 a raw key 1010 yields |1>, |+>, |->, |0>.
    for (int attempt = 0; attempt < 200; ++attempt) {
      auto prepared = voter_prepare(bs("0110"), 4, rng);
      if (prepared.raw_key != bs("1010")) continue;
      CHECK(prepared.reg.state_at(0).equal_up_to_sign(QubitState::one()));
      CHECK(prepared.reg.state_at(1).equal_up_to_sign(QubitState::plus()));
      CHECK(prepared.reg.state_at(2).equal_up_to_sign(QubitState::minus()));
      CHECK(prepared.reg.state_at(3).equal_up_to_sign(QubitState::zero()));
      return;
    }
    FAIL("raw key 1010 never drawn");
  }
  SUBCASE("all-zero bases give computational states equal to the key") {
    auto prepared = voter_prepare(BitString(16), 16, rng);
    for (std::size_t i = 0; i < 16; ++i) {
      CHECK(prepared.reg.state_at(i).equal_up_to_sign(
          prepared.raw_key[i] ? QubitState::one() : QubitState::zero()));
    }
  }
  SUBCASE("all-one bases give diagonal states") {
    BitString ones(8);
    for (std::size_t i = 0; i < 8; ++i) ones.set(i, true);
    auto prepared = voter_prepare(ones, 8, rng);
    for (std::size_t i = 0; i < 8; ++i) {
      CHECK(prepared.reg.state_at(i).equal_up_to_sign(
          prepared.raw_key[i] ? QubitState::minus() : QubitState::plus()));
    }
  }
  CHECK_THROWS_AS(voter_prepare(bs("01"), 3, rng), std::invalid_argument);
}

TEST_CASE("charlie announcement agrees with the raw key in honest runs") {
  Rng rng(22);
  TagRegistry registry;
  for (int t = 0; t < 100; ++t) {
    const auto shared = Preshared::issue(32, 32, rng);
    auto prepared = voter_prepare(shared.bases(), 32, rng);
    auto measured = charlie_measure_announce(std::move(prepared.reg),
                                             shared.bases(), shared.tag(), 0.5,
                                             registry, rng);
    REQUIRE(measured.has_value());
    const auto& ann = measured->announcement;
    CHECK(ann.check_positions.size() == 16);
    CHECK(ann.check_bits == prepared.raw_key.select(ann.check_positions));
  }
}

TEST_CASE("duplicate tags are rejected across sessions") {
  Rng rng(23);
  TagRegistry registry;
  const auto shared = Preshared::issue(8, 32, rng);
  auto first = voter_prepare(shared.bases(), 8, rng);
  auto ok = charlie_measure_announce(std::move(first.reg), shared.bases(),
                                     shared.tag(), 0.5, registry, rng);
  CHECK(ok.has_value());
  auto second = voter_prepare(shared.bases(), 8, rng);
  auto replay = charlie_measure_announce(std::move(second.reg),
                                         shared.bases(), shared.tag(), 0.5,
                                         registry, rng);
  CHECK(!replay.has_value());
}

TEST_CASE("charlie rejects an empty register") {
  Rng rng(29);
  TagRegistry registry;
  CHECK_THROWS_AS(charlie_measure_announce(
                      QubitRegister(std::vector<QubitState>{}), BitString(0),
                      bs("1"), 0.5, registry, rng),
                  std::invalid_argument);
}

TEST_CASE("voter_verify_extract") {
  SUBCASE("honest announcement yields the residual key") {
    CheckAnnouncement ann;
    ann.received_positions = {0, 1, 2, 3, 4, 5};
    ann.check_positions = {1, 4};
    const BitString raw = bs("101100");
    ann.check_bits = raw.select(ann.check_positions);
    const auto result = voter_verify_extract(raw, ann, 0.05);
    CHECK(result.accepted);
    CHECK(result.mismatch_rate == doctest::Approx(0.0));
    CHECK(result.key == bs("1110"));  // positions 0,2,3,5
    CHECK(concat(result.key_left, result.key_right) == result.key);
  }
  SUBCASE("mismatches beyond the threshold abort") {
    CheckAnnouncement ann;
    ann.received_positions = {0, 1, 2, 3};
    ann.check_positions = {0, 1, 2, 3};
    ann.check_bits = bs("1100");
    const auto result = voter_verify_extract(bs("1001"), ann, 0.05);
    CHECK(!result.accepted);
    CHECK(result.mismatch_rate == doctest::Approx(0.5));
  }
  SUBCASE("checking every position leaves no key and aborts") {
    CheckAnnouncement ann;
    ann.received_positions = {0, 1, 2};
    ann.check_positions = {0, 1, 2};
    const BitString raw = bs("101");
    ann.check_bits = raw.select(ann.check_positions);
    const auto result = voter_verify_extract(raw, ann, 0.05);
    CHECK(!result.accepted);
  }
  SUBCASE("check positions must be announced as received") {
    CheckAnnouncement ann;
    ann.received_positions = {0, 2};
    ann.check_positions = {1};
    ann.check_bits = bs("0");
    CHECK_THROWS_AS(voter_verify_extract(bs("000"), ann, 0.05),
                    std::invalid_argument);
  }
}

TEST_CASE("honest sessions complete with identical keys on both sides") {
  Params params;
  params.raw_len = 32;
  Rng rng(31);
  TagRegistry registry;
  for (int t = 0; t < 1000; ++t) {
    const auto outcome =
        run_session(params, identity_channel(), registry, rng);
    REQUIRE(outcome.completed);
    CHECK(outcome.attempts == 1);
    CHECK(outcome.voter_key == outcome.charlie_key);
    CHECK(outcome.voter_key.size() == 32 - 16);
    CHECK(concat(outcome.voter_key_left, outcome.voter_key_right) ==
          outcome.voter_key);
  }
}

TEST_CASE("lossy channels still complete and announce the received subset") {
  Params params;
  params.raw_len = 100;
  Rng rng(37);
  TagRegistry registry;
  std::size_t received_total = 0;
  std::size_t runs = 0;
  for (int t = 0; t < 200; ++t) {
    const auto shared = Preshared::issue(100, 32, rng);
    auto prepared = voter_prepare(shared.bases(), 100, rng);
    QubitRegister transit =
        channel_transmit(std::move(prepared.reg), {0.5, 0.0}, rng);
    auto measured = charlie_measure_announce(std::move(transit),
                                             shared.bases(), shared.tag(), 0.5,
                                             registry, rng);
    REQUIRE(measured.has_value());
    received_total += measured->announcement.received_positions.size();
    ++runs;
    const auto extract = voter_verify_extract(prepared.raw_key,
                                              measured->announcement, 0.05);
    CHECK(extract.mismatch_rate == doctest::Approx(0.0));
  }
  const double mean =
      static_cast<double>(received_total) / static_cast<double>(runs);
  CHECK(std::abs(mean - 50.0) <=
        4.0 * oracle::binomial_stderr(0.5, 100 * runs) * 100.0);

  SUBCASE("run_session completes under loss with no flips") {
    const auto outcome = run_session(
        params, lossy_channel({0.3, 0.0}), registry, rng);
    CHECK(outcome.completed);
    CHECK(outcome.voter_key == outcome.charlie_key);
  }
}

TEST_CASE("intercept-resend induces fourfold errors and certain-ish detection") {
  Rng rng(41);
  TagRegistry registry;
  std::size_t checked = 0, mismatched = 0;
  for (int t = 0; t < 200; ++t) {
    const auto shared = Preshared::issue(100, 32, rng);
    auto prepared = voter_prepare(shared.bases(), 100, rng);
    QubitRegister transit =
        adversary::intercept_resend_channel(std::move(prepared.reg), rng);
    auto measured = charlie_measure_announce(std::move(transit),
                                             shared.bases(), shared.tag(), 0.5,
                                             registry, rng);
    REQUIRE(measured.has_value());
    const auto& ann = measured->announcement;
    for (std::size_t i = 0; i < ann.check_positions.size(); ++i) {
      ++checked;
      if (ann.check_bits[i] != prepared.raw_key[ann.check_positions[i]]) {
        ++mismatched;
      }
    }
  }
  const double rate =
      static_cast<double>(mismatched) / static_cast<double>(checked);
  CHECK(std::abs(rate - 0.25) <=
        4.0 * oracle::binomial_stderr(0.25, checked));

  SUBCASE("a 25% mismatch rate trips the 5% threshold and aborts") {
    CheckAnnouncement ann;
    ann.received_positions = {0, 1, 2, 3};
    ann.check_positions = {0, 1, 2, 3};
    ann.check_bits = bs("1000");
    const auto result = voter_verify_extract(bs("0000"), ann, 0.05);
    CHECK(!result.accepted);
    CHECK(result.mismatch_rate == doctest::Approx(0.25));
  }

  SUBCASE("detection frequency matches 1 - (3/4)^n") {
    const std::size_t n_checks = 10;
    const std::size_t sessions = 4000;
    std::size_t detected = 0;
    for (std::size_t t = 0; t < sessions; ++t) {
      const auto shared = Preshared::issue(2 * n_checks, 32, rng);
      auto prepared = voter_prepare(shared.bases(), 2 * n_checks, rng);
      QubitRegister transit =
          adversary::intercept_resend_channel(std::move(prepared.reg), rng);
      auto measured = charlie_measure_announce(
          std::move(transit), shared.bases(), shared.tag(), 0.5, registry,
          rng);
      REQUIRE(measured.has_value());
      const auto extract = voter_verify_extract(prepared.raw_key,
                                                measured->announcement, 0.0);
      if (extract.mismatch_rate > 0.0) ++detected;
    }
    const double freq =
        static_cast<double>(detected) / static_cast<double>(sessions);
    const double closed = 1.0 - std::pow(0.75, 10.0);
    CHECK(std::abs(freq - closed) <=
          4.0 * oracle::binomial_stderr(closed, sessions));
  }
}

TEST_CASE("phase transitions only move forward") {
  Phase phase = Phase::Prepared;
  advance_phase(phase, Phase::Measured);
  advance_phase(phase, Phase::Checked);
  CHECK_THROWS_AS(advance_phase(phase, Phase::Prepared), std::logic_error);
  advance_phase(phase, Phase::Completed);
  CHECK(phase == Phase::Completed);
}

TEST_CASE("session parameters are validated") {
  Params params;
  params.check_fraction = 1.5;
  CHECK_THROWS_AS(params.validate(), std::invalid_argument);
  params.check_fraction = 0.5;
  params.error_threshold = 1.0;
  CHECK_THROWS_AS(params.validate(), std::invalid_argument);
  params.error_threshold = 0.05;
  params.raw_len = 1;
  CHECK_THROWS_AS(params.validate(), std::invalid_argument);
}
