#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "oracles.hpp"
#include "qelect/density.hpp"
#include "qelect/qubit.hpp"
#include "qelect/register.hpp"
#include "qelect/rng.hpp"

using namespace qelect;

namespace {

BitString bs(const char* s) { return BitString::from_string(s); }

oracle::Vec2 as_oracle(const QubitState& q) { return {q.amp0(), q.amp1()}; }

oracle::Mat2 oracle_gate(Gate g) {
  switch (g) {
    case Gate::Identity: return oracle::identity();
    case Gate::Hadamard: return oracle::hadamard();
    case Gate::FlipY: return oracle::flip_y();
  }
  return {};
}

}  // namespace

TEST_CASE("apply_gate matches the independent matrix oracle") {
  CHECK(as_oracle(apply_gate(QubitState::zero(), Gate::Hadamard)).a0 ==
        doctest::Approx(as_oracle(QubitState::plus()).a0));
  CHECK(apply_gate(QubitState::zero(), Gate::Hadamard)
            .equal_up_to_sign(QubitState::plus()));

  // Y|1> = -|0>: sign carried exactly.
  const QubitState y_one = apply_gate(QubitState::one(), Gate::FlipY);
  CHECK(y_one.amp0() == doctest::Approx(-1.0));
  CHECK(y_one.amp1() == doctest::Approx(0.0));

  // Y|+> = -|->, via the oracle's 2x2 multiplication.
  const QubitState y_plus = apply_gate(QubitState::plus(), Gate::FlipY);
  const oracle::Vec2 expected =
      oracle::apply(oracle::flip_y(), as_oracle(QubitState::plus()));
  CHECK(oracle::close(as_oracle(y_plus), expected));
  const oracle::Vec2 minus = as_oracle(QubitState::minus());
  CHECK(oracle::close(as_oracle(y_plus), {-minus.a0, -minus.a1}));

  // Random states against the oracle for every gate.
  Rng rng(3);
  for (int t = 0; t < 500; ++t) {
    const double angle = rng.uniform() * 6.283185307179586;
    const QubitState q(std::cos(angle), std::sin(angle));
    for (Gate g : {Gate::Identity, Gate::Hadamard, Gate::FlipY}) {
      CHECK(oracle::close(as_oracle(apply_gate(q, g)),
                          oracle::apply(oracle_gate(g), as_oracle(q)), 1e-12));
    }
  }
}

TEST_CASE("gate algebra: H*H = I and Y*Y = -I at matrix level") {
  const Eigen::Matrix2d hh =
      gate_matrix(Gate::Hadamard) * gate_matrix(Gate::Hadamard);
  CHECK((hh - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() <= 1e-15);
  const Eigen::Matrix2d yy =
      gate_matrix(Gate::FlipY) * gate_matrix(Gate::FlipY);
  CHECK((yy + Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() <= 1e-15);

  // Applying any gate twice leaves all measurement distributions unchanged.
  Rng rng(17);
  for (int t = 0; t < 200; ++t) {
    const double angle = rng.uniform() * 6.283185307179586;
    const QubitState q(std::cos(angle), std::sin(angle));
    for (Gate g : {Gate::Identity, Gate::Hadamard, Gate::FlipY}) {
      const QubitState twice = apply_gate(apply_gate(q, g), g);
      for (Basis b : {Basis::Rectilinear, Basis::Diagonal}) {
        CHECK(prob_zero(twice, b) == doctest::Approx(prob_zero(q, b)));
      }
    }
  }
}

TEST_CASE("global sign is unobservable") {
  Rng rng(23);
  for (int t = 0; t < 100; ++t) {
    const double angle = rng.uniform() * 6.283185307179586;
    const QubitState q(std::cos(angle), std::sin(angle));
    const QubitState negated(-q.amp0(), -q.amp1());
    for (Basis b : {Basis::Rectilinear, Basis::Diagonal}) {
      CHECK(prob_zero(q, b) == doctest::Approx(prob_zero(negated, b)));
    }
  }
  CHECK_THROWS_AS(QubitState(0.9, 0.9), std::invalid_argument);
}

TEST_CASE("encode_conjugate") {
  {
    const QubitRegister reg = encode_conjugate(bs("0"), bs("0"));
    CHECK(reg.state_at(0).equal_up_to_sign(QubitState::zero()));
  }
  {
    const QubitRegister reg = encode_conjugate(bs("1"), bs("1"));
    CHECK(reg.state_at(0).equal_up_to_sign(QubitState::minus()));
  }
  {
    const QubitRegister reg = encode_conjugate(bs("01"), bs("10"));
    const oracle::Vec2 first =
        oracle::apply(oracle::hadamard(), {1.0, 0.0});
    CHECK(oracle::close(as_oracle(reg.state_at(0)), first));
    CHECK(reg.state_at(1).equal_up_to_sign(QubitState::one()));
  }
  CHECK_THROWS_AS(encode_conjugate(bs("01"), bs("0")), std::invalid_argument);
}

TEST_CASE("prepare_layered") {
  {
    const QubitRegister reg =
        prepare_layered(bs("000"), bs("000"), bs("000"), bs("000"));
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(reg.state_at(i).equal_up_to_sign(QubitState::zero()));
    }
  }
  {
    // Y|0> = |1>.
    const QubitRegister reg = prepare_layered(bs("0"), bs("1"), bs("0"),
                                              bs("0"));
    CHECK(reg.state_at(0).equal_up_to_sign(QubitState::one()));
  }
  {
    // H H Y |0> = |1>, exercising H^2 = I through the pipeline.
    const QubitRegister reg = prepare_layered(bs("1"), bs("1"), bs("1"),
                                              bs("0"));
    CHECK(reg.state_at(0).equal_up_to_sign(QubitState::one()));
  }
  CHECK_THROWS_AS(prepare_layered(bs("01"), bs("0"), bs("01"), bs("01")),
                  std::invalid_argument);
}

TEST_CASE("layer collapse: all 16 single-qubit cases reduce to combined masks") {
  // H^s2 Y^r2 H^s1 Y^r1 |0> equals H^(s1^s2) Y^(r1^r2) |0> up to sign.
  for (int s1 = 0; s1 < 2; ++s1) {
    for (int r1 = 0; r1 < 2; ++r1) {
      for (int s2 = 0; s2 < 2; ++s2) {
        for (int r2 = 0; r2 < 2; ++r2) {
          const QubitRegister layered = prepare_layered(
              BitString::from_uint(static_cast<std::uint64_t>(s1), 1),
              BitString::from_uint(static_cast<std::uint64_t>(r1), 1),
              BitString::from_uint(static_cast<std::uint64_t>(s2), 1),
              BitString::from_uint(static_cast<std::uint64_t>(r2), 1));
          oracle::Vec2 reduced{1.0, 0.0};
          if (r1 ^ r2) reduced = oracle::apply(oracle::flip_y(), reduced);
          if (s1 ^ s2) reduced = oracle::apply(oracle::hadamard(), reduced);
          CHECK(oracle::close_up_to_sign(as_oracle(layered.state_at(0)),
                                         reduced));
        }
      }
    }
  }
}

TEST_CASE("measurement of eigenstates is deterministic") {
  Rng rng(5);
  {
    QubitRegister reg = encode_conjugate(bs("0"), bs("0"));
    const auto result = measure_register(reg, bs("0"), rng);
    CHECK(result.outcome[0] == 0);
  }
  {
    // |+> measured diagonally reads 0 by the outcome convention.
    QubitRegister reg = encode_conjugate(bs("0"), bs("1"));
    const auto result = measure_register(reg, bs("1"), rng);
    CHECK(result.outcome[0] == 0);
  }
  {
    QubitRegister reg = encode_conjugate(bs("1"), bs("1"));
    const auto result = measure_register(reg, bs("1"), rng);
    CHECK(result.outcome[0] == 1);
  }
}

TEST_CASE("measurement consumes the register") {
  Rng rng(6);
  QubitRegister reg = encode_conjugate(bs("0101"), bs("0000"));
  (void)measure_register(reg, bs("0000"), rng);
  CHECK(reg.consumed());
  CHECK_THROWS_AS(measure_register(reg, bs("0000"), rng), std::logic_error);
  CHECK_THROWS_AS(reg.state_at(0), std::logic_error);
}

TEST_CASE("wrong-basis outcomes are uniform, right-basis exact") {
  Rng rng(7);
  const std::size_t samples = 10000;
  std::size_t zeros = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    QubitRegister reg = encode_conjugate(bs("0"), bs("1"));  // |+>
    const auto result = measure_register(reg, bs("0"), rng);
    if (result.outcome[0] == 0) ++zeros;
  }
  const double freq = static_cast<double>(zeros) / samples;
  CHECK(std::abs(freq - 0.5) <= 0.02);

  SUBCASE("correct-basis determinism over random strings") {
    for (int t = 0; t < 300; ++t) {
      const std::size_t n = 1 + rng.below(24);
      const BitString values = random_bits(n, rng);
      const BitString bases = random_bits(n, rng);
      QubitRegister reg = encode_conjugate(values, bases);
      const auto result = measure_register(reg, bases, rng);
      CHECK(result.outcome == values);
    }
  }

  SUBCASE("wrong-basis bits are unbiased, 3 sigma") {
    std::size_t ones = 0;
    const std::size_t n = 20000;
    for (std::size_t i = 0; i < n; ++i) {
      const int value = rng.bit();
      QubitRegister reg = encode_conjugate(
          BitString::from_uint(static_cast<std::uint64_t>(value), 1),
          bs("0"));
      const auto result = measure_register(reg, bs("1"), rng);
      ones += static_cast<std::size_t>(result.outcome[0]);
    }
    const double freq = static_cast<double>(ones) / static_cast<double>(n);
    CHECK(std::abs(freq - 0.5) <= 3.0 * oracle::binomial_stderr(0.5, n));
  }
}

TEST_CASE("Y flips outcomes in both bases") {
  Rng rng(8);
  for (Basis b : {Basis::Rectilinear, Basis::Diagonal}) {
    for (int bit = 0; bit < 2; ++bit) {
      QubitState q = QubitState::eigenstate(b, bit);
      q = apply_gate(q, Gate::FlipY);
      CHECK(sample_outcome(q, b, rng) == 1 - bit);
      CHECK(prob_zero(q, b) == doctest::Approx(bit == 0 ? 0.0 : 1.0));
    }
  }
}

TEST_CASE("channel transmission") {
  Rng rng(9);
  SUBCASE("identity channel leaves the register intact") {
    QubitRegister reg = encode_conjugate(bs("1010"), bs("0110"));
    QubitRegister out = channel_transmit(std::move(reg), {0.0, 0.0}, rng);
    CHECK(out.received_count() == 4);
    const auto result = measure_register(out, bs("0110"), rng);
    CHECK(result.outcome == bs("1010"));
  }
  SUBCASE("total loss marks every position") {
    QubitRegister reg = encode_conjugate(bs("1010"), bs("0000"));
    QubitRegister out = channel_transmit(std::move(reg), {1.0, 0.0}, rng);
    CHECK(out.received_count() == 0);
    const auto result = measure_register(out, bs("0000"), rng);
    CHECK(result.lost.size() == 4);
    CHECK(result.received.empty());
  }
  SUBCASE("certain flip turns |0> into a 1 outcome") {
    QubitRegister reg = encode_conjugate(bs("0"), bs("0"));
    QubitRegister out = channel_transmit(std::move(reg), {0.0, 1.0}, rng);
    const auto result = measure_register(out, bs("0"), rng);
    CHECK(result.outcome[0] == 1);
  }
  SUBCASE("loss rate tracks the binomial model") {
    std::size_t received = 0;
    const std::size_t n = 100, reps = 200;
    for (std::size_t i = 0; i < reps; ++i) {
      QubitRegister reg = encode_conjugate(random_bits(n, rng),
                                           random_bits(n, rng));
      QubitRegister out = channel_transmit(std::move(reg), {0.5, 0.0}, rng);
      received += out.received_count();
    }
    const double freq =
        static_cast<double>(received) / static_cast<double>(n * reps);
    CHECK(std::abs(freq - 0.5) <= 4.0 * oracle::binomial_stderr(0.5, n * reps));
  }
  const ChannelConfig bad{-0.1, 0.0};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("density matrices") {
  SUBCASE("pure |0> has projector diag(1,0)") {
    QubitRegister reg = encode_conjugate(bs("0"), bs("0"));
    const auto rho = ensemble_density({register_statevector(reg)}, {1.0});
    CHECK(rho.entries()(0, 0) == doctest::Approx(1.0));
    CHECK(rho.entries()(1, 1) == doctest::Approx(0.0));
  }
  SUBCASE("equal mixture of |0>,|1> is I/2") {
    QubitRegister zero = encode_conjugate(bs("0"), bs("0"));
    QubitRegister one = encode_conjugate(bs("1"), bs("0"));
    const auto rho = ensemble_density(
        {register_statevector(zero), register_statevector(one)}, {0.5, 0.5});
    CHECK(trace_distance(rho, DensityMatrix::maximally_mixed(2)) <= 1e-15);
  }
  SUBCASE("mixing one qubit over all basis/flip pairs gives I/2") {
    DensityAccumulator acc(2);
    for (int s = 0; s < 2; ++s) {
      for (int r = 0; r < 2; ++r) {
        QubitState q = QubitState::zero();
        if (r) q = apply_gate(q, Gate::FlipY);
        if (s) q = apply_gate(q, Gate::Hadamard);
        acc.add(q.amplitudes(), 0.25);
      }
    }
    CHECK(trace_distance(acc.finish(), DensityMatrix::maximally_mixed(2)) <=
          1e-15);
  }
  SUBCASE("validation rejects bad matrices") {
    Eigen::MatrixXd not_normalized = Eigen::MatrixXd::Identity(2, 2);
    CHECK_THROWS_AS((DensityMatrix(not_normalized)), std::invalid_argument);
    Eigen::MatrixXd asymmetric(2, 2);
    asymmetric << 0.5, 0.3, -0.3, 0.5;
    CHECK_THROWS_AS((DensityMatrix(asymmetric)), std::invalid_argument);
    Eigen::MatrixXd indefinite(2, 2);
    indefinite << 1.5, 0.0, 0.0, -0.5;
    CHECK_THROWS_AS((DensityMatrix(indefinite)), std::invalid_argument);
    Eigen::MatrixXd odd_dim = Eigen::MatrixXd::Identity(3, 3) / 3.0;
    CHECK_THROWS_AS((DensityMatrix(odd_dim)), std::invalid_argument);
  }
  SUBCASE("weights must sum to one") {
    QubitRegister reg = encode_conjugate(bs("0"), bs("0"));
    CHECK_THROWS_AS(ensemble_density({register_statevector(reg)}, {0.5}),
                    std::invalid_argument);
  }
}

TEST_CASE("trace distance") {
  const auto mixed = DensityMatrix::maximally_mixed(2);
  CHECK(trace_distance(mixed, mixed) == doctest::Approx(0.0));

  Eigen::MatrixXd p0 = Eigen::MatrixXd::Zero(2, 2);
  p0(0, 0) = 1.0;
  Eigen::MatrixXd p1 = Eigen::MatrixXd::Zero(2, 2);
  p1(1, 1) = 1.0;
  const DensityMatrix rho0(p0), rho1(p1);
  CHECK(trace_distance(rho0, rho1) == doctest::Approx(1.0));
  // Eigenvalues of I/2 - diag(1,0) are -1/2 and +1/2.
  CHECK(trace_distance(mixed, rho0) == doctest::Approx(0.5));
  CHECK_THROWS_AS(trace_distance(mixed, DensityMatrix::maximally_mixed(4)),
                  std::invalid_argument);
}

TEST_CASE("uniform register ensembles are maximally mixed up to lm = 4") {
  // Mixing H^s Y^r |0..0> over every mask pair.
  for (std::size_t n : {2u, 4u}) {
    const int dim = 1 << n;
    DensityAccumulator acc(dim);
    const double w = std::pow(0.5, 2.0 * static_cast<double>(n));
    for (std::uint64_t s = 0; s < (1ull << n); ++s) {
      for (std::uint64_t r = 0; r < (1ull << n); ++r) {
        QubitRegister reg =
            prepare_layered(BitString::from_uint(s, n),
                            BitString::from_uint(r, n), BitString(n),
                            BitString(n));
        acc.add(register_statevector(reg), w);
      }
    }
    CHECK(trace_distance(acc.finish(), DensityMatrix::maximally_mixed(dim)) <
          1e-12);
  }
}

TEST_CASE("parity subspace mixture") {
  const auto rho = DensityMatrix::parity_subspace_mixture(2, 0);
  CHECK(rho.entries()(0, 0) == doctest::Approx(0.5));  // |00>
  CHECK(rho.entries()(3, 3) == doctest::Approx(0.5));  // |11>
  CHECK(rho.entries()(1, 1) == doctest::Approx(0.0));
}

TEST_CASE("statevector access rules") {
  QubitRegister reg = encode_conjugate(bs("01"), bs("00"));
  reg.mark_lost(0);
  CHECK_THROWS_AS(register_statevector(reg), std::logic_error);
  CHECK_THROWS_AS(reg.apply_at(0, Gate::FlipY), std::logic_error);
  CHECK(reg.received_positions() == std::vector<std::size_t>{1});
}
