#include "qelect/register.hpp"

#include <stdexcept>

#include "qelect/rng.hpp"

namespace qelect {

QubitRegister::QubitRegister(std::vector<QubitState> qubits)
    : qubits_(std::move(qubits)), lost_(qubits_.size(), 0) {}

bool QubitRegister::is_lost(std::size_t i) const {
  if (i >= lost_.size()) throw std::out_of_range("QubitRegister: bad index");
  return lost_[i] != 0;
}

std::size_t QubitRegister::received_count() const {
  std::size_t n = 0;
  for (auto l : lost_) n += l ? 0 : 1;
  return n;
}

std::vector<std::size_t> QubitRegister::received_positions() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < lost_.size(); ++i) {
    if (!lost_[i]) out.push_back(i);
  }
  return out;
}

void QubitRegister::require_live(std::size_t i) const {
  if (consumed_) {
    throw std::logic_error("QubitRegister: register already measured");
  }
  if (is_lost(i)) {
    throw std::logic_error("QubitRegister: position was lost in transit");
  }
}

const QubitState& QubitRegister::state_at(std::size_t i) const {
  require_live(i);
  return qubits_[i];
}

void QubitRegister::apply_at(std::size_t i, Gate g) {
  require_live(i);
  qubits_[i] = apply_gate(qubits_[i], g);
}

void QubitRegister::mark_lost(std::size_t i) {
  if (i >= lost_.size()) throw std::out_of_range("QubitRegister: bad index");
  lost_[i] = 1;
}

QubitRegister encode_conjugate(const BitString& value_bits,
                               const BitString& basis_bits) {
  if (value_bits.size() != basis_bits.size()) {
    throw std::invalid_argument("encode_conjugate: length mismatch");
  }
  std::vector<QubitState> qubits;
  qubits.reserve(value_bits.size());
  for (std::size_t i = 0; i < value_bits.size(); ++i) {
    QubitState q = value_bits[i] ? QubitState::one() : QubitState::zero();
    if (basis_bits[i]) q = apply_gate(q, Gate::Hadamard);
    qubits.push_back(q);
  }
  return QubitRegister(std::move(qubits));
}

QubitRegister prepare_layered(const BitString& basis1, const BitString& flip1,
                              const BitString& basis2,
                              const BitString& flip2) {
  const std::size_t n = basis1.size();
  if (flip1.size() != n || basis2.size() != n || flip2.size() != n) {
    throw std::invalid_argument("prepare_layered: length mismatch");
  }
  std::vector<QubitState> qubits;
  qubits.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    QubitState q = QubitState::zero();
    if (flip1[i]) q = apply_gate(q, Gate::FlipY);
    if (basis1[i]) q = apply_gate(q, Gate::Hadamard);
    if (flip2[i]) q = apply_gate(q, Gate::FlipY);
    if (basis2[i]) q = apply_gate(q, Gate::Hadamard);
    qubits.push_back(q);
  }
  return QubitRegister(std::move(qubits));
}

MeasurementResult measure_register(QubitRegister& reg,
                                   const BitString& basis_bits, Rng& rng) {
  if (basis_bits.size() != reg.size()) {
    throw std::invalid_argument("measure_register: basis length mismatch");
  }
  if (reg.consumed_) {
    throw std::logic_error("measure_register: register already measured");
  }
  MeasurementResult result;
  result.outcome = BitString(reg.size());
  for (std::size_t i = 0; i < reg.size(); ++i) {
    if (reg.lost_[i]) {
      result.lost.push_back(i);
      continue;
    }
    const int bit = sample_outcome(reg.qubits_[i],
                                   basis_from_bit(basis_bits[i]), rng);
    result.outcome.set(i, bit != 0);
    result.received.push_back(i);
  }
  reg.consumed_ = true;
  reg.qubits_.assign(reg.qubits_.size(), QubitState::zero());
  return result;
}

void ChannelConfig::validate() const {
  if (loss_p < 0.0 || loss_p > 1.0 || flip_p < 0.0 || flip_p > 1.0) {
    throw std::invalid_argument("ChannelConfig: probabilities must be in [0,1]");
  }
}

QubitRegister channel_transmit(QubitRegister&& reg, const ChannelConfig& ch,
                               Rng& rng) {
  ch.validate();
  if (reg.consumed()) {
    throw std::logic_error("channel_transmit: register already measured");
  }
  for (std::size_t i = 0; i < reg.size(); ++i) {
    if (reg.is_lost(i)) continue;
    if (rng.bernoulli(ch.loss_p)) {
      reg.mark_lost(i);
      continue;
    }
    if (rng.bernoulli(ch.flip_p)) {
      reg.apply_at(i, Gate::FlipY);
    }
  }
  return std::move(reg);
}

}  // namespace qelect
