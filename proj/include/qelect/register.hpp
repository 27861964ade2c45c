#pragma once

#include <vector>

#include "qelect/bitstring.hpp"
#include "qelect/qubit.hpp"

namespace qelect {

class Rng;
class QubitRegister;

struct MeasurementResult {
  /// Full-length outcome; bits at lost positions are zero and meaningless.
  BitString outcome;
  std::vector<std::size_t> lost;
  std::vector<std::size_t> received;
};

/// Born-rule samples every non-lost position in the selected bases and
/// consumes the register. Lost positions are reported, never sampled.
MeasurementResult measure_register(QubitRegister& reg,
                                   const BitString& basis_bits, Rng& rng);

/// Ordered single-qubit register with per-position loss flags.
///
/// Measurement consumes the register: amplitudes of a consumed or lost
/// position cannot be read, and a second measurement throws. Registers are
/// move-only; the protocols hand a register from party to party rather than
/// duplicating it.
class QubitRegister {
 public:
  explicit QubitRegister(std::vector<QubitState> qubits);

  QubitRegister(const QubitRegister&) = delete;
  QubitRegister& operator=(const QubitRegister&) = delete;
  QubitRegister(QubitRegister&&) = default;
  QubitRegister& operator=(QubitRegister&&) = default;

  std::size_t size() const { return qubits_.size(); }
  bool consumed() const { return consumed_; }
  bool is_lost(std::size_t i) const;
  std::size_t received_count() const;
  std::vector<std::size_t> received_positions() const;

  const QubitState& state_at(std::size_t i) const;
  void apply_at(std::size_t i, Gate g);
  void mark_lost(std::size_t i);

 private:
  std::vector<QubitState> qubits_;
  std::vector<std::uint8_t> lost_;
  bool consumed_ = false;

  void require_live(std::size_t i) const;

  friend MeasurementResult measure_register(QubitRegister& reg,
                                            const BitString& basis_bits,
                                            Rng& rng);
};

/// Position j carries H^basis_j |value_j>; no lost positions.
QubitRegister encode_conjugate(const BitString& value_bits,
                               const BitString& basis_bits);

/// Position k carries H^basis2_k Y^flip2_k H^basis1_k Y^flip1_k |0>.
QubitRegister prepare_layered(const BitString& basis1, const BitString& flip1,
                              const BitString& basis2, const BitString& flip2);

struct ChannelConfig {
  double loss_p = 0.0;
  double flip_p = 0.0;
  void validate() const;
};

/// Marks each position lost with probability loss_p and applies Y to each
/// survivor with probability flip_p. Y flips the outcome bit in both bases.
QubitRegister channel_transmit(QubitRegister&& reg, const ChannelConfig& ch,
                               Rng& rng);

}  // namespace qelect
