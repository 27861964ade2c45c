#pragma once

#include <Eigen/Dense>
#include <utility>

namespace qelect {

class Rng;

/// The protocol gate set. All three matrices are real orthogonal, so real
/// amplitudes are closed under every operation the protocols perform.
enum class Gate { Identity, Hadamard, FlipY };

const Eigen::Matrix2d& gate_matrix(Gate g);

enum class Basis : int { Rectilinear = 0, Diagonal = 1 };

inline Basis basis_from_bit(int b) {
  return b ? Basis::Diagonal : Basis::Rectilinear;
}

/// Single-qubit pure state with real amplitudes. The global sign is carried
/// through gate algebra but has no observable effect on any measurement.
class QubitState {
 public:
  QubitState() : amp_(1.0, 0.0) {}
  QubitState(double a0, double a1);

  static QubitState zero() { return QubitState(); }
  static QubitState one() { return QubitState(0.0, 1.0); }
  static QubitState plus();
  static QubitState minus();
  /// Eigenstate of a basis for a given outcome bit:
  /// |0> -> 0, |1> -> 1, |+> -> 0, |-> -> 1.
  static QubitState eigenstate(Basis b, int outcome);

  double amp0() const { return amp_(0); }
  double amp1() const { return amp_(1); }
  const Eigen::Vector2d& amplitudes() const { return amp_; }

  bool equal_up_to_sign(const QubitState& other, double tol = 1e-12) const;

 private:
  explicit QubitState(Eigen::Vector2d a) : amp_(std::move(a)) {}
  Eigen::Vector2d amp_;

  friend QubitState apply_gate(const QubitState& s, Gate g);
};

QubitState apply_gate(const QubitState& s, Gate g);

/// Born-rule probability of outcome 0 in the given basis.
double prob_zero(const QubitState& s, Basis b);

int sample_outcome(const QubitState& s, Basis b, Rng& rng);

/// Samples an outcome and returns the post-measurement eigenstate.
std::pair<int, QubitState> measure_collapse(const QubitState& s, Basis b,
                                            Rng& rng);

}  // namespace qelect
