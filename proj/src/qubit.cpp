#include "qelect/qubit.hpp"

#include <cmath>
#include <stdexcept>

#include "qelect/rng.hpp"

namespace qelect {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

Eigen::Matrix2d make_identity() { return Eigen::Matrix2d::Identity(); }

Eigen::Matrix2d make_hadamard() {
  Eigen::Matrix2d h;
  h << kInvSqrt2, kInvSqrt2, kInvSqrt2, -kInvSqrt2;
  return h;
}

Eigen::Matrix2d make_flip_y() {
  Eigen::Matrix2d y;
  y << 0.0, -1.0, 1.0, 0.0;
  return y;
}

}  // namespace

const Eigen::Matrix2d& gate_matrix(Gate g) {
  static const Eigen::Matrix2d identity = make_identity();
  static const Eigen::Matrix2d hadamard = make_hadamard();
  static const Eigen::Matrix2d flip_y = make_flip_y();
  switch (g) {
    case Gate::Identity: return identity;
    case Gate::Hadamard: return hadamard;
    case Gate::FlipY: return flip_y;
  }
  throw std::invalid_argument("gate_matrix: unknown gate");
}

QubitState::QubitState(double a0, double a1) : amp_(a0, a1) {
  if (std::abs(amp_.squaredNorm() - 1.0) > 1e-12) {
    throw std::invalid_argument("QubitState: amplitudes not normalized");
  }
}

QubitState QubitState::plus() {
  return QubitState(Eigen::Vector2d(kInvSqrt2, kInvSqrt2));
}

QubitState QubitState::minus() {
  return QubitState(Eigen::Vector2d(kInvSqrt2, -kInvSqrt2));
}

QubitState QubitState::eigenstate(Basis b, int outcome) {
  if (b == Basis::Rectilinear) return outcome ? one() : zero();
  return outcome ? minus() : plus();
}

bool QubitState::equal_up_to_sign(const QubitState& other, double tol) const {
  return (amp_ - other.amp_).cwiseAbs().maxCoeff() <= tol ||
         (amp_ + other.amp_).cwiseAbs().maxCoeff() <= tol;
}

QubitState apply_gate(const QubitState& s, Gate g) {
  return QubitState(Eigen::Vector2d(gate_matrix(g) * s.amp_));
}

double prob_zero(const QubitState& s, Basis b) {
  if (b == Basis::Rectilinear) {
    return s.amp0() * s.amp0();
  }
  const double overlap = (s.amp0() + s.amp1()) * kInvSqrt2;
  return overlap * overlap;
}

int sample_outcome(const QubitState& s, Basis b, Rng& rng) {
  return rng.uniform() < prob_zero(s, b) ? 0 : 1;
}

std::pair<int, QubitState> measure_collapse(const QubitState& s, Basis b,
                                            Rng& rng) {
  const int outcome = sample_outcome(s, b, rng);
  return {outcome, QubitState::eigenstate(b, outcome)};
}

}  // namespace qelect
