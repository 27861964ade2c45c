#pragma once

#include <Eigen/Dense>
#include <vector>

#include "qelect/bitstring.hpp"

namespace qelect {

class QubitRegister;

inline constexpr int kMaxDensityDim = 256;

/// Real symmetric density matrix; dimension a power of two, at most 256.
/// The constructor verifies unit trace and positive semidefiniteness.
class DensityMatrix {
 public:
  explicit DensityMatrix(Eigen::MatrixXd entries);

  static DensityMatrix maximally_mixed(int dim);

  /// Uniform mixture of the 2^(m-1) computational basis states of an m-bit
  /// block whose bits XOR to `parity`.
  static DensityMatrix parity_subspace_mixture(int m, int parity);

  int dim() const { return static_cast<int>(entries_.rows()); }
  const Eigen::MatrixXd& entries() const { return entries_; }

 private:
  Eigen::MatrixXd entries_;
};

/// Accumulates an exact weighted average of pure-state projectors.
class DensityAccumulator {
 public:
  explicit DensityAccumulator(int dim);
  void add(const Eigen::VectorXd& state, double weight);
  DensityMatrix finish() const;

 private:
  Eigen::MatrixXd sum_;
  double total_weight_ = 0.0;
};

DensityMatrix ensemble_density(const std::vector<Eigen::VectorXd>& states,
                               const std::vector<double>& weights);

/// Half the sum of absolute eigenvalues of a - b.
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

/// Tensor product statevector of a register; every position must be intact.
Eigen::VectorXd register_statevector(const QubitRegister& reg);

/// |x> for an n-bit string, dimension 2^n.
Eigen::VectorXd computational_state(const BitString& bits);

}  // namespace qelect
