#include "qelect/density.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

#include "qelect/register.hpp"

namespace qelect {

namespace {

bool power_of_two(int v) {
  return v > 0 && std::has_single_bit(static_cast<unsigned>(v));
}

}  // namespace

DensityMatrix::DensityMatrix(Eigen::MatrixXd entries)
    : entries_(std::move(entries)) {
  const auto n = entries_.rows();
  if (n != entries_.cols() || !power_of_two(static_cast<int>(n)) ||
      n > kMaxDensityDim) {
    throw std::invalid_argument(
        "DensityMatrix: dimension must be a power of two up to 256");
  }
  if ((entries_ - entries_.transpose()).cwiseAbs().maxCoeff() > 1e-9) {
    throw std::invalid_argument("DensityMatrix: matrix not symmetric");
  }
  if (std::abs(entries_.trace() - 1.0) > 1e-9) {
    throw std::invalid_argument("DensityMatrix: trace differs from 1");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      entries_, Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < -1e-9) {
    throw std::invalid_argument("DensityMatrix: not positive semidefinite");
  }
}

DensityMatrix DensityMatrix::maximally_mixed(int dim) {
  return DensityMatrix(Eigen::MatrixXd::Identity(dim, dim) / dim);
}

DensityMatrix DensityMatrix::parity_subspace_mixture(int m, int parity) {
  if (m < 1 || m > 8) {
    throw std::invalid_argument("parity_subspace_mixture: need 1 <= m <= 8");
  }
  const int dim = 1 << m;
  Eigen::MatrixXd rho = Eigen::MatrixXd::Zero(dim, dim);
  const double w = 1.0 / static_cast<double>(dim / 2);
  for (int x = 0; x < dim; ++x) {
    if ((std::popcount(static_cast<unsigned>(x)) & 1) == (parity & 1)) {
      rho(x, x) = w;
    }
  }
  return DensityMatrix(std::move(rho));
}

DensityAccumulator::DensityAccumulator(int dim) {
  if (!power_of_two(dim) || dim > kMaxDensityDim) {
    throw std::invalid_argument(
        "DensityAccumulator: dimension must be a power of two up to 256");
  }
  sum_ = Eigen::MatrixXd::Zero(dim, dim);
}

void DensityAccumulator::add(const Eigen::VectorXd& state, double weight) {
  if (state.size() != sum_.rows()) {
    throw std::invalid_argument("DensityAccumulator: dimension mismatch");
  }
  sum_.noalias() += weight * state * state.transpose();
  total_weight_ += weight;
}

DensityMatrix DensityAccumulator::finish() const {
  if (std::abs(total_weight_ - 1.0) > 1e-9) {
    throw std::invalid_argument("DensityAccumulator: weights do not sum to 1");
  }
  return DensityMatrix(sum_);
}

DensityMatrix ensemble_density(const std::vector<Eigen::VectorXd>& states,
                               const std::vector<double>& weights) {
  if (states.empty() || states.size() != weights.size()) {
    throw std::invalid_argument("ensemble_density: states/weights mismatch");
  }
  DensityAccumulator acc(static_cast<int>(states.front().size()));
  for (std::size_t i = 0; i < states.size(); ++i) {
    acc.add(states[i], weights[i]);
  }
  return acc.finish();
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument("trace_distance: dimension mismatch");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      a.entries() - b.entries(), Eigen::EigenvaluesOnly);
  return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

Eigen::VectorXd register_statevector(const QubitRegister& reg) {
  if (reg.size() > 8) {
    throw std::invalid_argument(
        "register_statevector: dimension would exceed 256");
  }
  Eigen::VectorXd state(1);
  state(0) = 1.0;
  for (std::size_t i = 0; i < reg.size(); ++i) {
    const auto& amps = reg.state_at(i).amplitudes();
    Eigen::VectorXd next(state.size() * 2);
    for (Eigen::Index k = 0; k < state.size(); ++k) {
      next(2 * k) = state(k) * amps(0);
      next(2 * k + 1) = state(k) * amps(1);
    }
    state.swap(next);
  }
  return state;
}

Eigen::VectorXd computational_state(const BitString& bits) {
  if (bits.size() > 8) {
    throw std::invalid_argument(
        "computational_state: dimension would exceed 256");
  }
  Eigen::VectorXd state =
      Eigen::VectorXd::Zero(static_cast<Eigen::Index>(1) << bits.size());
  state(static_cast<Eigen::Index>(bits.to_uint())) = 1.0;
  return state;
}

}  // namespace qelect
