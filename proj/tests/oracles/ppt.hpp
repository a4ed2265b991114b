#pragma once

// Peres-Horodecki test: a two-qubit state is separable iff its partial
// transpose is positive semidefinite.

#include <Eigen/Dense>

namespace oracle {

/// Transpose on the second qubit, basis |a b> with index 2a + b.
inline Eigen::Matrix4cd partial_transpose(const Eigen::Matrix4cd& rho) {
  Eigen::Matrix4cd out;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      for (int c = 0; c < 2; ++c) {
        for (int d = 0; d < 2; ++d) out(2 * a + b, 2 * c + d) = rho(2 * a + d, 2 * c + b);
      }
    }
  }
  return out;
}

inline double min_partial_transpose_eigenvalue(const Eigen::Matrix4cd& rho) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> solver(partial_transpose(rho),
                                                         Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0);
}

/// Closed-form symmetric-state values from the density matrix elements:
/// rho = diag block (a, b, b, a) with coherence z between |ud> and |du>,
///   a = (1 + tzz)/4, b = (1 - tzz)/4, z = txx/2,
/// and Wootters' X-state concurrence 2 max(0, |z| - a).
inline double x_state_concurrence(double txx, double tzz) {
  const double a = (1.0 + tzz) / 4.0;
  const double z = txx / 2.0;
  return std::max(0.0, 2.0 * (std::abs(z) - a));
}

}  // namespace oracle
