#pragma once

// Concurrence and maximal CHSH value of two-qubit states, both for general
// PairStates and in closed form for the symmetric XXZ pair.

#include <Eigen/Dense>

#include <cstdint>

#include "xxz/correlation_engine.hpp"
#include "xxz/pair_state.hpp"

namespace xxz {

struct MeasurementSettings {
  Eigen::Vector3d a1 = Eigen::Vector3d::UnitZ();
  Eigen::Vector3d a2 = Eigen::Vector3d::UnitX();
  Eigen::Vector3d b1 = Eigen::Vector3d::UnitZ();
  Eigen::Vector3d b2 = Eigen::Vector3d::UnitX();

  /// Throws DomainError unless every direction has unit norm within 1e-12.
  void validate() const;
};

/// |a1.T.b1 + a1.T.b2 + a2.T.b1 - a2.T.b2|
double chsh_value(const PairState& state, const MeasurementSettings& s);

/// 2 sqrt(u + u') with u >= u' the two largest eigenvalues of T^T T.
double bell_measure_horodecki(const PairState& state);

/// 2 max{ sqrt(2 txx^2), sqrt(txx^2 + tzz^2) }
double bell_measure_symmetric(const CorrelationSet& corr);

struct ChshOptimum {
  double value = 0.0;
  MeasurementSettings settings;
};

inline constexpr int kDefaultRestarts = 20;
inline constexpr std::uint64_t kDefaultSeed = 20240601;

/// Multi-start ascent over the four measurement directions. Each restart
/// draws a1, a2 uniformly on the sphere and then alternates the exact
/// maximizers of the CHSH expression in (b1, b2) and in (a1, a2) until the
/// value stops increasing. Deterministic for a fixed seed.
ChshOptimum maximize_chsh(const PairState& state, int restarts = kDefaultRestarts,
                          std::uint64_t seed = kDefaultSeed);

/// Wootters concurrence max{0, l1 - l2 - l3 - l4}, l_i the square roots of
/// the eigenvalues of rho (sigma_y sigma_y) rho^* (sigma_y sigma_y).
/// Throws DomainError if rho has an eigenvalue below -1e-12.
double concurrence_general(const PairState& state);

/// max{0, (2|txx| - (1 + tzz)) / 2}
double concurrence_symmetric(const CorrelationSet& corr);

}  // namespace xxz
