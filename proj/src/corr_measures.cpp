#include "xxz/corr_measures.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "xxz/errors.hpp"

namespace xxz {

namespace {

constexpr double kUnitTolerance = 1e-12;
constexpr double kEigenvalueDust = 1e-12;
constexpr int kMaxAscentSteps = 10000;

void require_unit(const Eigen::Vector3d& v, const char* name) {
  if (!(std::abs(v.norm() - 1.0) <= kUnitTolerance)) {
    std::ostringstream msg;
    msg << "measurement direction " << name << " has norm " << v.norm() << ", expected 1";
    throw DomainError(msg.str());
  }
}

// Signed CHSH combination a1.T(b1 + b2) + a2.T(b1 - b2).
double chsh_signed(const Eigen::Matrix3d& t, const MeasurementSettings& s) {
  return s.a1.dot(t * (s.b1 + s.b2)) + s.a2.dot(t * (s.b1 - s.b2));
}

// Unit vector along v, or `fallback` when v vanishes.
Eigen::Vector3d direction(const Eigen::Vector3d& v, const Eigen::Vector3d& fallback) {
  const double norm = v.norm();
  return norm > 1e-300 ? Eigen::Vector3d(v / norm) : fallback;
}

Eigen::Vector3d random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::Vector3d v;
  do {
    v = Eigen::Vector3d(normal(rng), normal(rng), normal(rng));
  } while (v.norm() < 1e-8);
  return v.normalized();
}

// Coordinate ascent from the given a1, a2. Each half-step is the exact
// maximizer over one pair of directions, so the value never decreases.
ChshOptimum ascend(const Eigen::Matrix3d& t, MeasurementSettings s) {
  double value = -std::numeric_limits<double>::infinity();
  for (int step = 0; step < kMaxAscentSteps; ++step) {
    const Eigen::Vector3d u = t.transpose() * s.a1;
    const Eigen::Vector3d w = t.transpose() * s.a2;
    s.b1 = direction(u + w, s.b1);
    s.b2 = direction(u - w, s.b2);
    s.a1 = direction(t * (s.b1 + s.b2), s.a1);
    s.a2 = direction(t * (s.b1 - s.b2), s.a2);
    const double next = chsh_signed(t, s);
    if (next - value <= 1e-15 * std::max(1.0, std::abs(next))) {
      value = std::max(value, next);
      break;
    }
    value = next;
  }
  return {std::abs(chsh_signed(t, s)), s};
}

}  // namespace

void MeasurementSettings::validate() const {
  require_unit(a1, "a1");
  require_unit(a2, "a2");
  require_unit(b1, "b1");
  require_unit(b2, "b2");
}

double chsh_value(const PairState& state, const MeasurementSettings& s) {
  s.validate();
  return std::abs(chsh_signed(state.t, s));
}

double bell_measure_horodecki(const PairState& state) {
  const Eigen::Matrix3d u = state.t.transpose() * state.t;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(u, Eigen::EigenvaluesOnly);
  const Eigen::Vector3d ev = solver.eigenvalues();  // ascending
  return 2.0 * std::sqrt(std::max(0.0, ev(2) + ev(1)));
}

double bell_measure_symmetric(const CorrelationSet& corr) {
  const double x2 = corr.txx * corr.txx;
  const double z2 = corr.tzz * corr.tzz;
  return 2.0 * std::max(std::sqrt(2.0 * x2), std::sqrt(x2 + z2));
}

ChshOptimum maximize_chsh(const PairState& state, int restarts, std::uint64_t seed) {
  if (restarts < 1) {
    throw DomainError("maximize_chsh needs at least one restart");
  }
  ChshOptimum best;
  best.value = -1.0;
  for (int k = 0; k < restarts; ++k) {
    std::seed_seq sequence{seed, static_cast<std::uint64_t>(k)};
    std::mt19937_64 rng(sequence);
    MeasurementSettings start;
    start.a1 = random_unit(rng);
    start.a2 = random_unit(rng);
    start.b1 = random_unit(rng);
    start.b2 = random_unit(rng);
    const ChshOptimum local = ascend(state.t, start);
    if (local.value > best.value) best = local;
  }
  return best;
}

double concurrence_general(const PairState& state) {
  const Eigen::Matrix4cd rho = state.density_matrix();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> solver(rho);
  Eigen::Vector4d ev = solver.eigenvalues();
  if (ev(0) < -kEigenvalueDust) {
    std::ostringstream msg;
    msg << "state is not positive semidefinite: eigenvalue " << ev(0);
    throw DomainError(msg.str());
  }
  ev = ev.cwiseMax(0.0);
  const Eigen::Matrix4cd root =
      solver.eigenvectors() * ev.cwiseSqrt().asDiagonal() * solver.eigenvectors().adjoint();

  // sigma_y (x) sigma_y is real: the anti-diagonal (-1, 1, 1, -1).
  Eigen::Matrix4cd flip = Eigen::Matrix4cd::Zero();
  flip(0, 3) = -1.0;
  flip(1, 2) = 1.0;
  flip(2, 1) = 1.0;
  flip(3, 0) = -1.0;

  // The square roots of the eigenvalues of rho rho~ are the singular values
  // of sqrt(rho) sqrt(rho~), with sqrt(rho~) = flip sqrt(rho)^* flip.
  const Eigen::Matrix4cd product = root * flip * root.conjugate() * flip;
  const Eigen::Vector4d l = Eigen::JacobiSVD<Eigen::Matrix4cd>(product).singularValues();
  return std::max(0.0, l(0) - l(1) - l(2) - l(3));
}

double concurrence_symmetric(const CorrelationSet& corr) {
  return std::max(0.0, (2.0 * std::abs(corr.txx) - (1.0 + corr.tzz)) / 2.0);
}

}  // namespace xxz
