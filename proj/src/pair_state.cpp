#include "xxz/pair_state.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "xxz/errors.hpp"

namespace xxz {

namespace {

using Matrix2cd = Eigen::Matrix2cd;
using Complex = std::complex<double>;

constexpr double kBoundarySlack = 1e-12;

std::array<Matrix2cd, 3> pauli() {
  Matrix2cd x;
  Matrix2cd y;
  Matrix2cd z;
  x << 0.0, 1.0, 1.0, 0.0;
  y << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
  z << 1.0, 0.0, 0.0, -1.0;
  return {x, y, z};
}

Eigen::Matrix4cd kron(const Matrix2cd& a, const Matrix2cd& b) {
  Eigen::Matrix4cd out;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    }
  }
  return out;
}

}  // namespace

Eigen::Matrix4cd PairState::density_matrix() const {
  static const std::array<Matrix2cd, 3> sigma = pauli();
  const Matrix2cd one = Matrix2cd::Identity();
  Eigen::Matrix4cd rho = Eigen::Matrix4cd::Identity();
  for (int u = 0; u < 3; ++u) {
    rho += p(u) * kron(sigma[u], one);
    rho += q(u) * kron(one, sigma[u]);
    for (int v = 0; v < 3; ++v) {
      rho += t(u, v) * kron(sigma[u], sigma[v]);
    }
  }
  return rho / 4.0;
}

double PairState::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> solver(density_matrix(), Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0);
}

PairState singlet() {
  PairState s;
  s.t = -Eigen::Matrix3d::Identity();
  return s;
}

PairState maximally_mixed() { return PairState{}; }

std::string_view to_string(RegionLabel label) {
  switch (label) {
    case RegionLabel::Unphysical:
      return "UNPHYSICAL";
    case RegionLabel::Separable:
      return "SEPARABLE";
    case RegionLabel::EntangledLocal:
      return "ENTANGLED_LOCAL";
    case RegionLabel::Nonlocal:
      return "NONLOCAL";
  }
  return "UNKNOWN";
}

PairState symmetric_state(const CorrelationSet& corr) {
  const double txx = corr.txx;
  const double tzz = corr.tzz;
  if (!(1.0 + tzz >= -kPhysicalitySlack)) {
    std::ostringstream msg;
    msg << "unphysical correlators (txx=" << txx << ", tzz=" << tzz
        << "): 1 + tzz >= 0 violated, eigenvalue (1 + tzz)/4 is negative";
    throw DomainError(msg.str());
  }
  if (!(1.0 - tzz >= 2.0 * std::abs(txx) - kPhysicalitySlack)) {
    std::ostringstream msg;
    msg << "unphysical correlators (txx=" << txx << ", tzz=" << tzz
        << "): 1 - tzz >= 2|txx| violated, eigenvalue (1 - tzz - 2|txx|)/4 is negative";
    throw DomainError(msg.str());
  }
  PairState s;
  s.t = Eigen::Vector3d(txx, txx, tzz).asDiagonal();
  return s;
}

RegionLabel classify_region(double txx, double tzz) {
  const double ax = std::abs(txx);
  const double az = std::abs(tzz);
  if (1.0 - tzz < 2.0 * ax - kBoundarySlack || 1.0 + tzz < -kBoundarySlack) {
    return RegionLabel::Unphysical;
  }
  const bool condition_i = ax >= az && ax > std::numbers::sqrt2 / 2.0;
  const bool condition_ii = ax < az && txx * txx + tzz * tzz > 1.0;
  if (condition_i || condition_ii) {
    return RegionLabel::Nonlocal;
  }
  if (2.0 * ax > 1.0 + tzz) {
    return RegionLabel::EntangledLocal;
  }
  return RegionLabel::Separable;
}

std::vector<Polyline> region_boundaries(int resolution) {
  if (resolution < 2) {
    throw DomainError("region_boundaries needs resolution >= 2");
  }
  using P = Eigen::Vector2d;
  std::vector<Polyline> out;
  out.push_back({"physical", {P(0.0, 1.0), P(1.0, -1.0), P(-1.0, -1.0), P(0.0, 1.0)}});
  out.push_back({"separable",
                 {P(0.0, 1.0), P(0.5, 0.0), P(0.0, -1.0), P(-0.5, 0.0), P(0.0, 1.0)}});

  const double edge = std::numbers::sqrt2 / 2.0;
  for (const double sign : {1.0, -1.0}) {
    Polyline pocket{sign > 0 ? "nonlocal_right" : "nonlocal_left", {}};
    // Unit circle from (0, -1) to (edge, -edge).
    for (int k = 0; k < resolution; ++k) {
      const double angle = -std::numbers::pi / 2.0 + (std::numbers::pi / 4.0) * k / (resolution - 1);
      pocket.points.emplace_back(sign * std::cos(angle), std::sin(angle));
    }
    pocket.points.front() = P(0.0, -1.0);
    pocket.points.back() = P(sign * edge, -edge);
    pocket.points.emplace_back(sign * edge, 1.0 - std::numbers::sqrt2);
    pocket.points.emplace_back(sign * 1.0, -1.0);
    pocket.points.emplace_back(0.0, -1.0);
    out.push_back(std::move(pocket));
  }
  return out;
}

}  // namespace xxz
