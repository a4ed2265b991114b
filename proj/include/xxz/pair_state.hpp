#pragma once

// Two-qubit states in the Bloch / correlation-tensor parametrization
//
//   rho = 1/4 [ 1 + p.sigma (x) 1 + 1 (x) q.sigma + sum_uv T_uv sigma_u (x) sigma_v ]
//
// and the regions of the (txx, tzz) plane for the XXZ two-site state.

#include <Eigen/Dense>

#include <string>
#include <string_view>
#include <vector>

#include "xxz/correlation_engine.hpp"

namespace xxz {

struct PairState {
  Eigen::Vector3d p = Eigen::Vector3d::Zero();
  Eigen::Vector3d q = Eigen::Vector3d::Zero();
  Eigen::Matrix3d t = Eigen::Matrix3d::Zero();

  /// 4x4 density operator in the basis |uu>, |ud>, |du>, |dd> (z basis,
  /// first factor is site A).
  Eigen::Matrix4cd density_matrix() const;
  double min_eigenvalue() const;
};

/// Maximally entangled singlet, T = -I.
PairState singlet();
PairState maximally_mixed();

enum class RegionLabel { Unphysical, Separable, EntangledLocal, Nonlocal };

std::string_view to_string(RegionLabel label);

/// p = q = 0, T = diag(txx, txx, tzz). Throws DomainError naming the violated
/// eigenvalue inequality when the correlators are unphysical beyond
/// kPhysicalitySlack.
PairState symmetric_state(const CorrelationSet& corr);

/// Points on a boundary go to the less exotic label; the physicality
/// boundary itself counts as physical within 1e-12.
RegionLabel classify_region(double txx, double tzz);

struct Polyline {
  std::string name;
  std::vector<Eigen::Vector2d> points;  // (txx, tzz)
};

/// Boundaries of the region map for plotting:
///   "physical"     closed triangle (0,1), (1,-1), (-1,-1), (0,1)
///   "separable"    closed diamond 2|txx| = 1 + tzz inside the triangle
///   "nonlocal_right", "nonlocal_left"
///                  the two nonlocal pockets, each the unit-circle arc
///                  followed by the |txx| = 1/sqrt(2) segment up to the
///                  triangle edge
/// `resolution` is the number of points on each circular arc.
std::vector<Polyline> region_boundaries(int resolution);

}  // namespace xxz
