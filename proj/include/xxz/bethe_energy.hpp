#pragma once

// Thermodynamic-limit ground-state energy per site of the spin-1/2 XXZ chain
//
//   H = sum_j [ S^x_j S^x_{j+1} + S^y_j S^y_{j+1} + delta S^z_j S^z_{j+1} ]
//
// on all three branches of the Bethe ansatz solution.

#include <complex>
#include <optional>
#include <string_view>

namespace xxz {

enum class Branch {
  Ferro,      // delta <= -1
  Gapless,    // -1 < delta < 1, delta = cos(pi nu)
  Isotropic,  // delta == 1
  Antiferro,  // delta > 1, delta = cosh(pi phi)
};

std::string_view to_string(Branch branch);

struct AnisotropyPoint {
  double delta = 0.0;
  Branch branch = Branch::Gapless;
  /// nu on Gapless, phi on Antiferro, empty otherwise.
  std::optional<double> spectral;
};

struct QuadratureConfig {
  double abs_tol = 1e-10;
  /// Half-width T of the real-line parametrization x = t + i/2, |t| <= T.
  double truncation = 45.0;
  /// Maximum bisection depth of the adaptive Gauss-Kronrod rule.
  unsigned max_subdivisions = 15;

  void validate() const;
};

/// Which one-sided limit to take at a branch boundary. Ignored elsewhere.
enum class Side { Central, Left, Right };

AnisotropyPoint classify(double delta);

double ground_energy(const AnisotropyPoint& point, const QuadratureConfig& cfg = {});
double ground_energy(double delta, const QuadratureConfig& cfg = {});

/// d e0 / d delta. Richardson-extrapolated finite differences of
/// ground_energy; exact 1/4 on the ferromagnetic branch.
///
/// At delta == -1 the Right side returns the limit of the gapless branch,
/// which is flat (0). At delta == 1 the Central value is the isotropic
/// closed form (1 - 4 ln 2) / 12; Left/Right differentiate one-sidedly into
/// the gapless / antiferromagnetic branch.
double ground_energy_derivative(double delta, const QuadratureConfig& cfg = {},
                                Side side = Side::Central);

// Building blocks of the contour quadrature, exposed for inspection.

/// Gapless integrand at x = t + i/2 including the prefactor
/// sin(pi nu) / (2 pi), so integrating it over t gives e0 - delta/4.
std::complex<double> gapless_integrand(double nu, double t);

/// Real form of the antiferromagnetic integrand (nu = i phi substituted),
/// including the prefactor sinh(pi phi) / (2 pi). It is the real part of the
/// contour integrand at x = t + i/2; the full-line integral is twice its
/// integral over t >= 0.
double antiferro_integrand(double phi, double t);

struct ContourQuadrature {
  std::complex<double> value;
  double error_estimate = 0.0;
};

/// Integral of gapless_integrand over |t| <= T. Throws AccuracyError if the
/// error estimate or the imaginary residue exceeds abs_tol.
ContourQuadrature gapless_contour_integral(double nu, const QuadratureConfig& cfg);

}  // namespace xxz
