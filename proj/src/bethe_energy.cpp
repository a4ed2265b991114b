#include "xxz/bethe_energy.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "xxz/errors.hpp"

namespace xxz {

namespace {

using std::numbers::pi;
using std::numbers::ln2;
using GaussKronrod = boost::math::quadrature::gauss_kronrod<double, 31>;

constexpr double kContourHeight = 0.5;
constexpr double kInitialStep = 1e-4;
constexpr int kMaxRichardsonLevels = 12;

// Boost's tolerance is relative to the L1 norm of the integrand. When that
// norm exceeds 1 a second pass rescales it so the absolute target holds.
template <class F>
auto integrate_to(F&& f, double a, double b, const QuadratureConfig& cfg, double target,
                  double* error) {
  double l1 = 0.0;
  auto value = GaussKronrod::integrate(f, a, b, cfg.max_subdivisions, target, error, &l1);
  if (*error > target && l1 > 1.0) {
    value = GaussKronrod::integrate(f, a, b, cfg.max_subdivisions, target / l1, error, &l1);
  }
  return value;
}

void require_finite(double delta) {
  if (!std::isfinite(delta)) {
    throw DomainError("anisotropy must be finite");
  }
}

double antiferro_energy(double delta, double phi, const QuadratureConfig& cfg) {
  double error = 0.0;
  const double half = integrate_to([phi](double t) { return antiferro_integrand(phi, t); }, 0.0,
                                   cfg.truncation, cfg, cfg.abs_tol / 2.0, &error);
  if (!(2.0 * error <= cfg.abs_tol)) {
    std::ostringstream msg;
    msg << "antiferromagnetic quadrature at delta=" << delta
        << " did not converge: error estimate " << 2.0 * error;
    throw AccuracyError(msg.str(), 2.0 * error);
  }
  return delta / 4.0 + 2.0 * half;
}

// Richardson table over successively halved steps. `difference(h)` must have
// an error expansion in powers of h^order_step (2 for central, 1 for
// one-sided differences). Each entry's error is estimated from its two
// parents; the best entry is kept and the table stops once round-off in the
// differences starts to dominate.
template <class Difference>
double richardson(Difference&& difference, double h, int order_step, double tol,
                  double delta) {
  std::array<std::array<double, kMaxRichardsonLevels>, kMaxRichardsonLevels> table{};
  double best = 0.0;
  double best_error = std::numeric_limits<double>::infinity();
  const double ratio = order_step == 2 ? 4.0 : 2.0;
  for (int k = 0; k < kMaxRichardsonLevels; ++k) {
    table[k][0] = difference(h);
    double factor = ratio;
    for (int j = 1; j <= k; ++j) {
      table[k][j] = table[k][j - 1] + (table[k][j - 1] - table[k - 1][j - 1]) / (factor - 1.0);
      factor *= ratio;
      const double error = std::max(std::abs(table[k][j] - table[k][j - 1]),
                                    std::abs(table[k][j] - table[k - 1][j - 1]));
      if (error < best_error) {
        best_error = error;
        best = table[k][j];
      }
    }
    if (best_error < tol) {
      return best;
    }
    h /= 2.0;
  }
  std::ostringstream msg;
  msg << "derivative of e0 at delta=" << delta << " did not converge; best error estimate "
      << best_error;
  throw AccuracyError(msg.str(), best_error);
}

}  // namespace

std::string_view to_string(Branch branch) {
  switch (branch) {
    case Branch::Ferro:
      return "FERRO";
    case Branch::Gapless:
      return "GAPLESS";
    case Branch::Isotropic:
      return "ISOTROPIC";
    case Branch::Antiferro:
      return "ANTIFERRO";
  }
  return "UNKNOWN";
}

void QuadratureConfig::validate() const {
  if (!(abs_tol > 0.0) || !(truncation > 0.0)) {
    throw DomainError("quadrature abs_tol and truncation must be positive");
  }
}

AnisotropyPoint classify(double delta) {
  require_finite(delta);
  if (delta <= -1.0) {
    return {delta, Branch::Ferro, std::nullopt};
  }
  if (delta < 1.0) {
    return {delta, Branch::Gapless, std::acos(delta) / pi};
  }
  if (delta == 1.0) {
    return {delta, Branch::Isotropic, std::nullopt};
  }
  return {delta, Branch::Antiferro, std::acosh(delta) / pi};
}

std::complex<double> gapless_integrand(double nu, double t) {
  const std::complex<double> x(t, kContourHeight);
  const double prefactor = std::sin(pi * nu) / (2.0 * pi);
  return prefactor / (std::sinh(x) * std::tanh(nu * x));
}

double antiferro_integrand(double phi, double t) {
  // Re[ cot(phi x) / sinh(x) ] for x = t + i c, written without complex
  // arithmetic:
  //   cot(a + ib) = (sin 2a - i sinh 2b) / (2 sinh^2 b + 2 sin^2 a)
  //   1/sinh(t + ic) = (sinh t cos c - i cosh t sin c) / (sinh^2 t + sin^2 c)
  const double c = kContourHeight;
  const double a = phi * t;
  const double b = phi * c;
  const double sa = std::sin(a);
  const double sb = std::sinh(b);
  const double st = std::sinh(t);
  const double sc = std::sin(c);
  const double cot_denominator = 2.0 * sb * sb + 2.0 * sa * sa;
  const double sinh_denominator = st * st + sc * sc;
  const double numerator =
      std::sin(2.0 * a) * st * std::cos(c) - std::sinh(2.0 * b) * std::cosh(t) * sc;
  const double prefactor = std::sinh(pi * phi) / (2.0 * pi);
  return prefactor * numerator / (cot_denominator * sinh_denominator);
}

ContourQuadrature gapless_contour_integral(double nu, const QuadratureConfig& cfg) {
  cfg.validate();
  double error = 0.0;
  const std::complex<double> value =
      integrate_to([nu](double t) { return gapless_integrand(nu, t); }, -cfg.truncation,
                   cfg.truncation, cfg, cfg.abs_tol, &error);
  if (!(error <= cfg.abs_tol)) {
    std::ostringstream msg;
    msg << "gapless contour quadrature at nu=" << nu
        << " did not converge: error estimate " << error;
    throw AccuracyError(msg.str(), error);
  }
  if (!(std::abs(value.imag()) <= cfg.abs_tol)) {
    std::ostringstream msg;
    msg << "gapless contour quadrature at nu=" << nu << " left imaginary residue "
        << value.imag();
    throw AccuracyError(msg.str(), std::abs(value.imag()));
  }
  return {value, error};
}

double ground_energy(const AnisotropyPoint& point, const QuadratureConfig& cfg) {
  cfg.validate();
  switch (point.branch) {
    case Branch::Ferro:
      return point.delta / 4.0;
    case Branch::Isotropic:
      return 0.25 - ln2;
    case Branch::Gapless:
      return point.delta / 4.0 + gapless_contour_integral(point.spectral.value(), cfg).value.real();
    case Branch::Antiferro:
      return antiferro_energy(point.delta, point.spectral.value(), cfg);
  }
  throw DomainError("unknown branch");
}

double ground_energy(double delta, const QuadratureConfig& cfg) {
  return ground_energy(classify(delta), cfg);
}

double ground_energy_derivative(double delta, const QuadratureConfig& cfg, Side side) {
  require_finite(delta);
  cfg.validate();
  if (delta < -1.0 || (delta == -1.0 && side != Side::Right)) {
    return 0.25;
  }
  if (delta == -1.0) {
    // The gapless branch meets the ferromagnetic energy -1/4 with zero slope.
    return 0.0;
  }
  const double tol = 10.0 * cfg.abs_tol;
  const auto e0 = [&cfg](double x) { return ground_energy(x, cfg); };

  if (delta == 1.0) {
    if (side == Side::Central) {
      return (1.0 - 4.0 * ln2) / 12.0;
    }
    const double f1 = e0(1.0);
    if (side == Side::Left) {
      return richardson([&](double h) { return (f1 - e0(1.0 - h)) / h; }, kInitialStep, 1, tol,
                        delta);
    }
    return richardson([&](double h) { return (e0(1.0 + h) - f1) / h; }, kInitialStep, 1, tol,
                      delta);
  }

  // Keep the central stencil inside the current branch.
  const double distance = std::min(std::abs(delta + 1.0), std::abs(delta - 1.0));
  const double h0 = std::min(kInitialStep, distance / 10.0);
  return richardson([&](double h) { return (e0(delta + h) - e0(delta - h)) / (2.0 * h); }, h0, 2,
                    tol, delta);
}

}  // namespace xxz
