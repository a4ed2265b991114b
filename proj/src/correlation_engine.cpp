#include "xxz/correlation_engine.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace xxz {

std::string_view to_string(CorrelationSource source) {
  switch (source) {
    case CorrelationSource::Bethe:
      return "BETHE";
    case CorrelationSource::EdExtrapolated:
      return "ED_EXTRAPOLATED";
  }
  return "UNKNOWN";
}

bool is_physical(double txx, double tzz, double slack) {
  return 1.0 - tzz >= 2.0 * std::abs(txx) - slack && 1.0 + tzz >= -slack;
}

CorrelationSet nn_correlations(double delta, const QuadratureConfig& cfg, Side side) {
  double e0 = 0.0;
  if (delta == -1.0 && side == Side::Right) {
    e0 = -0.25;
  } else {
    e0 = ground_energy(delta, cfg);
  }
  const double de0 = ground_energy_derivative(delta, cfg, side);
  CorrelationSet out;
  out.r = 1;
  out.tzz = 4.0 * de0;
  out.txx = (4.0 * e0 - delta * out.tzz) / 2.0;
  out.source = CorrelationSource::Bethe;
  return out;
}

CorrelationSet correlations_from_ed(std::span<const EDResult> results, int r, double delta,
                                    double residual_threshold) {
  const Extrapolation xx = extrapolate(results, Quantity::txx(r));
  const Extrapolation zz = extrapolate(results, Quantity::tzz(r));

  CorrelationSet out;
  out.r = r;
  out.txx = xx.value;
  out.tzz = zz.value;
  out.source = CorrelationSource::EdExtrapolated;
  out.fit_residual = std::max(xx.residual, zz.residual);
  out.low_confidence = delta > -1.0 && delta < -1.0 + kLowConfidenceWindow;

  // Project onto the physical triangle.
  if (!is_physical(out.txx, out.tzz, 0.0)) {
    if (!is_physical(out.txx, out.tzz, kPhysicalitySlack)) {
      out.low_confidence = true;
    }
    out.tzz = std::clamp(out.tzz, -1.0, 1.0);
    const double limit = (1.0 - out.tzz) / 2.0;
    out.txx = std::clamp(out.txx, -limit, limit);
  }

  if (out.fit_residual > residual_threshold) {
    out.low_confidence = true;
    std::ostringstream msg;
    msg << "1/N^2 extrapolation of r=" << r << " correlators at delta=" << delta
        << " has residual " << out.fit_residual << " above " << residual_threshold;
    throw ExtrapolationError(msg.str(), out);
  }
  return out;
}

CorrelationSet far_correlations(double delta, int r, const EDConfig& cfg) {
  if (r != 2 && r != 3) {
    throw DomainError("far_correlations supports r = 2 and r = 3, got r = " + std::to_string(r));
  }
  const std::vector<EDResult> results = diagonalize(delta, cfg);
  return correlations_from_ed(results, r, delta);
}

}  // namespace xxz
