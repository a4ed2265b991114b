#pragma once

#include <span>

#include "xxz/bethe_energy.hpp"
#include "xxz/ed_oracle.hpp"
#include "xxz/errors.hpp"

namespace xxz {

enum class CorrelationSource { Bethe, EdExtrapolated };

std::string_view to_string(CorrelationSource source);

/// Two-site correlators at separation r. txx stands for <s^x_i s^x_{i+r}>,
/// which equals the yy correlator under the chain's U(1) symmetry.
struct CorrelationSet {
  int r = 1;
  double txx = 0.0;
  double tzz = 0.0;
  CorrelationSource source = CorrelationSource::Bethe;
  /// Set for extrapolations near delta = -1 or with a poor fit.
  bool low_confidence = false;
  /// RMS residual of the finite-size fit (0 for Bethe values).
  double fit_residual = 0.0;
};

inline constexpr double kPhysicalitySlack = 1e-9;
inline constexpr double kFitResidualThreshold = 1e-3;
/// Extrapolations with -1 < delta < -1 + window are flagged low-confidence.
inline constexpr double kLowConfidenceWindow = 0.05;

/// Eigenvalue positivity of the symmetric two-site state:
///   1 - tzz >= 2|txx|  and  1 + tzz >= 0, each up to `slack`.
bool is_physical(double txx, double tzz, double slack = kPhysicalitySlack);

/// Thrown when the 1/N^2 fit residual exceeds the threshold. The fitted
/// estimate is still available.
class ExtrapolationError : public AccuracyError {
 public:
  ExtrapolationError(const std::string& what, CorrelationSet estimate)
      : AccuracyError(what, estimate.fit_residual), estimate_(estimate) {}

  const CorrelationSet& estimate() const noexcept { return estimate_; }

 private:
  CorrelationSet estimate_;
};

/// Nearest-neighbour correlators from the ground-state energy:
///   tzz = 4 de0/ddelta,  txx = (4 e0 - delta tzz) / 2.
/// `side` selects the one-sided limit at delta = +-1.
CorrelationSet nn_correlations(double delta, const QuadratureConfig& cfg = {},
                               Side side = Side::Central);

/// Correlators at r in {2, 3} from finite rings extrapolated in 1/N^2.
CorrelationSet far_correlations(double delta, int r, const EDConfig& cfg = {});

/// Extrapolation of already diagonalized rings at any separation r the rings
/// provide. Clamps tiny physicality violations onto the physical region;
/// larger ones are clamped too and marked low-confidence.
CorrelationSet correlations_from_ed(std::span<const EDResult> results, int r, double delta,
                                    double residual_threshold = kFitResidualThreshold);

}  // namespace xxz
