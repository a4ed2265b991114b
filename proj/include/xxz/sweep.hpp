#pragma once

// Delta sweeps over the chain: correlators, concurrence and Bell measure per
// grid point, one-sided derivatives of the nearest-neighbour measures, and
// detection of the two transitions.

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "xxz/bethe_energy.hpp"
#include "xxz/corr_measures.hpp"
#include "xxz/correlation_engine.hpp"
#include "xxz/ed_oracle.hpp"
#include "xxz/pair_state.hpp"

namespace xxz {

enum class OutputFormat { Csv, Json };

std::string_view to_string(OutputFormat format);

struct SweepConfig {
  double delta_min = -1.5;
  double delta_max = 3.0;
  int steps = 451;
  std::vector<int> neighbors{1, 2, 3};
  OutputFormat format = OutputFormat::Csv;
  EDConfig ed;
  QuadratureConfig quad;
  double derivative_step = 1e-3;
  /// Seeds the CHSH optimizer used for the marker rows.
  std::uint64_t seed = kDefaultSeed;
  /// 0 picks std::thread::hardware_concurrency().
  int workers = 0;
  /// Optional path of an EdCache file; empty disables caching.
  std::string ed_cache;

  void validate() const;
  /// Grid point i of steps, endpoints included. Values within 1e-12 of a
  /// branch boundary are snapped onto it.
  double grid_point(int i) const;
};

struct PairRecord {
  int r = 1;
  double txx = 0.0;
  double tzz = 0.0;
  double concurrence = 0.0;
  double bell = 0.0;
  RegionLabel region = RegionLabel::Separable;
  CorrelationSource source = CorrelationSource::Bethe;
  bool low_confidence = false;
  double fit_residual = 0.0;

  bool operator==(const PairRecord&) const = default;
};

struct SweepRecord {
  double delta = 0.0;
  double e0 = 0.0;
  /// One entry per configured neighbour, ordered by r.
  std::vector<PairRecord> pairs;

  // One-sided 3-point derivatives of B_1 and C_1 and their noise estimates
  // |D(h) - D(h/2)|, floored by the propagated value accuracy.
  double d_bell_left = 0.0;
  double d_bell_right = 0.0;
  double d_bell_noise = 0.0;
  double d_conc_left = 0.0;
  double d_conc_right = 0.0;
  double d_conc_noise = 0.0;

  bool low_confidence = false;
  /// Empty unless evaluating this point threw.
  std::string failure;

  const PairRecord* pair(int r) const;
  bool failed() const { return !failure.empty(); }
  bool operator==(const SweepRecord& other) const;
};

/// Nearest-neighbour concurrence and Bell measure from the Bethe correlators.
struct NearestMeasures {
  double concurrence = 0.0;
  double bell = 0.0;
};

NearestMeasures nearest_measures(double delta, const QuadratureConfig& quad,
                                 Side side = Side::Central);

/// One-sided 3-point stencil derivatives of C_1 and B_1 at delta with step h.
/// A stencil that would cross delta = -1 or 1 is shortened to end on it and
/// uses that boundary's one-sided limit.
struct OneSidedDerivatives {
  double bell_left = 0.0;
  double bell_right = 0.0;
  double conc_left = 0.0;
  double conc_right = 0.0;
};

OneSidedDerivatives one_sided_derivatives(double delta, double h, const QuadratureConfig& quad);

/// Evaluates a single grid point. Errors are recorded in the returned
/// record's failure field. `cache` may be null.
SweepRecord evaluate_point(double delta, const SweepConfig& cfg, EdCache* cache = nullptr);

/// Uniform grid, evaluated by a worker pool; output ordered by delta.
std::vector<SweepRecord> run_sweep(const SweepConfig& cfg);

struct FirstOrderCandidate {
  /// Bisection-refined location of the tzz(r=1) jump.
  double delta = 0.0;
  double grid_left = 0.0;
  double grid_right = 0.0;
  double tzz_jump = 0.0;
  std::array<double, 3> offsets{1e-1, 1e-2, 1e-3};
  std::array<double, 3> d_conc{};
  std::array<double, 3> d_bell{};
};

struct KtCandidate {
  double delta = 0.0;
  double d_bell_gap = 0.0;
  double d_bell_noise = 0.0;
  double d_conc_gap = 0.0;
  double d_conc_noise = 0.0;
};

struct TransitionReport {
  std::vector<FirstOrderCandidate> first_order;
  std::vector<KtCandidate> kt;

  bool empty() const { return first_order.empty() && kt.empty(); }
};

inline constexpr int kMinPointsPerSide = 50;
inline constexpr double kJumpThreshold = 0.1;

/// Searches each branch boundary (-1, 1) that the grid brackets. A bracketed
/// boundary with fewer than kMinPointsPerSide points on either side throws
/// DomainError. Records must be ordered by delta and contain r = 1.
TransitionReport detect_transitions(const std::vector<SweepRecord>& records,
                                    const QuadratureConfig& quad = {});

/// Growth probe near a first-order point: |dC_1| and |dB_1| at x + offset for
/// each offset, from right-sided stencils with step offset / 10.
void probe_divergence(double x, const QuadratureConfig& quad, FirstOrderCandidate& candidate);

struct ClaimCheck {
  std::string name;
  bool applicable = true;
  bool passed = false;
  std::string detail;
};

/// Pass/fail checks of the headline observations on a sweep.
std::vector<ClaimCheck> check_claims(const std::vector<SweepRecord>& records,
                                     const TransitionReport& report);

/// Trajectory marker rows: delta in {-1, -0.999, 0, 1} within range.
struct MarkerRecord {
  std::string label;
  SweepRecord record;
  /// Numeric CHSH optimum of the r = 1 state, a cross-check of pairs[0].bell.
  double bell_numeric = 0.0;
};

inline constexpr std::array<double, 4> kMarkerDeltas{-1.0, -0.999, 0.0, 1.0};

std::vector<MarkerRecord> marker_records(const SweepConfig& cfg);

struct EmittedFiles {
  std::filesystem::path sweep;
  std::filesystem::path trajectory;
  std::filesystem::path boundaries;
  std::filesystem::path derivatives;
};

/// Writes sweep, trajectory, boundaries and derivatives tables into out_dir
/// (created if missing). Throws std::runtime_error naming the path on I/O
/// failure.
EmittedFiles emit(const std::vector<SweepRecord>& records, const std::vector<MarkerRecord>& markers,
                  const std::vector<Polyline>& boundaries, OutputFormat format,
                  const std::filesystem::path& out_dir);

/// Sweep table in CSV, one row per record.
std::string sweep_csv(const std::vector<SweepRecord>& records);
/// Sweep table in JSON, {"records": [...]}.
std::string sweep_json(const std::vector<SweepRecord>& records);
/// Inverse of sweep_json.
std::vector<SweepRecord> records_from_json(const std::string& text);

}  // namespace xxz
