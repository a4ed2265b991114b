// Acceptance checks. One PASS/FAIL line per criterion; nonzero exit if any
// criterion fails.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "oracles/generators.hpp"
#include "oracles/ppt.hpp"
#include "xxz/bethe_energy.hpp"
#include "xxz/corr_measures.hpp"
#include "xxz/correlation_engine.hpp"
#include "xxz/ed_oracle.hpp"
#include "xxz/pair_state.hpp"
#include "xxz/sweep.hpp"

namespace {

using std::numbers::ln2;
using std::numbers::pi;

struct Outcome {
  bool passed = false;
  std::string detail;
};

xxz::CorrelationSet corr(double txx, double tzz) {
  xxz::CorrelationSet c;
  c.txx = txx;
  c.tzz = tzz;
  return c;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

const std::vector<xxz::SweepRecord>& grid_sweep() {
  static const std::vector<xxz::SweepRecord> records = [] {
    xxz::SweepConfig cfg;
    cfg.delta_min = -1.5;
    cfg.delta_max = 3.0;
    cfg.steps = 1000;
    cfg.neighbors = {1, 2, 3};
    return xxz::run_sweep(cfg);
  }();
  return records;
}

const xxz::SweepRecord* record_at(double delta) {
  for (const auto& r : grid_sweep()) {
    if (r.delta == delta) return &r;
  }
  return nullptr;
}

Outcome energy_anchor() {
  const double exact = 0.25 - ln2;
  const double at_one = xxz::ground_energy(1.0);
  const double below = xxz::ground_energy(1.0 - 1e-3);
  const bool closed = std::abs(at_one - exact) <= 1e-12;
  const bool near = std::abs(below - exact) < 1e-4;
  return {closed && near, "|e0(1) - exact| = " + fmt(std::abs(at_one - exact)) +
                              ", |e0(1 - 1e-3) - exact| = " + fmt(std::abs(below - exact))};
}

Outcome oracle_agreement() {
  bool ok = true;
  std::string detail;
  for (double delta : {-0.5, 0.0, 0.5, 1.0, 2.0}) {
    const auto fit = xxz::extrapolate(xxz::diagonalize(delta, xxz::EDConfig{}),
                                      xxz::Quantity::energy_per_site());
    const double gap = std::abs(xxz::ground_energy(delta) - fit.value);
    ok = ok && gap < 1e-3;
    detail += (detail.empty() ? "" : ", ") + fmt(delta) + ": " + fmt(gap);
  }
  return {ok, detail};
}

Outcome xx_point() {
  const auto c = xxz::nn_correlations(0.0);
  const double ex = std::abs(c.txx + 2.0 / pi);
  const double ez = std::abs(c.tzz + 4.0 / (pi * pi));
  return {ex < 1e-4 && ez < 1e-4, "txx err " + fmt(ex) + ", tzz err " + fmt(ez)};
}

Outcome isotropic_point() {
  const double t = (1.0 - 4.0 * ln2) / 3.0;
  const auto c = xxz::nn_correlations(1.0);
  const double conc = xxz::concurrence_symmetric(c);
  const double bell = xxz::bell_measure_symmetric(c);
  const bool ok = std::abs(c.txx - t) < 1e-4 && std::abs(c.tzz - t) < 1e-4 &&
                  std::abs(conc - 0.3863) < 1e-3 && std::abs(bell - 1.6712) < 1e-3;
  return {ok, "txx " + fmt(c.txx) + ", tzz " + fmt(c.tzz) + ", C " + fmt(conc) + ", B " + fmt(bell)};
}

Outcome no_violation() {
  double worst = 0.0;
  int failed = 0;
  int non_positive = 0;
  for (const auto& r : grid_sweep()) {
    if (r.failed()) {
      ++failed;
      continue;
    }
    for (const auto& p : r.pairs) worst = std::max(worst, p.bell);
    if (r.delta > -1.0 && !(r.pair(1)->concurrence > 0.0)) ++non_positive;
  }
  return {failed == 0 && worst <= 2.0 && non_positive == 0,
          "max B " + fmt(worst) + ", C_1 <= 0 at " + std::to_string(non_positive) +
              " points above -1, " + std::to_string(failed) + " failed points"};
}

Outcome concurrence_maximum() {
  const auto& records = grid_sweep();
  const double step = records[1].delta - records[0].delta;
  const xxz::SweepRecord* best = nullptr;
  for (const auto& r : records) {
    if (r.failed()) continue;
    if (!best || r.pair(1)->concurrence > best->pair(1)->concurrence) best = &r;
  }
  if (!best) return {false, "no usable points"};
  return {std::abs(best->delta - 1.0) <= step * (1.0 + 1e-9),
          "argmax at " + fmt(best->delta) + ", step " + fmt(step)};
}

Outcome kt_detection() {
  const auto* r = record_at(1.0);
  if (!r || r->failed()) return {false, "delta = 1 missing from grid"};
  const double bell_gap = std::abs(r->d_bell_left - r->d_bell_right);
  const double conc_gap = std::abs(r->d_conc_left - r->d_conc_right);
  return {bell_gap > 10.0 * r->d_bell_noise && conc_gap <= r->d_conc_noise,
          "dB gap " + fmt(bell_gap) + " (noise " + fmt(r->d_bell_noise) + "), dC gap " +
              fmt(conc_gap) + " (noise " + fmt(r->d_conc_noise) + ")"};
}

Outcome first_order_detection() {
  const double below = xxz::nn_correlations(-1.0).tzz;
  const double far_below = xxz::nn_correlations(-1.2).tzz;
  const double above = xxz::nn_correlations(-1.0 + 1e-3).tzz;
  xxz::FirstOrderCandidate probe;
  xxz::probe_divergence(-1.0, {}, probe);
  bool growing = true;
  std::ostringstream detail;
  detail << "tzz " << below << " -> " << fmt(above) << "; |dC|";
  for (std::size_t k = 0; k < probe.offsets.size(); ++k) {
    detail << " " << fmt(std::abs(probe.d_conc[k]));
    if (k > 0) growing = growing && std::abs(probe.d_conc[k]) > std::abs(probe.d_conc[k - 1]);
  }
  detail << "; |dB|";
  for (std::size_t k = 0; k < probe.offsets.size(); ++k) {
    detail << " " << fmt(std::abs(probe.d_bell[k]));
    if (k > 0) growing = growing && std::abs(probe.d_bell[k]) > std::abs(probe.d_bell[k - 1]);
  }
  return {below == 1.0 && far_below == 1.0 && above < 0.9 && growing, detail.str()};
}

Outcome measure_equivalence() {
  oracle::Generator gen(9001);
  const double tsirelson = 2.0 * std::numbers::sqrt2;
  double worst_bell = 0.0;
  double worst_conc = 0.0;
  double max_bell = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const auto [txx, tzz] = gen.physical_point();
    const auto c = corr(txx, tzz);
    const auto s = xxz::symmetric_state(c);
    const double h = xxz::bell_measure_horodecki(s);
    worst_bell = std::max(worst_bell, std::abs(xxz::bell_measure_symmetric(c) - h));
    worst_conc = std::max(worst_conc,
                          std::abs(xxz::concurrence_symmetric(c) - xxz::concurrence_general(s)));
    max_bell = std::max(max_bell, h);
  }
  double worst_opt = 0.0;
  for (int i = 0; i < 100; ++i) {
    const auto s = gen.mixed_state();
    worst_opt = std::max(worst_opt, std::abs(xxz::maximize_chsh(s, 20).value -
                                             xxz::bell_measure_horodecki(s)));
  }
  return {worst_bell <= 1e-12 && worst_conc <= 1e-12 && max_bell <= tsirelson && worst_opt <= 1e-6,
          "B diff " + fmt(worst_bell) + ", C diff " + fmt(worst_conc) + ", max B " +
              fmt(max_bell) + ", optimizer diff " + fmt(worst_opt)};
}

Outcome region_equivalence() {
  oracle::Generator gen(9002);
  int mismatches = 0;
  for (int i = 0; i < 10000; ++i) {
    const auto [txx, tzz] = gen.physical_point();
    const auto label = xxz::classify_region(txx, tzz);
    const auto rho = xxz::symmetric_state(corr(txx, tzz));
    const bool ppt = oracle::min_partial_transpose_eigenvalue(rho.density_matrix()) >= 0.0;
    const bool nonlocal = xxz::bell_measure_horodecki(rho) > 2.0;
    if ((label == xxz::RegionLabel::Separable) != ppt) ++mismatches;
    if ((label == xxz::RegionLabel::Nonlocal) != nonlocal) ++mismatches;
  }
  for (int i = 0; i < 10000; ++i) {
    const auto [txx, tzz] = gen.any_point();
    const bool physical = 1.0 - tzz >= 2.0 * std::abs(txx) && 1.0 + tzz >= 0.0;
    if ((xxz::classify_region(txx, tzz) == xxz::RegionLabel::Unphysical) == physical) ++mismatches;
  }
  return {mismatches == 0, std::to_string(mismatches) + " mismatches"};
}

Outcome trajectory_narrative() {
  bool ok = true;
  std::string detail;
  for (int r : {2, 3}) {
    bool in_window = true;
    int window = 0;
    int stray = 0;
    double end = -1.0;
    for (const auto& rec : grid_sweep()) {
      if (rec.failed()) {
        ++stray;
        continue;
      }
      const auto label = rec.pair(r)->region;
      if (rec.delta <= -1.0) {
        if (label != xxz::RegionLabel::Separable) ++stray;
      } else if (label == xxz::RegionLabel::EntangledLocal && in_window) {
        ++window;
        end = rec.delta;
      } else if (label == xxz::RegionLabel::Separable) {
        in_window = false;
      } else {
        ++stray;
      }
    }
    ok = ok && window > 0 && stray == 0;
    detail += (detail.empty() ? "" : "; ") + std::string("r=") + std::to_string(r) +
              " window (-1, " + fmt(end) + "] " + std::to_string(window) + " points, " +
              std::to_string(stray) + " stray";
  }
  return {ok, detail};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"energy anchor", energy_anchor},
      {"oracle agreement", oracle_agreement},
      {"XX-point correlators", xx_point},
      {"isotropic point", isotropic_point},
      {"no Bell violation", no_violation},
      {"concurrence maximum at KT point", concurrence_maximum},
      {"KT detection", kt_detection},
      {"first-order detection", first_order_detection},
      {"measure equivalence", measure_equivalence},
      {"region classifier equivalence", region_equivalence},
      {"trajectory narrative", trajectory_narrative},
  };
  int failures = 0;
  int index = 0;
  for (const auto& [name, check] : criteria) {
    ++index;
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    if (!o.passed) ++failures;
    std::printf("%s %2d %s: %s\n", o.passed ? "PASS" : "FAIL", index, name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", index - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
