#include "xxz/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <sstream>
#include <thread>

#include "xxz/errors.hpp"

namespace xxz {

namespace {

constexpr double kSnap = 1e-12;
constexpr double kJumpResolution = 1e-6;
constexpr std::array<double, 2> kBoundaries{-1.0, 1.0};

bool same(double a, double b) { return a == b || (std::isnan(a) && std::isnan(b)); }

PairRecord make_pair_record(const CorrelationSet& c) {
  PairRecord p;
  p.r = c.r;
  p.txx = c.txx;
  p.tzz = c.tzz;
  p.concurrence = concurrence_symmetric(c);
  p.bell = bell_measure_symmetric(c);
  p.region = classify_region(c.txx, c.tzz);
  p.source = c.source;
  p.low_confidence = c.low_confidence;
  p.fit_residual = c.fit_residual;
  return p;
}

// Value of (C_1, B_1) at x. On -1 itself, `from_right` selects the limit of
// the gapless branch instead of the ferromagnetic value.
NearestMeasures measures_at(double x, bool from_right, const QuadratureConfig& quad) {
  return nearest_measures(x, quad, x == -1.0 && from_right ? Side::Right : Side::Central);
}

struct Stencil {
  double conc = 0.0;
  double bell = 0.0;
};

// (3 f(x) - 4 f(x - h) + f(x - 2h)) / 2h, shortened to stop on a boundary.
Stencil left_stencil(double x, double h, const QuadratureConfig& quad) {
  for (double b : kBoundaries) {
    if (x > b && x - 2.0 * h < b) h = (x - b) / 2.0;
  }
  const NearestMeasures f0 = measures_at(x, false, quad);
  const NearestMeasures f1 = measures_at(x - h, true, quad);
  const NearestMeasures f2 = measures_at(x - 2.0 * h, true, quad);
  return {(3.0 * f0.concurrence - 4.0 * f1.concurrence + f2.concurrence) / (2.0 * h),
          (3.0 * f0.bell - 4.0 * f1.bell + f2.bell) / (2.0 * h)};
}

// (-3 f(x) + 4 f(x + h) - f(x + 2h)) / 2h, shortened to stop on a boundary.
Stencil right_stencil(double x, double h, const QuadratureConfig& quad) {
  for (double b : kBoundaries) {
    if (x < b && x + 2.0 * h > b) h = (b - x) / 2.0;
  }
  const NearestMeasures f0 = measures_at(x, true, quad);
  const NearestMeasures f1 = measures_at(x + h, false, quad);
  const NearestMeasures f2 = measures_at(x + 2.0 * h, false, quad);
  return {(-3.0 * f0.concurrence + 4.0 * f1.concurrence - f2.concurrence) / (2.0 * h),
          (-3.0 * f0.bell + 4.0 * f1.bell - f2.bell) / (2.0 * h)};
}

// Accuracy of C_1 and B_1 implied by the quadrature and Richardson
// tolerances: tzz carries 4 * 10 abs_tol, txx adds 2 abs_tol + |delta| times
// that.
double value_accuracy(double delta, const QuadratureConfig& quad) {
  return 10.0 * quad.abs_tol * (4.0 + 2.0 * std::abs(delta)) + 2.0 * quad.abs_tol;
}

void fill_derivatives(SweepRecord& rec, double h, const QuadratureConfig& quad) {
  const OneSidedDerivatives full = one_sided_derivatives(rec.delta, h, quad);
  const OneSidedDerivatives half = one_sided_derivatives(rec.delta, h / 2.0, quad);
  rec.d_bell_left = full.bell_left;
  rec.d_bell_right = full.bell_right;
  rec.d_conc_left = full.conc_left;
  rec.d_conc_right = full.conc_right;
  // The 3-point stencils weigh values by 4/h in total.
  const double floor = 4.0 * value_accuracy(rec.delta, quad) / (h / 2.0);
  rec.d_bell_noise = std::max({std::abs(full.bell_left - half.bell_left),
                               std::abs(full.bell_right - half.bell_right), floor});
  rec.d_conc_noise = std::max({std::abs(full.conc_left - half.conc_left),
                               std::abs(full.conc_right - half.conc_right), floor});
}

double grid_step(const std::vector<SweepRecord>& records) {
  if (records.size() < 2) return 0.0;
  return (records.back().delta - records.front().delta) / static_cast<double>(records.size() - 1);
}

double nn_tzz(double x, const QuadratureConfig& quad) { return nn_correlations(x, quad).tzz; }

}  // namespace

std::string_view to_string(OutputFormat format) {
  return format == OutputFormat::Csv ? "csv" : "json";
}

void SweepConfig::validate() const {
  if (!std::isfinite(delta_min) || !std::isfinite(delta_max) || !(delta_min < delta_max)) {
    throw DomainError("sweep needs finite delta_min < delta_max");
  }
  if (steps < 2) {
    throw DomainError("sweep needs at least 2 steps");
  }
  if (neighbors.empty()) {
    throw DomainError("sweep needs at least one neighbour separation");
  }
  for (int r : neighbors) {
    if (r < 1 || r > 3) {
      throw DomainError("neighbour separations must be 1, 2 or 3, got " + std::to_string(r));
    }
  }
  if (!(derivative_step > 0.0)) {
    throw DomainError("derivative_step must be positive");
  }
  if (workers < 0) {
    throw DomainError("workers must be non-negative");
  }
  quad.validate();
  ed.validate();
}

double SweepConfig::grid_point(int i) const {
  double x = i == steps - 1
                 ? delta_max
                 : delta_min + (delta_max - delta_min) * static_cast<double>(i) / (steps - 1);
  for (double b : kBoundaries) {
    if (std::abs(x - b) < kSnap) x = b;
  }
  return x;
}

const PairRecord* SweepRecord::pair(int r) const {
  for (const auto& p : pairs) {
    if (p.r == r) return &p;
  }
  return nullptr;
}

bool SweepRecord::operator==(const SweepRecord& o) const {
  if (pairs.size() != o.pairs.size()) return false;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const PairRecord& a = pairs[i];
    const PairRecord& b = o.pairs[i];
    if (a.r != b.r || !same(a.txx, b.txx) || !same(a.tzz, b.tzz) ||
        !same(a.concurrence, b.concurrence) || !same(a.bell, b.bell) || a.region != b.region ||
        a.source != b.source || a.low_confidence != b.low_confidence ||
        !same(a.fit_residual, b.fit_residual)) {
      return false;
    }
  }
  return same(delta, o.delta) && same(e0, o.e0) && same(d_bell_left, o.d_bell_left) &&
         same(d_bell_right, o.d_bell_right) && same(d_bell_noise, o.d_bell_noise) &&
         same(d_conc_left, o.d_conc_left) && same(d_conc_right, o.d_conc_right) &&
         same(d_conc_noise, o.d_conc_noise) && low_confidence == o.low_confidence &&
         failure == o.failure;
}

NearestMeasures nearest_measures(double delta, const QuadratureConfig& quad, Side side) {
  const CorrelationSet c = nn_correlations(delta, quad, side);
  return {concurrence_symmetric(c), bell_measure_symmetric(c)};
}

OneSidedDerivatives one_sided_derivatives(double delta, double h, const QuadratureConfig& quad) {
  const Stencil left = left_stencil(delta, h, quad);
  const Stencil right = right_stencil(delta, h, quad);
  return {left.bell, right.bell, left.conc, right.conc};
}

SweepRecord evaluate_point(double delta, const SweepConfig& cfg, EdCache* cache) {
  SweepRecord rec;
  rec.delta = delta;
  try {
    rec.e0 = ground_energy(delta, cfg.quad);
    std::vector<int> rs = cfg.neighbors;
    std::sort(rs.begin(), rs.end());
    rs.erase(std::unique(rs.begin(), rs.end()), rs.end());
    std::vector<EDResult> ed;
    for (int r : rs) {
      CorrelationSet c;
      if (r == 1) {
        c = nn_correlations(delta, cfg.quad);
      } else {
        if (ed.empty()) {
          ed = cache != nullptr ? diagonalize(delta, cfg.ed, *cache) : diagonalize(delta, cfg.ed);
        }
        try {
          c = correlations_from_ed(ed, r, delta);
        } catch (const ExtrapolationError& e) {
          c = e.estimate();
        }
      }
      rec.pairs.push_back(make_pair_record(c));
      rec.low_confidence = rec.low_confidence || c.low_confidence;
    }
    fill_derivatives(rec, cfg.derivative_step, cfg.quad);
  } catch (const std::exception& e) {
    rec.failure = e.what();
  }
  return rec;
}

std::vector<SweepRecord> run_sweep(const SweepConfig& cfg) {
  cfg.validate();
  std::optional<EdCache> cache;
  if (!cfg.ed_cache.empty()) {
    cache.emplace(cfg.ed_cache);
    cache->load();
  }
  EdCache* cache_ptr = cache ? &*cache : nullptr;

  std::vector<SweepRecord> records(static_cast<std::size_t>(cfg.steps));
  std::atomic<int> next{0};
  const auto work = [&] {
    for (int i = next++; i < cfg.steps; i = next++) {
      records[static_cast<std::size_t>(i)] = evaluate_point(cfg.grid_point(i), cfg, cache_ptr);
    }
  };
  int workers = cfg.workers > 0 ? cfg.workers
                                : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  workers = std::min(workers, cfg.steps);
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (cache) cache->save();
  return records;
}

void probe_divergence(double x, const QuadratureConfig& quad, FirstOrderCandidate& candidate) {
  for (std::size_t k = 0; k < candidate.offsets.size(); ++k) {
    const double offset = candidate.offsets[k];
    const Stencil d = right_stencil(x + offset, offset / 10.0, quad);
    candidate.d_conc[k] = d.conc;
    candidate.d_bell[k] = d.bell;
  }
}

TransitionReport detect_transitions(const std::vector<SweepRecord>& records,
                                    const QuadratureConfig& quad) {
  TransitionReport report;
  if (records.size() < 2) return report;
  const double lo = records.front().delta;
  const double hi = records.back().delta;
  for (double b : kBoundaries) {
    if (!(lo < b && b < hi)) continue;
    const auto below = std::count_if(records.begin(), records.end(),
                                     [b](const SweepRecord& r) { return r.delta < b; });
    const auto above = std::count_if(records.begin(), records.end(),
                                     [b](const SweepRecord& r) { return r.delta > b; });
    if (below < kMinPointsPerSide || above < kMinPointsPerSide) {
      std::ostringstream msg;
      msg << "insufficient grid coverage around delta=" << b << ": " << below << " points below, "
          << above << " above, need " << kMinPointsPerSide << " on each side";
      throw DomainError(msg.str());
    }
  }

  const auto tzz1 = [](const SweepRecord& r) {
    const PairRecord* p = r.pair(1);
    return p != nullptr ? p->tzz : std::numeric_limits<double>::quiet_NaN();
  };

  std::vector<std::size_t> near_jump;
  for (std::size_t i = 0; i + 1 < records.size(); ++i) {
    const SweepRecord& a = records[i];
    const SweepRecord& c = records[i + 1];
    if (a.failed() || c.failed()) continue;
    const double jump = tzz1(c) - tzz1(a);
    if (!(std::abs(jump) > kJumpThreshold)) continue;
    near_jump.push_back(i);
    near_jump.push_back(i + 1);

    double left = a.delta;
    double right = c.delta;
    double t_left = tzz1(a);
    double t_right = tzz1(c);
    // Closer than ~1e-6 to a branch boundary the energy derivative loses
    // accuracy, so the bracket is refined to kJumpResolution only.
    while (right - left > kJumpResolution) {
      const double mid = 0.5 * (left + right);
      double t_mid = 0.0;
      try {
        t_mid = nn_tzz(mid, quad);
      } catch (const AccuracyError&) {
        break;
      }
      if (std::abs(t_mid - t_left) < std::abs(t_right - t_mid)) {
        left = mid;
        t_left = t_mid;
      } else {
        right = mid;
        t_right = t_mid;
      }
    }
    FirstOrderCandidate candidate;
    candidate.delta = right;
    candidate.grid_left = a.delta;
    candidate.grid_right = c.delta;
    candidate.tzz_jump = jump;
    probe_divergence(candidate.delta, quad, candidate);
    bool growing = true;
    for (std::size_t k = 1; k < candidate.offsets.size(); ++k) {
      growing = growing && std::abs(candidate.d_conc[k]) > std::abs(candidate.d_conc[k - 1]) &&
                std::abs(candidate.d_bell[k]) > std::abs(candidate.d_bell[k - 1]);
    }
    if (growing) report.first_order.push_back(candidate);
  }

  for (std::size_t i = 0; i < records.size(); ++i) {
    const SweepRecord& r = records[i];
    if (r.failed() || std::find(near_jump.begin(), near_jump.end(), i) != near_jump.end()) continue;
    const double bell_gap = std::abs(r.d_bell_left - r.d_bell_right);
    const double conc_gap = std::abs(r.d_conc_left - r.d_conc_right);
    if (bell_gap > 10.0 * r.d_bell_noise && conc_gap <= r.d_conc_noise) {
      report.kt.push_back({r.delta, bell_gap, r.d_bell_noise, conc_gap, r.d_conc_noise});
    }
  }
  return report;
}

std::vector<ClaimCheck> check_claims(const std::vector<SweepRecord>& records,
                                     const TransitionReport& report) {
  std::vector<ClaimCheck> checks;
  const double step = grid_step(records);
  const double lo = records.empty() ? 0.0 : records.front().delta;
  const double hi = records.empty() ? 0.0 : records.back().delta;
  std::vector<const SweepRecord*> ok;
  for (const auto& r : records) {
    if (!r.failed()) ok.push_back(&r);
  }

  {
    ClaimCheck c{"no per-point failures", true, ok.size() == records.size(), ""};
    c.detail = std::to_string(records.size() - ok.size()) + " failed points";
    checks.push_back(c);
  }
  {
    ClaimCheck c{"Bell measure <= 2 for every separation", true, true, ""};
    double worst = 0.0;
    for (const auto* r : ok) {
      for (const auto& p : r->pairs) worst = std::max(worst, p.bell);
    }
    c.passed = worst <= 2.0;
    c.detail = "max Bell measure " + std::to_string(worst);
    checks.push_back(c);
  }
  if (const bool has_r1 = !ok.empty() && ok.front()->pair(1) != nullptr; has_r1) {
    {
      ClaimCheck c{"C_1 = 0 for delta <= -1 and C_1 > 0 for delta > -1", true, true, ""};
      int bad = 0;
      for (const auto* r : ok) {
        const double conc = r->pair(1)->concurrence;
        if ((r->delta <= -1.0 && conc != 0.0) || (r->delta > -1.0 && !(conc > 0.0))) ++bad;
      }
      c.passed = bad == 0;
      c.detail = std::to_string(bad) + " violating points";
      checks.push_back(c);
    }
    {
      ClaimCheck c{"argmax of C_1 within one grid step of delta = 1", lo < 1.0 && 1.0 < hi, false,
                   ""};
      const auto* best = *std::max_element(ok.begin(), ok.end(), [](auto* a, auto* b) {
        return a->pair(1)->concurrence < b->pair(1)->concurrence;
      });
      c.passed = std::abs(best->delta - 1.0) <= step * (1.0 + 1e-9);
      c.detail = "argmax at delta = " + std::to_string(best->delta);
      checks.push_back(c);
    }
    {
      ClaimCheck c{"r = 1 SEPARABLE for delta <= -1, ENTANGLED_LOCAL above", true, true, ""};
      int bad = 0;
      for (const auto* r : ok) {
        const RegionLabel want = r->delta <= -1.0 ? RegionLabel::Separable : RegionLabel::EntangledLocal;
        if (r->pair(1)->region != want) ++bad;
      }
      c.passed = bad == 0;
      c.detail = std::to_string(bad) + " mislabelled points";
      checks.push_back(c);
    }
    {
      ClaimCheck c{"B_1 has a local minimum at delta = 1", false, false, ""};
      for (std::size_t i = 1; i + 1 < ok.size(); ++i) {
        if (ok[i]->delta != 1.0) continue;
        c.applicable = true;
        const double b = ok[i]->pair(1)->bell;
        c.passed = b <= ok[i - 1]->pair(1)->bell && b <= ok[i + 1]->pair(1)->bell;
        c.detail = "B_1(1) = " + std::to_string(b);
      }
      if (!c.applicable) c.detail = "delta = 1 is not an interior grid point";
      checks.push_back(c);
    }
    {
      ClaimCheck c{"Bell branch matches the phase (r = 1)", true, true, ""};
      int bad = 0;
      for (const auto* r : ok) {
        const double ax = std::abs(r->pair(1)->txx);
        const double az = std::abs(r->pair(1)->tzz);
        const bool gapless = r->delta > -1.0 && r->delta < 1.0;
        if (gapless ? !(ax > az) : !(ax <= az + 1e-12)) ++bad;
      }
      c.passed = bad == 0;
      c.detail = std::to_string(bad) + " mismatching points";
      checks.push_back(c);
    }
    {
      ClaimCheck c{"first-order transition detected at delta = -1", lo < -1.0 && -1.0 < hi, false,
                   ""};
      for (const auto& f : report.first_order) {
        if (std::abs(f.delta + 1.0) <= step) c.passed = true;
      }
      c.detail = std::to_string(report.first_order.size()) + " first-order candidates";
      checks.push_back(c);
    }
    {
      ClaimCheck c{"KT transition detected at delta = 1", lo < 1.0 && 1.0 < hi, false, ""};
      for (const auto& k : report.kt) {
        if (std::abs(k.delta - 1.0) <= step) c.passed = true;
      }
      c.detail = std::to_string(report.kt.size()) + " KT candidates";
      checks.push_back(c);
    }
  }
  for (int r : {2, 3}) {
    if (ok.empty() || ok.front()->pair(r) == nullptr) continue;
    ClaimCheck c{"r = " + std::to_string(r) + " entangled only in a window right of delta = -1",
                 lo < -1.0 && -1.0 < hi, false, ""};
    // Labels above -1 must read ENTANGLED_LOCAL...ENTANGLED_LOCAL SEPARABLE...
    // with a nonempty entangled prefix; everything at or below -1 SEPARABLE.
    bool in_window = true;
    bool valid = true;
    int window = 0;
    double window_end = -1.0;
    for (const auto* rec : ok) {
      const RegionLabel label = rec->pair(r)->region;
      if (rec->delta <= -1.0) {
        valid = valid && label == RegionLabel::Separable;
        continue;
      }
      if (label == RegionLabel::EntangledLocal && in_window) {
        ++window;
        window_end = rec->delta;
      } else if (label == RegionLabel::Separable) {
        in_window = false;
      } else {
        valid = false;
      }
    }
    c.passed = valid && window > 0;
    std::ostringstream detail;
    detail << "entangled window (-1, " << window_end << "], " << window << " points";
    c.detail = detail.str();
    checks.push_back(c);
  }
  return checks;
}

std::vector<MarkerRecord> marker_records(const SweepConfig& cfg) {
  static const std::array<const char*, 4> labels{"circle", "square", "triangle", "diamond"};
  std::optional<EdCache> cache;
  if (!cfg.ed_cache.empty()) {
    cache.emplace(cfg.ed_cache);
    cache->load();
  }
  std::vector<MarkerRecord> out;
  for (std::size_t k = 0; k < kMarkerDeltas.size(); ++k) {
    const double d = kMarkerDeltas[k];
    if (d < cfg.delta_min || d > cfg.delta_max) continue;
    MarkerRecord m;
    m.label = labels[k];
    m.record = evaluate_point(d, cfg, cache ? &*cache : nullptr);
    if (!m.record.failed() && !m.record.pairs.empty()) {
      const PairRecord& p = m.record.pairs.front();
      CorrelationSet c;
      c.r = p.r;
      c.txx = p.txx;
      c.tzz = p.tzz;
      m.bell_numeric = maximize_chsh(symmetric_state(c), kDefaultRestarts, cfg.seed).value;
    }
    out.push_back(std::move(m));
  }
  if (cache) cache->save();
  return out;
}

}  // namespace xxz
