#pragma once

// Exact diagonalization of finite XXZ rings, block-diagonalized by total S^z.
// Used as the independent check of the Bethe ansatz results and as the
// source of correlators beyond nearest neighbours.

#include <cstddef>
#include <functional>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace xxz {

enum class SectorMode {
  Auto,               // scan S^z >= 0 sectors (spin-flip symmetry), keep the lowest
  ZeroMagnetization,  // S^z = 0 only
  All,                // every sector, including S^z < 0
};

enum class Boundary {
  Periodic,
  Open,  // single-bond test mode; mainly for N = 2
};

std::string_view to_string(SectorMode mode);

struct EDConfig {
  std::vector<int> sizes{8, 10, 12, 14, 16};
  SectorMode which_sector = SectorMode::Auto;
  /// Residual norm |H psi - E psi| at which the Lanczos iteration stops.
  double eig_tol = 1e-10;
  Boundary boundary = Boundary::Periodic;
  /// Budget on the full Hilbert space dimension 2^N.
  std::size_t max_dimension = std::size_t{1} << 16;
  int max_iterations = 600;
  /// Sectors of rings smaller than this are diagonalized densely.
  int dense_below = 12;

  void validate() const;
};

struct PairCorrelator {
  int r = 0;
  double txx = 0.0;
  double tyy = 0.0;
  double tzz = 0.0;
};

struct EDResult {
  int n = 0;
  double ground_energy = 0.0;
  double energy_per_site = 0.0;
  /// Twice the total S^z of the sector holding the reported state.
  int magnetization2 = 0;
  bool degenerate = false;
  /// r = 1 .. n/2 (periodic) or 1 .. n-1 (open), averaged over positions.
  std::vector<PairCorrelator> correlators;
  /// Largest deviation of a single-position correlator from its average.
  double translation_spread = 0.0;

  const PairCorrelator& at(int r) const;
};

EDResult diagonalize_ring(double delta, int n, const EDConfig& cfg);

/// One EDResult per configured ring size, in the order of cfg.sizes.
std::vector<EDResult> diagonalize(double delta, const EDConfig& cfg);

/// Selects a scalar from an EDResult for finite-size extrapolation.
struct Quantity {
  std::string name;
  std::function<double(const EDResult&)> select;

  static Quantity energy_per_site();
  static Quantity txx(int r);
  static Quantity tzz(int r);
};

struct Extrapolation {
  double value = 0.0;
  /// Root-mean-square residual of the a + b / N^2 fit.
  double residual = 0.0;
};

/// Least-squares fit a + b / N^2 over the results; returns a.
Extrapolation extrapolate(std::span<const EDResult> results, const Quantity& quantity);

/// On-disk key-value cache of EDResult records keyed by (N, delta, sector).
///
/// One record per line:
///   key<TAB>value
/// with key "n=<N>;delta=<%.17g>;sector=<AUTO|ZERO|ALL>;bc=<PBC|OBC>" and value a
/// space-separated list
///   ground_energy energy_per_site magnetization2 degenerate spread count
///   followed by count quadruples (r txx tyy tzz).
/// Safe for concurrent use.
class EdCache {
 public:
  EdCache() = default;
  explicit EdCache(std::string path);

  std::optional<EDResult> find(int n, double delta, const EDConfig& cfg) const;
  void insert(double delta, const EDConfig& cfg, const EDResult& result);
  std::size_t size() const;

  /// Loads records from `path` if it exists.
  void load();
  void save() const;

  static std::string key(int n, double delta, const EDConfig& cfg);
  static std::string encode(const EDResult& result);
  static EDResult decode(int n, const std::string& value);

 private:
  std::string path_;
  mutable std::mutex mutex_;
  std::unordered_map<std::string, std::string> records_;
};

/// diagonalize() consulting and filling `cache`.
std::vector<EDResult> diagonalize(double delta, const EDConfig& cfg, EdCache& cache);

}  // namespace xxz
