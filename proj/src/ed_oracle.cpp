#include "xxz/ed_oracle.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <set>
#include <sstream>

#include "xxz/errors.hpp"

namespace xxz {

namespace {

using State = std::uint32_t;
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

constexpr int kMaxSites = 30;
constexpr std::size_t kDenseSectorLimit = 256;
constexpr int kConvergenceCheckStride = 4;

// Binomial table for ranking fixed-popcount states in increasing numeric order.
class Binomials {
 public:
  Binomials() {
    for (int n = 0; n <= kMaxSites; ++n) {
      table_[n][0] = 1;
      for (int k = 1; k <= n; ++k) {
        table_[n][k] = table_[n - 1][k - 1] + (k <= n - 1 ? table_[n - 1][k] : 0);
      }
    }
  }
  std::size_t operator()(int n, int k) const { return k > n ? 0 : table_[n][k]; }

 private:
  std::array<std::array<std::size_t, kMaxSites + 1>, kMaxSites + 1> table_{};
};

const Binomials& binomials() {
  static const Binomials table;
  return table;
}

// Basis of one S^z sector: all n-bit states with `up` set bits (bit = spin up).
class Sector {
 public:
  Sector(int n, int up) : n_(n), up_(up) {
    const std::size_t dim = binomials()(n, up);
    states_.reserve(dim);
    if (up == 0) {
      states_.push_back(0);
      return;
    }
    State s = (State{1} << up) - 1;
    const State limit = State{1} << n;
    while (s < limit) {
      states_.push_back(s);
      // Gosper's hack: next integer with the same popcount.
      const State c = s & (~s + 1);
      const State r = s + c;
      s = (((r ^ s) >> 2) / c) | r;
    }
  }

  std::size_t dim() const { return states_.size(); }
  State state(std::size_t index) const { return states_[index]; }
  int up() const { return up_; }
  int n() const { return n_; }

  // Colex rank, which coincides with the numeric order used by the basis.
  std::size_t rank(State s) const {
    std::size_t index = 0;
    int k = 1;
    while (s != 0) {
      const int pos = std::countr_zero(s);
      index += binomials()(pos, k);
      s &= s - 1;
      ++k;
    }
    return index;
  }

 private:
  int n_;
  int up_;
  std::vector<State> states_;
};

std::vector<std::pair<int, int>> bonds(int n, Boundary boundary) {
  std::vector<std::pair<int, int>> result;
  const int count = boundary == Boundary::Periodic ? n : n - 1;
  for (int i = 0; i < count; ++i) {
    result.emplace_back(i, (i + 1) % n);
  }
  return result;
}

bool spin_up(State s, int site) { return ((s >> site) & 1U) != 0; }

SparseMatrix sector_hamiltonian(const Sector& sector, double delta,
                                const std::vector<std::pair<int, int>>& bond_list) {
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(sector.dim() * (bond_list.size() / 2 + 1));
  for (std::size_t a = 0; a < sector.dim(); ++a) {
    const State s = sector.state(a);
    double diagonal = 0.0;
    for (const auto& [i, j] : bond_list) {
      if (spin_up(s, i) == spin_up(s, j)) {
        diagonal += 0.25 * delta;
      } else {
        diagonal -= 0.25 * delta;
        const State flipped = s ^ ((State{1} << i) | (State{1} << j));
        entries.emplace_back(static_cast<int>(sector.rank(flipped)), static_cast<int>(a), 0.5);
      }
    }
    entries.emplace_back(static_cast<int>(a), static_cast<int>(a), diagonal);
  }
  SparseMatrix h(static_cast<int>(sector.dim()), static_cast<int>(sector.dim()));
  h.setFromTriplets(entries.begin(), entries.end());
  return h;
}

struct Eigenpair {
  double value = 0.0;
  Eigen::VectorXd vector;
};

Eigenpair dense_lowest(const SparseMatrix& h) {
  const Eigen::MatrixXd dense(h);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense);
  if (solver.info() != Eigen::Success) {
    throw EigensolverError("dense eigensolver failed");
  }
  return {solver.eigenvalues()(0), solver.eigenvectors().col(0)};
}

Eigen::VectorXd start_vector(std::size_t dim) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < dim; ++i) {
    const double x = static_cast<double>(i);
    v(static_cast<Eigen::Index>(i)) = 1.0 + 0.5 * std::sin(1.3 * x + 0.4) + 0.25 * std::cos(0.071 * x * x);
  }
  return v.normalized();
}

// Plain three-term Lanczos. The first pass keeps only the tridiagonal
// coefficients; the Ritz vector is rebuilt by replaying the recurrence, so
// memory stays O(dim) per sector.
struct LanczosRun {
  Eigen::VectorXd start;
  std::vector<double> alpha;
  std::vector<double> beta;
  double value = 0.0;
  Eigen::VectorXd coefficients;  // lowest eigenvector of the tridiagonal matrix
};

// Lowest eigenvalue of the leading m x m tridiagonal block by Sturm-sequence
// bisection inside the Gershgorin interval.
double tridiagonal_lowest_value(const std::vector<double>& alpha, const std::vector<double>& beta,
                                int m) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (int i = 0; i < m; ++i) {
    const double radius = (i > 0 ? std::abs(beta[i - 1]) : 0.0) + (i + 1 < m ? std::abs(beta[i]) : 0.0);
    lo = std::min(lo, alpha[i] - radius);
    hi = std::max(hi, alpha[i] + radius);
  }
  // Number of eigenvalues below x.
  const auto count_below = [&](double x) {
    int count = 0;
    double q = 1.0;
    for (int i = 0; i < m; ++i) {
      const double b2 = i > 0 ? beta[i - 1] * beta[i - 1] : 0.0;
      q = alpha[i] - x - (i > 0 ? b2 / q : 0.0);
      if (q == 0.0) q = -1e-300;
      if (q < 0.0) ++count;
    }
    return count;
  };
  const double scale = std::max({1.0, std::abs(lo), std::abs(hi)});
  while (hi - lo > 1e-15 * scale) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (count_below(mid) >= 1) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Eigenvector of the lowest eigenvalue `value` of the tridiagonal matrix by
// inverse iteration. The shift sits just below `value`, so T - shift is
// positive definite and the LDL^T sweep needs no pivoting.
Eigen::VectorXd tridiagonal_lowest_vector(const std::vector<double>& alpha,
                                          const std::vector<double>& beta, int m, double value) {
  const double shift = value - 1e-10 * std::max(1.0, std::abs(value));
  std::vector<double> d(static_cast<std::size_t>(m));
  std::vector<double> l(static_cast<std::size_t>(std::max(m - 1, 0)));
  d[0] = alpha[0] - shift;
  for (int i = 1; i < m; ++i) {
    l[i - 1] = beta[i - 1] / d[i - 1];
    d[i] = alpha[i] - shift - l[i - 1] * beta[i - 1];
  }
  Eigen::VectorXd x = Eigen::VectorXd::Ones(m);
  for (int iteration = 0; iteration < 3; ++iteration) {
    for (int i = 1; i < m; ++i) x(i) -= l[i - 1] * x(i - 1);
    for (int i = 0; i < m; ++i) x(i) /= d[i];
    for (int i = m - 2; i >= 0; --i) x(i) -= l[i] * x(i + 1);
    x.normalize();
  }
  return x;
}

LanczosRun lanczos_run(const SparseMatrix& h, Eigen::VectorXd start, double tol,
                       int max_iterations) {
  const auto dim = h.rows();
  const int limit = static_cast<int>(std::min<Eigen::Index>(max_iterations, dim));
  LanczosRun run;
  run.start = std::move(start);
  Eigen::VectorXd v = run.start;
  Eigen::VectorXd previous = Eigen::VectorXd::Zero(dim);
  Eigen::VectorXd w(dim);
  double last_value = std::numeric_limits<double>::infinity();
  double residual = std::numeric_limits<double>::infinity();
  for (int k = 0; k < limit; ++k) {
    w.noalias() = h * v;
    const double a = v.dot(w);
    w -= a * v;
    if (k > 0) w -= run.beta.back() * previous;
    const double b = w.norm();
    run.alpha.push_back(a);

    const int m = k + 1;
    const bool invariant = b < 1e-13;
    const bool last = m == limit;
    if (invariant || last || m % kConvergenceCheckStride == 0) {
      const double value = tridiagonal_lowest_value(run.alpha, run.beta, m);
      const bool stalled = std::abs(value - last_value) < 1e-13 * std::max(1.0, std::abs(value));
      last_value = value;
      if (invariant || last || stalled) {
        run.value = value;
        run.coefficients = tridiagonal_lowest_vector(run.alpha, run.beta, m, value);
        residual = b * std::abs(run.coefficients(m - 1));
        if (invariant || residual < tol || last) {
          return run;
        }
      }
    }
    run.beta.push_back(b);
    previous.swap(v);
    v = w / b;
  }
  return run;
}

Eigen::VectorXd lanczos_vector(const SparseMatrix& h, const LanczosRun& run) {
  const auto dim = h.rows();
  const auto m = run.coefficients.size();
  Eigen::VectorXd psi = run.coefficients(0) * run.start;
  Eigen::VectorXd v = run.start;
  Eigen::VectorXd previous = Eigen::VectorXd::Zero(dim);
  Eigen::VectorXd w(dim);
  for (Eigen::Index k = 0; k + 1 < m; ++k) {
    w.noalias() = h * v;
    w -= run.alpha[static_cast<std::size_t>(k)] * v;
    if (k > 0) w -= run.beta[static_cast<std::size_t>(k - 1)] * previous;
    previous.swap(v);
    v = w / run.beta[static_cast<std::size_t>(k)];
    psi += run.coefficients(k + 1) * v;
  }
  return psi.normalized();
}

// Lowest eigenpair; restarts from the current Ritz vector until the true
// residual |H psi - E psi| is below tol.
Eigenpair lanczos_lowest(const SparseMatrix& h, LanczosRun run, double tol, int max_iterations) {
  constexpr int kMaxRestarts = 8;
  double residual = std::numeric_limits<double>::infinity();
  for (int restart = 0; restart <= kMaxRestarts; ++restart) {
    Eigen::VectorXd psi = lanczos_vector(h, run);
    const double value = psi.dot(h * psi);
    residual = (h * psi - value * psi).norm();
    if (residual < tol) {
      return {value, std::move(psi)};
    }
    run = lanczos_run(h, std::move(psi), tol, max_iterations);
  }
  std::ostringstream msg;
  msg << "Lanczos did not converge after " << kMaxRestarts << " restarts (residual " << residual
      << ")";
  throw EigensolverError(msg.str());
}

struct SectorGround {
  int up = 0;
  double energy = 0.0;
  SparseMatrix hamiltonian;
  std::optional<LanczosRun> run;  // empty when solved densely
  Eigen::VectorXd psi;            // filled eagerly for dense sectors
};

SectorGround solve_sector(int n, int up, double delta, const EDConfig& cfg,
                          const std::vector<std::pair<int, int>>& bond_list) {
  const Sector sector(n, up);
  SectorGround ground;
  ground.up = up;
  ground.hamiltonian = sector_hamiltonian(sector, delta, bond_list);
  if (n < cfg.dense_below || sector.dim() <= kDenseSectorLimit) {
    Eigenpair pair = dense_lowest(ground.hamiltonian);
    ground.energy = pair.value;
    ground.psi = std::move(pair.vector);
    return ground;
  }
  ground.run = lanczos_run(ground.hamiltonian, start_vector(sector.dim()), cfg.eig_tol,
                           cfg.max_iterations);
  ground.energy = ground.run->value;
  return ground;
}

std::vector<int> sectors_to_scan(int n, SectorMode mode) {
  std::vector<int> ups;
  switch (mode) {
    case SectorMode::ZeroMagnetization:
      ups.push_back(n / 2);
      break;
    case SectorMode::Auto:
      for (int up = n / 2; up <= n; ++up) ups.push_back(up);
      break;
    case SectorMode::All:
      for (int up = 0; up <= n; ++up) ups.push_back(up);
      break;
  }
  return ups;
}

void measure_correlators(const Sector& sector, const Eigen::VectorXd& psi, Boundary boundary,
                         EDResult& result) {
  const int n = sector.n();
  const int r_max = boundary == Boundary::Periodic ? n / 2 : n - 1;
  double spread = 0.0;
  for (int r = 1; r <= r_max; ++r) {
    const int positions = boundary == Boundary::Periodic ? n : n - r;
    std::vector<std::array<double, 3>> per_site(static_cast<std::size_t>(positions));
    for (int i = 0; i < positions; ++i) {
      const int j = (i + r) % n;
      const State mask = (State{1} << i) | (State{1} << j);
      double xx = 0.0;
      double yy = 0.0;
      double zz = 0.0;
      for (std::size_t a = 0; a < sector.dim(); ++a) {
        const State s = sector.state(a);
        const double amp = psi(static_cast<Eigen::Index>(a));
        const bool parallel = spin_up(s, i) == spin_up(s, j);
        zz += amp * amp * (parallel ? 1.0 : -1.0);
        // sigma^x sigma^x and sigma^y sigma^y both flip the pair; sigma^y
        // contributes the phase (+-i)(+-i), which is -1 for parallel spins.
        const State t = s ^ mask;
        if (std::popcount(t) == sector.up()) {
          const double overlap = amp * psi(static_cast<Eigen::Index>(sector.rank(t)));
          xx += overlap;
          yy += parallel ? -overlap : overlap;
        }
      }
      per_site[static_cast<std::size_t>(i)] = {xx, yy, zz};
    }
    PairCorrelator avg{r, 0.0, 0.0, 0.0};
    for (const auto& c : per_site) {
      avg.txx += c[0];
      avg.tyy += c[1];
      avg.tzz += c[2];
    }
    avg.txx /= positions;
    avg.tyy /= positions;
    avg.tzz /= positions;
    for (const auto& c : per_site) {
      spread = std::max({spread, std::abs(c[0] - avg.txx), std::abs(c[1] - avg.tyy),
                         std::abs(c[2] - avg.tzz)});
    }
    result.correlators.push_back(avg);
  }
  result.translation_spread = spread;
}

}  // namespace

std::string_view to_string(SectorMode mode) {
  switch (mode) {
    case SectorMode::Auto:
      return "AUTO";
    case SectorMode::ZeroMagnetization:
      return "ZERO";
    case SectorMode::All:
      return "ALL";
  }
  return "UNKNOWN";
}

void EDConfig::validate() const {
  if (sizes.empty()) {
    throw DomainError("ED configuration needs at least one ring size");
  }
  for (int n : sizes) {
    if (n < 2 || n % 2 != 0 || n > kMaxSites) {
      throw DomainError("ring sizes must be even and at least 2, got " + std::to_string(n));
    }
  }
  if (!(eig_tol > 0.0)) {
    throw DomainError("eig_tol must be positive");
  }
}

const PairCorrelator& EDResult::at(int r) const {
  for (const auto& c : correlators) {
    if (c.r == r) return c;
  }
  throw DomainError("separation r=" + std::to_string(r) + " not available for N=" +
                    std::to_string(n));
}

EDResult diagonalize_ring(double delta, int n, const EDConfig& cfg) {
  if (!std::isfinite(delta)) {
    throw DomainError("anisotropy must be finite");
  }
  cfg.validate();
  if (n < 2 || n % 2 != 0 || n > kMaxSites) {
    throw DomainError("ring size must be even and at least 2");
  }
  if ((std::size_t{1} << n) > cfg.max_dimension) {
    throw ResourceError("Hilbert space dimension 2^" + std::to_string(n) +
                        " exceeds the configured budget of " + std::to_string(cfg.max_dimension));
  }
  const auto bond_list = bonds(n, cfg.boundary);

  std::vector<SectorGround> grounds;
  for (int up : sectors_to_scan(n, cfg.which_sector)) {
    grounds.push_back(solve_sector(n, up, delta, cfg, bond_list));
  }
  double lowest = std::numeric_limits<double>::infinity();
  for (const auto& g : grounds) lowest = std::min(lowest, g.energy);

  // Ties go to the largest |S^z|: at delta <= -1 that picks one aligned state.
  const double tie = 1e-9 * std::max(1.0, std::abs(lowest));
  const SectorGround* winner = nullptr;
  int ties = 0;
  for (const auto& g : grounds) {
    if (g.energy - lowest > tie) continue;
    ++ties;
    if (winner == nullptr || std::abs(2 * g.up - n) > std::abs(2 * winner->up - n)) {
      winner = &g;
    }
  }

  EDResult result;
  result.n = n;
  result.ground_energy = winner->energy;
  result.energy_per_site = winner->energy / n;
  result.magnetization2 = 2 * winner->up - n;
  result.degenerate = ties > 1 || (result.magnetization2 != 0 &&
                                   cfg.which_sector != SectorMode::ZeroMagnetization);
  if (winner->run) {
    Eigenpair pair = lanczos_lowest(winner->hamiltonian, *winner->run, cfg.eig_tol,
                                    cfg.max_iterations);
    result.ground_energy = pair.value;
    result.energy_per_site = pair.value / n;
    measure_correlators(Sector(n, winner->up), pair.vector, cfg.boundary, result);
  } else {
    measure_correlators(Sector(n, winner->up), winner->psi, cfg.boundary, result);
  }
  return result;
}

std::vector<EDResult> diagonalize(double delta, const EDConfig& cfg) {
  cfg.validate();
  std::vector<EDResult> results;
  results.reserve(cfg.sizes.size());
  for (int n : cfg.sizes) {
    results.push_back(diagonalize_ring(delta, n, cfg));
  }
  return results;
}

std::vector<EDResult> diagonalize(double delta, const EDConfig& cfg, EdCache& cache) {
  cfg.validate();
  std::vector<EDResult> results;
  results.reserve(cfg.sizes.size());
  for (int n : cfg.sizes) {
    if (auto hit = cache.find(n, delta, cfg)) {
      results.push_back(std::move(*hit));
      continue;
    }
    results.push_back(diagonalize_ring(delta, n, cfg));
    cache.insert(delta, cfg, results.back());
  }
  return results;
}

Quantity Quantity::energy_per_site() {
  return {"energy_per_site", [](const EDResult& r) { return r.energy_per_site; }};
}

Quantity Quantity::txx(int r) {
  return {"txx(r=" + std::to_string(r) + ")", [r](const EDResult& res) { return res.at(r).txx; }};
}

Quantity Quantity::tzz(int r) {
  return {"tzz(r=" + std::to_string(r) + ")", [r](const EDResult& res) { return res.at(r).tzz; }};
}

Extrapolation extrapolate(std::span<const EDResult> results, const Quantity& quantity) {
  std::set<int> distinct;
  for (const auto& r : results) distinct.insert(r.n);
  if (distinct.size() < 3) {
    throw DomainError("extrapolation of " + quantity.name + " needs at least 3 distinct sizes");
  }
  const auto m = static_cast<Eigen::Index>(results.size());
  Eigen::MatrixXd design(m, 2);
  Eigen::VectorXd y(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double n = results[static_cast<std::size_t>(i)].n;
    design(i, 0) = 1.0;
    design(i, 1) = 1.0 / (n * n);
    y(i) = quantity.select(results[static_cast<std::size_t>(i)]);
  }
  const Eigen::Vector2d coef = design.colPivHouseholderQr().solve(y);
  const Eigen::VectorXd residuals = design * coef - y;
  return {coef(0), std::sqrt(residuals.squaredNorm() / static_cast<double>(m))};
}

}  // namespace xxz
