#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "xxz/ed_oracle.hpp"
#include "xxz/errors.hpp"

namespace xxz {

namespace {

std::string format_double(double x) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.17g", x);
  return buffer;
}

}  // namespace

EdCache::EdCache(std::string path) : path_(std::move(path)) {}

std::string EdCache::key(int n, double delta, const EDConfig& cfg) {
  std::ostringstream out;
  out << "n=" << n << ";delta=" << format_double(delta) << ";sector=" << to_string(cfg.which_sector)
      << ";bc=" << (cfg.boundary == Boundary::Periodic ? "PBC" : "OBC");
  return out.str();
}

std::string EdCache::encode(const EDResult& result) {
  std::ostringstream out;
  out << format_double(result.ground_energy) << ' ' << format_double(result.energy_per_site)
      << ' ' << result.magnetization2 << ' ' << (result.degenerate ? 1 : 0) << ' '
      << format_double(result.translation_spread) << ' ' << result.correlators.size();
  for (const auto& c : result.correlators) {
    out << ' ' << c.r << ' ' << format_double(c.txx) << ' ' << format_double(c.tyy) << ' '
        << format_double(c.tzz);
  }
  return out.str();
}

EDResult EdCache::decode(int n, const std::string& value) {
  std::istringstream in(value);
  EDResult result;
  result.n = n;
  int degenerate = 0;
  std::size_t count = 0;
  in >> result.ground_energy >> result.energy_per_site >> result.magnetization2 >> degenerate >>
      result.translation_spread >> count;
  result.degenerate = degenerate != 0;
  for (std::size_t i = 0; i < count; ++i) {
    PairCorrelator c;
    in >> c.r >> c.txx >> c.tyy >> c.tzz;
    result.correlators.push_back(c);
  }
  if (!in) {
    throw DomainError("malformed ED cache record: " + value);
  }
  return result;
}

std::optional<EDResult> EdCache::find(int n, double delta, const EDConfig& cfg) const {
  const std::string k = key(n, delta, cfg);
  std::lock_guard lock(mutex_);
  const auto it = records_.find(k);
  if (it == records_.end()) return std::nullopt;
  return decode(n, it->second);
}

void EdCache::insert(double delta, const EDConfig& cfg, const EDResult& result) {
  std::string k = key(result.n, delta, cfg);
  std::string v = encode(result);
  std::lock_guard lock(mutex_);
  records_[std::move(k)] = std::move(v);
}

std::size_t EdCache::size() const {
  std::lock_guard lock(mutex_);
  return records_.size();
}

void EdCache::load() {
  if (path_.empty() || !std::filesystem::exists(path_)) return;
  std::ifstream in(path_);
  if (!in) {
    throw std::runtime_error("cannot read ED cache " + path_);
  }
  std::lock_guard lock(mutex_);
  std::string line;
  while (std::getline(in, line)) {
    const auto tab = line.find('\t');
    if (line.empty() || tab == std::string::npos) continue;
    records_[line.substr(0, tab)] = line.substr(tab + 1);
  }
}

void EdCache::save() const {
  if (path_.empty()) return;
  std::map<std::string, std::string> sorted;
  {
    std::lock_guard lock(mutex_);
    sorted.insert(records_.begin(), records_.end());
  }
  std::ofstream out(path_);
  if (!out) {
    throw std::runtime_error("cannot write ED cache " + path_);
  }
  for (const auto& [k, v] : sorted) {
    out << k << '\t' << v << '\n';
  }
  if (!out) {
    throw std::runtime_error("failed writing ED cache " + path_);
  }
}

}  // namespace xxz
