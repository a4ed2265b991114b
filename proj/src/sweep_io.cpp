#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "xxz/errors.hpp"
#include "xxz/sweep.hpp"

namespace xxz {

namespace {

using nlohmann::json;

std::string num(double x) {
  if (std::isnan(x)) return "nan";
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", x);
  return buffer;
}

json num_json(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

double json_num(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

RegionLabel region_from_string(const std::string& s) {
  for (RegionLabel label : {RegionLabel::Unphysical, RegionLabel::Separable,
                            RegionLabel::EntangledLocal, RegionLabel::Nonlocal}) {
    if (to_string(label) == s) return label;
  }
  throw DomainError("unknown region label " + s);
}

CorrelationSource source_from_string(const std::string& s) {
  for (CorrelationSource source : {CorrelationSource::Bethe, CorrelationSource::EdExtrapolated}) {
    if (to_string(source) == s) return source;
  }
  throw DomainError("unknown correlation source " + s);
}

std::vector<int> separations(const std::vector<SweepRecord>& records) {
  for (const auto& r : records) {
    if (!r.failed()) {
      std::vector<int> rs;
      for (const auto& p : r.pairs) rs.push_back(p.r);
      return rs;
    }
  }
  return {};
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

json record_json(const SweepRecord& r) {
  json pairs = json::array();
  for (const auto& p : r.pairs) {
    pairs.push_back({{"r", p.r},
                     {"txx", num_json(p.txx)},
                     {"tzz", num_json(p.tzz)},
                     {"concurrence", num_json(p.concurrence)},
                     {"bell", num_json(p.bell)},
                     {"region", std::string(to_string(p.region))},
                     {"source", std::string(to_string(p.source))},
                     {"low_confidence", p.low_confidence},
                     {"fit_residual", num_json(p.fit_residual)}});
  }
  return {{"delta", num_json(r.delta)},
          {"e0", num_json(r.e0)},
          {"pairs", pairs},
          {"d_bell_left", num_json(r.d_bell_left)},
          {"d_bell_right", num_json(r.d_bell_right)},
          {"d_bell_noise", num_json(r.d_bell_noise)},
          {"d_conc_left", num_json(r.d_conc_left)},
          {"d_conc_right", num_json(r.d_conc_right)},
          {"d_conc_noise", num_json(r.d_conc_noise)},
          {"low_confidence", r.low_confidence},
          {"failure", r.failure}};
}

SweepRecord record_from_json(const json& j) {
  SweepRecord r;
  r.delta = json_num(j.at("delta"));
  r.e0 = json_num(j.at("e0"));
  for (const auto& jp : j.at("pairs")) {
    PairRecord p;
    p.r = jp.at("r").get<int>();
    p.txx = json_num(jp.at("txx"));
    p.tzz = json_num(jp.at("tzz"));
    p.concurrence = json_num(jp.at("concurrence"));
    p.bell = json_num(jp.at("bell"));
    p.region = region_from_string(jp.at("region").get<std::string>());
    p.source = source_from_string(jp.at("source").get<std::string>());
    p.low_confidence = jp.at("low_confidence").get<bool>();
    p.fit_residual = json_num(jp.at("fit_residual"));
    r.pairs.push_back(p);
  }
  r.d_bell_left = json_num(j.at("d_bell_left"));
  r.d_bell_right = json_num(j.at("d_bell_right"));
  r.d_bell_noise = json_num(j.at("d_bell_noise"));
  r.d_conc_left = json_num(j.at("d_conc_left"));
  r.d_conc_right = json_num(j.at("d_conc_right"));
  r.d_conc_noise = json_num(j.at("d_conc_noise"));
  r.low_confidence = j.at("low_confidence").get<bool>();
  r.failure = j.at("failure").get<std::string>();
  return r;
}

std::string trajectory_csv(const std::vector<SweepRecord>& records,
                           const std::vector<MarkerRecord>& markers) {
  std::ostringstream out;
  out << "marker,r,delta,txx,tzz,region,bell_numeric\n";
  for (const auto& r : records) {
    if (r.failed()) continue;
    for (const auto& p : r.pairs) {
      out << ',' << p.r << ',' << num(r.delta) << ',' << num(p.txx) << ',' << num(p.tzz) << ','
          << to_string(p.region) << ",\n";
    }
  }
  for (const auto& m : markers) {
    if (m.record.failed()) continue;
    for (const auto& p : m.record.pairs) {
      out << m.label << ',' << p.r << ',' << num(m.record.delta) << ',' << num(p.txx) << ','
          << num(p.tzz) << ',' << to_string(p.region) << ','
          << (&p == &m.record.pairs.front() ? num(m.bell_numeric) : "") << '\n';
    }
  }
  return out.str();
}

json trajectory_json(const std::vector<SweepRecord>& records,
                     const std::vector<MarkerRecord>& markers) {
  json points = json::array();
  for (const auto& r : records) {
    if (r.failed()) continue;
    for (const auto& p : r.pairs) {
      points.push_back({{"r", p.r},
                        {"delta", num_json(r.delta)},
                        {"txx", num_json(p.txx)},
                        {"tzz", num_json(p.tzz)},
                        {"region", std::string(to_string(p.region))}});
    }
  }
  json marks = json::array();
  for (const auto& m : markers) {
    if (m.record.failed()) continue;
    for (const auto& p : m.record.pairs) {
      marks.push_back({{"marker", m.label},
                       {"r", p.r},
                       {"delta", num_json(m.record.delta)},
                       {"txx", num_json(p.txx)},
                       {"tzz", num_json(p.tzz)},
                       {"region", std::string(to_string(p.region))}});
    }
    if (!m.record.pairs.empty()) marks.back()["bell_numeric"] = num_json(m.bell_numeric);
  }
  return {{"points", points}, {"markers", marks}};
}

std::string boundaries_csv(const std::vector<Polyline>& boundaries) {
  std::ostringstream out;
  out << "name,index,txx,tzz\n";
  for (const auto& line : boundaries) {
    for (std::size_t i = 0; i < line.points.size(); ++i) {
      out << line.name << ',' << i << ',' << num(line.points[i].x()) << ','
          << num(line.points[i].y()) << '\n';
    }
  }
  return out.str();
}

json boundaries_json(const std::vector<Polyline>& boundaries) {
  json out = json::array();
  for (const auto& line : boundaries) {
    json points = json::array();
    for (const auto& p : line.points) points.push_back({p.x(), p.y()});
    out.push_back({{"name", line.name}, {"points", points}});
  }
  return {{"boundaries", out}};
}

std::string derivatives_csv(const std::vector<SweepRecord>& records) {
  std::ostringstream out;
  out << "delta,d_bell_left,d_bell_right,d_bell_noise,d_conc_left,d_conc_right,d_conc_noise\n";
  for (const auto& r : records) {
    if (r.failed()) continue;
    out << num(r.delta) << ',' << num(r.d_bell_left) << ',' << num(r.d_bell_right) << ','
        << num(r.d_bell_noise) << ',' << num(r.d_conc_left) << ',' << num(r.d_conc_right) << ','
        << num(r.d_conc_noise) << '\n';
  }
  return out.str();
}

json derivatives_json(const std::vector<SweepRecord>& records) {
  json rows = json::array();
  for (const auto& r : records) {
    if (r.failed()) continue;
    rows.push_back({{"delta", num_json(r.delta)},
                    {"d_bell_left", num_json(r.d_bell_left)},
                    {"d_bell_right", num_json(r.d_bell_right)},
                    {"d_bell_noise", num_json(r.d_bell_noise)},
                    {"d_conc_left", num_json(r.d_conc_left)},
                    {"d_conc_right", num_json(r.d_conc_right)},
                    {"d_conc_noise", num_json(r.d_conc_noise)}});
  }
  return {{"derivatives", rows}};
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  out << text;
  out.close();
  if (!out) {
    throw std::runtime_error("failed writing " + path.string());
  }
}

}  // namespace

std::string sweep_csv(const std::vector<SweepRecord>& records) {
  const std::vector<int> rs = separations(records);
  std::ostringstream out;
  out << "delta,e0";
  for (int r : rs) {
    out << ",txx_" << r << ",tzz_" << r << ",concurrence_" << r << ",bell_" << r << ",region_"
        << r << ",source_" << r << ",low_confidence_" << r << ",fit_residual_" << r;
  }
  out << ",d_bell_left,d_bell_right,d_bell_noise,d_conc_left,d_conc_right,d_conc_noise,"
         "low_confidence,failure\n";
  for (const auto& rec : records) {
    out << num(rec.delta) << ',' << (rec.failed() ? "" : num(rec.e0));
    for (int r : rs) {
      const PairRecord* p = rec.pair(r);
      if (p == nullptr) {
        out << ",,,,,,,,";
        continue;
      }
      out << ',' << num(p->txx) << ',' << num(p->tzz) << ',' << num(p->concurrence) << ','
          << num(p->bell) << ',' << to_string(p->region) << ',' << to_string(p->source) << ','
          << (p->low_confidence ? 1 : 0) << ',' << num(p->fit_residual);
    }
    if (rec.failed()) {
      out << ",,,,,,";
    } else {
      out << ',' << num(rec.d_bell_left) << ',' << num(rec.d_bell_right) << ','
          << num(rec.d_bell_noise) << ',' << num(rec.d_conc_left) << ','
          << num(rec.d_conc_right) << ',' << num(rec.d_conc_noise);
    }
    out << ',' << (rec.low_confidence ? 1 : 0) << ',' << csv_field(rec.failure) << '\n';
  }
  return out.str();
}

std::string sweep_json(const std::vector<SweepRecord>& records) {
  json rows = json::array();
  for (const auto& r : records) rows.push_back(record_json(r));
  return json{{"records", rows}}.dump(1) + "\n";
}

std::vector<SweepRecord> records_from_json(const std::string& text) {
  const json j = json::parse(text);
  std::vector<SweepRecord> out;
  for (const auto& r : j.at("records")) out.push_back(record_from_json(r));
  return out;
}

EmittedFiles emit(const std::vector<SweepRecord>& records, const std::vector<MarkerRecord>& markers,
                  const std::vector<Polyline>& boundaries, OutputFormat format,
                  const std::filesystem::path& out_dir) {
  if (records.empty()) {
    throw DomainError("emit needs at least one record");
  }
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    throw std::runtime_error("cannot create output directory " + out_dir.string() + ": " +
                             ec.message());
  }
  const std::string ext = format == OutputFormat::Csv ? ".csv" : ".json";
  EmittedFiles files{out_dir / ("sweep" + ext), out_dir / ("trajectory" + ext),
                     out_dir / ("boundaries" + ext), out_dir / ("derivatives" + ext)};
  if (format == OutputFormat::Csv) {
    write_file(files.sweep, sweep_csv(records));
    write_file(files.trajectory, trajectory_csv(records, markers));
    write_file(files.boundaries, boundaries_csv(boundaries));
    write_file(files.derivatives, derivatives_csv(records));
  } else {
    write_file(files.sweep, sweep_json(records));
    write_file(files.trajectory, trajectory_json(records, markers).dump(1) + "\n");
    write_file(files.boundaries, boundaries_json(boundaries).dump(1) + "\n");
    write_file(files.derivatives, derivatives_json(records).dump(1) + "\n");
  }
  return files;
}

}  // namespace xxz
