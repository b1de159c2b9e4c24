#include "dunkl/io.hpp"

#include <cstdio>
#include <fstream>

namespace dunkl {

using nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void write_csv(const std::string& path, const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path);
  if (!out) throw Error("io: cannot open " + path);
  for (std::size_t i = 0; i < columns.size(); ++i)
    out << columns[i] << (i + 1 < columns.size() ? "," : "\n");
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out << format_double(row[i]) << (i + 1 < row.size() ? "," : "\n");
  }
}

void write_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error("io: cannot open " + path);
  out << j.dump(2) << "\n";
}

json sweep_to_json(const SweepReport& rep) {
  json j;
  j["check"] = rep.check_id;
  j["pass"] = rep.pass;
  j["samples"] = rep.samples;
  j["skipped"] = rep.skipped;
  j["violations"] = rep.violations;
  j["sup_ratio"] = rep.sup_ratio;
  j["inf_ratio"] = rep.inf_ratio;
  if (!rep.note.empty()) j["note"] = rep.note;
  for (const auto& [k, v] : rep.snapshot) j["config"][k] = v;
  for (const auto& [k, v] : rep.labels) j["config"][k] = v;
  return j;
}

void write_sweep_csv(const std::string& path, const SweepReport& rep) {
  write_csv(path, rep.columns, rep.rows);
}

json oscillation_to_json(const OscillationReport& rep) {
  json j;
  j["sup_oscillation"] = rep.sup_oscillation;
  j["rows"] = rep.rows.size();
  j["skipped"] = rep.skipped;
  auto buckets = [](const std::vector<OscBucket>& bs) {
    json out = json::array();
    for (const OscBucket& b : bs)
      out.push_back({{"lo", b.lo}, {"hi", b.hi}, {"sup", b.sup}, {"count", b.count}});
    return out;
  };
  j["by_radius"] = buckets(rep.by_radius);
  j["by_distance"] = buckets(rep.by_distance);
  return j;
}

void write_oscillation_csv(const std::string& path, const OscillationReport& rep) {
  std::vector<std::string> cols;
  if (!rep.rows.empty()) {
    int n = static_cast<int>(rep.rows[0].ball.center.size());
    for (int i = 0; i < n; ++i) cols.push_back("center" + std::to_string(i));
    cols.insert(cols.end(), {"radius", "orbit_mode", "average", "oscillation",
                             "resolved"});
  }
  std::vector<std::vector<double>> rows;
  for (const OscRow& r : rep.rows) {
    std::vector<double> row;
    for (int i = 0; i < r.ball.center.size(); ++i) row.push_back(r.ball.center[i]);
    row.push_back(r.ball.radius);
    row.push_back(r.mode == BmoMode::orbit ? 1.0 : 0.0);
    row.push_back(r.average);
    row.push_back(r.oscillation);
    row.push_back(r.resolved ? 1.0 : 0.0);
    rows.push_back(std::move(row));
  }
  write_csv(path, cols, rows);
}

}  // namespace dunkl
