#pragma once

// Experiment reports. The rendered text embeds the resolved configuration and
// two hashes: one of the configuration, one of everything the run produced.

#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "kdnls/harness/config.hpp"

namespace kdnls {

struct Report {
  std::string experiment;
  bool pass = false;
  std::string config_text;
  std::vector<std::pair<std::string, std::string>> metrics;
  std::vector<std::string> notes;     // logged, never fatal
  std::vector<std::string> warnings;  // fatal under --strict
  std::vector<Table> tables;
  std::map<std::string, std::string> blobs;  // file name -> bytes

  void metric(const std::string& k, double v) { metrics.emplace_back(k, format_double(v)); }
  void metric(const std::string& k, const std::string& v) { metrics.emplace_back(k, v); }
  void metric(const std::string& k, const char* v) { metrics.emplace_back(k, v); }
  void metric(const std::string& k, bool v) { metrics.emplace_back(k, v ? "true" : "false"); }
  void metric(const std::string& k, std::size_t v) { metrics.emplace_back(k, std::to_string(v)); }

  const std::string& value(const std::string& k) const {
    for (const auto& [key, v] : metrics)
      if (key == k) return v;
    throw Error("report has no metric '" + k + "'");
  }
  bool has(const std::string& k) const {
    for (const auto& m : metrics)
      if (m.first == k) return true;
    return false;
  }
  double number(const std::string& k) const {
    const std::string& v = value(k);
    double x = 0.0;
    if (std::from_chars(v.data(), v.data() + v.size(), x).ec != std::errc()) throw Error("metric '" + k + "' is not numeric");
    return x;
  }
  bool flag(const std::string& k) const { return value(k) == "true"; }
  const Table& table(const std::string& name) const {
    for (const auto& t : tables)
      if (t.name == name) return t;
    throw Error("report has no table '" + name + "'");
  }

  std::string results_text() const {
    std::string out = "pass = " + std::string(pass ? "true" : "false") + "\n[metrics]\n";
    for (const auto& [k, v] : metrics) out += k + " = " + v + "\n";
    out += "[warnings]\n";
    for (const auto& w : warnings) out += w + "\n";
    return out;
  }
  std::string content_hash() const {
    std::uint64_t h = fnv1a64(results_text());
    for (const auto& t : tables) h = fnv1a64(t.csv(), fnv1a64(t.name, h));
    for (const auto& [name, bytes] : blobs) h = fnv1a64(bytes, fnv1a64(name, h));
    return hex64(h);
  }
  std::string config_hash() const { return hex64(fnv1a64(config_text)); }

  std::string render() const {
    std::string out = "kdnls-report 1\nexperiment = " + experiment + "\nconfig_hash = " + config_hash() +
                      "\ncontent_hash = " + content_hash() + "\n" + results_text() + "[notes]\n";
    for (const auto& n : notes) out += n + "\n";
    out += "[tables]\n";
    for (const auto& t : tables) out += t.name + ".csv\n";
    for (const auto& b : blobs) out += b.first + "\n";
    out += "[config]\n" + config_text;
    return out;
  }
};

inline Report start_report(const ExperimentConfig& c) {
  Report r;
  r.experiment = to_string(c.kind);
  r.config_text = canonical_text(c);
  return r;
}

/// The [config] block of a rendered report.
inline std::string embedded_config(std::string_view rendered) {
  const std::string_view tag = "\n[config]\n";
  const auto p = rendered.find(tag);
  if (p == std::string_view::npos) throw ConfigError("report has no [config] block");
  return std::string(rendered.substr(p + tag.size()));
}

inline std::string embedded_value(std::string_view rendered, const std::string& key) {
  const std::string tag = "\n" + key + " = ";
  const auto p = rendered.find(tag);
  if (p == std::string_view::npos) throw Error("report has no '" + key + "'");
  const auto e = rendered.find('\n', p + tag.size());
  return std::string(rendered.substr(p + tag.size(), e - p - tag.size()));
}

inline void write_report(const Report& r, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_text(dir / "report.txt", r.render());
  for (const auto& t : r.tables) write_text(dir / (t.name + ".csv"), t.csv());
  for (const auto& [name, bytes] : r.blobs) write_text(dir / name, bytes);
}

}  // namespace kdnls
