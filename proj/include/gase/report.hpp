#pragma once

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "gase/error.hpp"

namespace gase {

enum class ReportFormat { table, csv, json };

inline ReportFormat report_format_from_name(std::string_view name) {
  if (name == "table") return ReportFormat::table;
  if (name == "csv") return ReportFormat::csv;
  if (name == "json") return ReportFormat::json;
  raise(errc::config, "unknown report format '" + std::string(name) + "'");
}

// Two-decimal fixed formatting, used for every percentage the reports print.
inline std::string fmt2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

inline std::string fmt1(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.1f", v);
  return buf;
}

struct DatasetScore {
  std::string name;
  double score = 0.0;   // percent
  std::string status = "ok";  // "ok" or "failed: <reason>"
  long degraded = 0;    // degraded records encountered for this dataset

  bool ok() const { return status == "ok"; }
};

// Wall-clock side facts about a run. Deliberately kept out of the rendered
// report so that re-runs of the same config produce byte-identical bytes;
// the CLI prints these to stderr instead.
struct RunStats {
  long gen_requests = 0;
  long gen_cache_hits = 0;
  long embed_cache_hits = 0;
  double wall_seconds = 0.0;
  std::string started_at;
  std::string finished_at;
};

struct ScoreReport {
  std::string task;  // sts | pc | ir
  std::string metric;  // spearman | average_precision | ndcg@10
  std::string config_digest;
  std::uint64_t seed = 0;
  int k = 0;
  std::string pooling;
  std::vector<DatasetScore> datasets;
  RunStats stats;

  // Unweighted arithmetic mean over datasets that completed.
  double average() const {
    double sum = 0.0;
    int n = 0;
    for (const auto& d : datasets)
      if (d.ok()) {
        sum += d.score;
        ++n;
      }
    return n ? sum / n : 0.0;
  }
};

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

namespace detail {

inline std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

}  // namespace detail

inline nlohmann::json report_to_json(const ScoreReport& r) {
  nlohmann::json j;
  j["task"] = r.task;
  j["metric"] = r.metric;
  j["config_digest"] = r.config_digest;
  j["seed"] = r.seed;
  j["k"] = r.k;
  j["pooling"] = r.pooling;
  auto arr = nlohmann::json::array();
  for (const auto& d : r.datasets)
    arr.push_back({{"name", d.name},
                   {"score", d.ok() ? nlohmann::json(std::stod(fmt2(d.score))) : nlohmann::json()},
                   {"status", d.status},
                   {"degraded", d.degraded}});
  j["datasets"] = arr;
  j["average"] = std::stod(fmt2(r.average()));
  return j;
}

inline ScoreReport report_from_json(const nlohmann::json& j) {
  ScoreReport r;
  r.task = j.value("task", "");
  r.metric = j.value("metric", "");
  r.config_digest = j.value("config_digest", "");
  r.seed = j.value("seed", std::uint64_t{0});
  r.k = j.value("k", 0);
  r.pooling = j.value("pooling", "");
  for (const auto& d : j.value("datasets", nlohmann::json::array())) {
    DatasetScore s;
    s.name = d.value("name", "");
    s.status = d.value("status", "ok");
    if (d.contains("score") && !d["score"].is_null()) s.score = d["score"].get<double>();
    s.degraded = d.value("degraded", 0L);
    r.datasets.push_back(std::move(s));
  }
  return r;
}

inline ScoreReport load_report_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) raise(errc::storage, "cannot open report " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    raise(errc::parse, path.string() + ": " + e.what());
  }
  return report_from_json(j);
}

inline std::string render_report_csv(const ScoreReport& r) {
  std::ostringstream out;
  out << "task,metric,config_digest,seed,k,pooling,dataset,score,status,degraded\n";
  for (const auto& d : r.datasets) {
    out << r.task << ',' << r.metric << ',' << r.config_digest << ',' << r.seed << ',' << r.k
        << ',' << r.pooling << ',' << d.name << ',' << (d.ok() ? fmt2(d.score) : "") << ','
        << (d.ok() ? "ok" : "failed") << ',' << d.degraded << '\n';
  }
  return out.str();
}

inline ScoreReport load_report_csv(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  if (!std::getline(in, line)) raise(errc::parse, "empty csv report");
  ScoreReport r;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
      if (i == line.size() || line[i] == ',') {
        cells.push_back(line.substr(start, i - start));
        start = i + 1;
      }
    }
    if (cells.size() != 10) raise(errc::parse, "csv report row has wrong arity");
    if (first) {
      r.task = cells[0];
      r.metric = cells[1];
      r.config_digest = cells[2];
      r.seed = std::stoull(cells[3]);
      r.k = std::stoi(cells[4]);
      r.pooling = cells[5];
      first = false;
    }
    DatasetScore d;
    d.name = cells[6];
    if (!cells[7].empty()) d.score = std::stod(cells[7]);
    d.status = cells[8] == "ok" ? "ok" : "failed";
    d.degraded = std::stol(cells[9]);
    r.datasets.push_back(std::move(d));
  }
  return r;
}

inline std::string render_report_table(const ScoreReport& r) {
  std::ostringstream out;
  out << "task: " << r.task << "  metric: " << r.metric << "  pooling: " << r.pooling
      << "  k: " << r.k << "  seed: " << r.seed << '\n';
  out << "config: " << (r.config_digest.size() > 16 ? r.config_digest.substr(0, 16) : r.config_digest)
      << '\n';
  std::size_t name_w = std::string("dataset").size();
  for (const auto& d : r.datasets) name_w = std::max(name_w, d.name.size());
  name_w += 2;
  out << detail::pad("dataset", name_w) << detail::pad("score", 10) << "status\n";
  for (const auto& d : r.datasets)
    out << detail::pad(d.name, name_w) << detail::pad(d.ok() ? fmt2(d.score) : "-", 10)
        << d.status << (d.degraded ? "  (degraded: " + std::to_string(d.degraded) + ")" : "")
        << '\n';
  out << detail::pad("Average", name_w) << fmt2(r.average()) << '\n';
  return out.str();
}

inline std::string render_report(const ScoreReport& r, ReportFormat format) {
  switch (format) {
    case ReportFormat::table: return render_report_table(r);
    case ReportFormat::csv: return render_report_csv(r);
    case ReportFormat::json: return report_to_json(r).dump(2) + "\n";
  }
  return {};
}

// Side-by-side comparison of several runs; per row the maximum is marked with
// '*' (the table-mode bolding).
inline std::string render_comparison(const std::vector<ScoreReport>& reports,
                                     const std::vector<std::string>& labels) {
  if (reports.empty()) return "dataset\n";
  std::vector<std::string> names;
  for (const auto& r : reports)
    for (const auto& d : r.datasets)
      if (std::find(names.begin(), names.end(), d.name) == names.end()) names.push_back(d.name);

  std::size_t name_w = std::string("dataset").size();
  for (const auto& n : names) name_w = std::max(name_w, n.size());
  name_w += 2;
  std::vector<std::size_t> col_w(reports.size());
  std::ostringstream out;
  out << detail::pad("dataset", name_w);
  for (std::size_t c = 0; c < reports.size(); ++c) {
    col_w[c] = std::max<std::size_t>(labels[c].size() + 2, 10);
    out << detail::pad(labels[c], col_w[c]);
  }
  out << '\n';

  const auto emit_row = [&](const std::string& row_name,
                            const std::vector<std::pair<bool, double>>& cells) {
    double best = 0.0;
    bool any = false;
    for (const auto& [present, v] : cells)
      if (present && (!any || v > best)) {
        best = v;
        any = true;
      }
    out << detail::pad(row_name, name_w);
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (!cells[c].first) {
        out << detail::pad("-", col_w[c]);
        continue;
      }
      std::string cell = fmt2(cells[c].second);
      if (any && cells[c].second == best) cell += "*";
      out << detail::pad(cell, col_w[c]);
    }
    out << '\n';
  };

  for (const auto& n : names) {
    std::vector<std::pair<bool, double>> cells;
    for (const auto& r : reports) {
      bool present = false;
      double v = 0.0;
      for (const auto& d : r.datasets)
        if (d.name == n && d.ok()) {
          present = true;
          v = d.score;
        }
      cells.emplace_back(present, v);
    }
    emit_row(n, cells);
  }
  std::vector<std::pair<bool, double>> avg_cells;
  for (const auto& r : reports) avg_cells.emplace_back(true, r.average());
  emit_row("Average", avg_cells);
  return out.str();
}

// ---------------------------------------------------------------------------
// Analysis report (word counts, Jaccard, cosine structure)
// ---------------------------------------------------------------------------

struct AnalysisKindStats {
  double word_count = 0.0;     // mean words per variant
  double jaccard = 0.0;        // mean Jaccard(original, variant)
  double cos_orig1_aug1 = 0.0;  // percent
  double cos_orig2_aug2 = 0.0;  // percent
  double cos_aug1_aug2 = 0.0;   // percent
};

struct AnalysisDataset {
  std::string name;
  std::string status = "ok";
  double original_word_count = 0.0;
  double cos_orig1_orig2 = 0.0;  // percent
  std::map<std::string, AnalysisKindStats> kinds;
};

struct AnalysisReport {
  std::string config_digest;
  std::uint64_t seed = 0;
  std::vector<AnalysisDataset> datasets;
};

inline nlohmann::json analysis_to_json(const AnalysisReport& r) {
  nlohmann::json j;
  j["config_digest"] = r.config_digest;
  j["seed"] = r.seed;
  auto arr = nlohmann::json::array();
  for (const auto& d : r.datasets) {
    nlohmann::json e{{"name", d.name},
                     {"status", d.status},
                     {"original_word_count", std::stod(fmt1(d.original_word_count))},
                     {"cos_orig1_orig2", std::stod(fmt2(d.cos_orig1_orig2))}};
    nlohmann::json kinds = nlohmann::json::object();
    for (const auto& [kind, s] : d.kinds)
      kinds[kind] = {{"word_count", std::stod(fmt1(s.word_count))},
                     {"jaccard", std::stod(fmt2(s.jaccard))},
                     {"cos_orig1_aug1", std::stod(fmt2(s.cos_orig1_aug1))},
                     {"cos_orig2_aug2", std::stod(fmt2(s.cos_orig2_aug2))},
                     {"cos_aug1_aug2", std::stod(fmt2(s.cos_aug1_aug2))}};
    e["kinds"] = kinds;
    arr.push_back(std::move(e));
  }
  j["datasets"] = arr;
  return j;
}

inline std::string render_analysis_table(const AnalysisReport& r) {
  std::ostringstream out;
  for (const auto& d : r.datasets) {
    out << "dataset: " << d.name;
    if (d.status != "ok") {
      out << "  " << d.status << '\n';
      continue;
    }
    out << "  original words: " << fmt1(d.original_word_count)
        << "  cos(orig1,orig2): " << fmt2(d.cos_orig1_orig2) << '\n';
    out << "  " << detail::pad("kind", 18) << detail::pad("words", 9) << detail::pad("jaccard", 10)
        << detail::pad("cos(o1,a1)", 12) << detail::pad("cos(o2,a2)", 12) << "cos(a1,a2)\n";
    for (const auto& [kind, s] : d.kinds)
      out << "  " << detail::pad(kind, 18) << detail::pad(fmt1(s.word_count), 9)
          << detail::pad(fmt2(s.jaccard), 10) << detail::pad(fmt2(s.cos_orig1_aug1), 12)
          << detail::pad(fmt2(s.cos_orig2_aug2), 12) << fmt2(s.cos_aug1_aug2) << '\n';
  }
  return out.str();
}

inline std::string render_analysis_csv(const AnalysisReport& r) {
  std::ostringstream out;
  out << "dataset,kind,word_count,jaccard,cos_orig1_aug1,cos_orig2_aug2,cos_aug1_aug2,"
         "original_word_count,cos_orig1_orig2\n";
  for (const auto& d : r.datasets) {
    if (d.status != "ok") continue;
    for (const auto& [kind, s] : d.kinds)
      out << d.name << ',' << kind << ',' << fmt1(s.word_count) << ',' << fmt2(s.jaccard) << ','
          << fmt2(s.cos_orig1_aug1) << ',' << fmt2(s.cos_orig2_aug2) << ','
          << fmt2(s.cos_aug1_aug2) << ',' << fmt1(d.original_word_count) << ','
          << fmt2(d.cos_orig1_orig2) << '\n';
  }
  return out.str();
}

inline std::string render_analysis(const AnalysisReport& r, ReportFormat format) {
  switch (format) {
    case ReportFormat::table: return render_analysis_table(r);
    case ReportFormat::csv: return render_analysis_csv(r);
    case ReportFormat::json: return analysis_to_json(r).dump(2) + "\n";
  }
  return {};
}

// ---------------------------------------------------------------------------
// Runtime report (timing mode)
// ---------------------------------------------------------------------------

struct RuntimeRow {
  std::string dataset;
  double mean_seconds = 0.0;
  double stddev_seconds = 0.0;  // sample stddev; 0 when repeats == 1
};

struct RuntimeReport {
  std::string config_digest;
  int repeats = 0;
  bool single_run = false;  // stddev undefined, reported as 0
  std::vector<RuntimeRow> rows;
};

inline nlohmann::json runtime_to_json(const RuntimeReport& r) {
  nlohmann::json j;
  j["config_digest"] = r.config_digest;
  j["repeats"] = r.repeats;
  j["single_run"] = r.single_run;
  auto arr = nlohmann::json::array();
  for (const auto& row : r.rows)
    arr.push_back({{"dataset", row.dataset},
                   {"mean_seconds", row.mean_seconds},
                   {"stddev_seconds", row.stddev_seconds}});
  j["rows"] = arr;
  return j;
}

inline std::string render_runtime(const RuntimeReport& r, ReportFormat format) {
  if (format == ReportFormat::json) return runtime_to_json(r).dump(2) + "\n";
  std::ostringstream out;
  if (format == ReportFormat::csv) {
    out << "dataset,mean_seconds,stddev_seconds,repeats\n";
    for (const auto& row : r.rows)
      out << row.dataset << ',' << fmt2(row.mean_seconds) << ',' << fmt2(row.stddev_seconds)
          << ',' << r.repeats << '\n';
    return out.str();
  }
  out << "repeats: " << r.repeats;
  if (r.single_run) out << "  (single run, stddev undefined)";
  out << '\n';
  std::size_t name_w = std::string("dataset").size();
  for (const auto& row : r.rows) name_w = std::max(name_w, row.dataset.size());
  name_w += 2;
  out << detail::pad("dataset", name_w) << detail::pad("mean [s]", 12) << "stddev [s]\n";
  for (const auto& row : r.rows)
    out << detail::pad(row.dataset, name_w) << detail::pad(fmt2(row.mean_seconds), 12)
        << fmt2(row.stddev_seconds) << '\n';
  return out.str();
}

}  // namespace gase
