#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "json.hpp"

#include "gase/error.hpp"

namespace gase {

struct STSRow {
  std::string id;
  std::string sentence1;
  std::string sentence2;
  double score = 0.0;
};

struct STSPairs {
  std::vector<STSRow> rows;
};

struct PCRow {
  std::string id;
  std::string sentence1;
  std::string sentence2;
  int label = 0;  // 0 or 1
};

struct PCPairs {
  std::vector<PCRow> rows;
};

struct IRQuery {
  std::string id;
  std::string text;
};

struct IRDoc {
  std::string id;
  std::string text;
};

struct QRel {
  std::string qid;
  std::string docid;
  double relevance = 0.0;
};

struct IRCollection {
  std::vector<IRQuery> queries;
  std::vector<IRDoc> corpus;
  std::vector<QRel> qrels;
};

namespace detail {

inline nlohmann::json parse_jsonl_line(const std::string& line, const std::string& path,
                                       std::size_t line_no) {
  try {
    auto j = nlohmann::json::parse(line);
    if (!j.is_object())
      raise(errc::parse, path + ":" + std::to_string(line_no) + ": not a JSON object");
    return j;
  } catch (const nlohmann::json::parse_error& e) {
    raise(errc::parse, path + ":" + std::to_string(line_no) + ": " + e.what());
  }
}

inline std::string require_string(const nlohmann::json& j, const char* key,
                                  const std::string& path, std::size_t line_no) {
  if (!j.contains(key) || !j[key].is_string())
    raise(errc::parse,
          path + ":" + std::to_string(line_no) + ": missing string field '" + key + "'");
  return j[key].get<std::string>();
}

inline double require_number(const nlohmann::json& j, const char* key, const std::string& path,
                             std::size_t line_no) {
  if (!j.contains(key) || !j[key].is_number())
    raise(errc::parse,
          path + ":" + std::to_string(line_no) + ": missing numeric field '" + key + "'");
  return j[key].get<double>();
}

inline std::ifstream open_or_raise(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(errc::storage, "cannot open " + path.string());
  return in;
}

}  // namespace detail

// sts.jsonl: {"id","sentence1","sentence2","score"} per line. Gold scores load
// unchanged whatever their scale; Spearman downstream is scale-free.
inline STSPairs load_sts(const std::filesystem::path& path) {
  auto in = detail::open_or_raise(path);
  STSPairs out;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto j = detail::parse_jsonl_line(line, path.string(), line_no);
    STSRow row;
    row.id = detail::require_string(j, "id", path.string(), line_no);
    row.sentence1 = detail::require_string(j, "sentence1", path.string(), line_no);
    row.sentence2 = detail::require_string(j, "sentence2", path.string(), line_no);
    row.score = detail::require_number(j, "score", path.string(), line_no);
    if (!std::isfinite(row.score))
      raise(errc::parse, path.string() + ":" + std::to_string(line_no) + ": non-finite score");
    if (!seen.insert(row.id).second)
      raise(errc::duplicate_id, path.string() + ": duplicate id '" + row.id + "'");
    out.rows.push_back(std::move(row));
  }
  return out;
}

inline PCPairs load_pc(const std::filesystem::path& path) {
  auto in = detail::open_or_raise(path);
  PCPairs out;
  std::unordered_set<std::string> seen;
  bool has_pos = false, has_neg = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto j = detail::parse_jsonl_line(line, path.string(), line_no);
    PCRow row;
    row.id = detail::require_string(j, "id", path.string(), line_no);
    row.sentence1 = detail::require_string(j, "sentence1", path.string(), line_no);
    row.sentence2 = detail::require_string(j, "sentence2", path.string(), line_no);
    const double label = detail::require_number(j, "label", path.string(), line_no);
    if (label != 0.0 && label != 1.0)
      raise(errc::parse, path.string() + ":" + std::to_string(line_no) + ": label must be 0 or 1");
    row.label = static_cast<int>(label);
    (row.label ? has_pos : has_neg) = true;
    if (!seen.insert(row.id).second)
      raise(errc::duplicate_id, path.string() + ": duplicate id '" + row.id + "'");
    out.rows.push_back(std::move(row));
  }
  if (!out.rows.empty() && (!has_pos || !has_neg))
    raise(errc::single_class, path.string() + ": only one label class present");
  return out;
}

// queries.jsonl/corpus.jsonl: {"id","text"}; qrels.tsv: qid \t docid \t relevance.
inline IRCollection load_ir(const std::filesystem::path& queries_path,
                            const std::filesystem::path& corpus_path,
                            const std::filesystem::path& qrels_path) {
  IRCollection out;
  const auto load_id_text = [](const std::filesystem::path& path, auto& rows) {
    auto in = detail::open_or_raise(path);
    std::unordered_set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      const auto j = detail::parse_jsonl_line(line, path.string(), line_no);
      typename std::remove_reference_t<decltype(rows)>::value_type row;
      row.id = detail::require_string(j, "id", path.string(), line_no);
      row.text = detail::require_string(j, "text", path.string(), line_no);
      if (!seen.insert(row.id).second)
        raise(errc::duplicate_id, path.string() + ": duplicate id '" + row.id + "'");
      rows.push_back(std::move(row));
    }
  };
  load_id_text(queries_path, out.queries);
  load_id_text(corpus_path, out.corpus);

  std::unordered_set<std::string> qids, docids;
  for (const auto& q : out.queries) qids.insert(q.id);
  for (const auto& d : out.corpus) docids.insert(d.id);

  auto in = detail::open_or_raise(qrels_path);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto t1 = line.find('\t');
    const auto t2 = t1 == std::string::npos ? std::string::npos : line.find('\t', t1 + 1);
    if (t2 == std::string::npos)
      raise(errc::parse, qrels_path.string() + ":" + std::to_string(line_no) +
                             ": expected qid\\tdocid\\trelevance");
    QRel rel;
    rel.qid = line.substr(0, t1);
    rel.docid = line.substr(t1 + 1, t2 - t1 - 1);
    try {
      rel.relevance = std::stod(line.substr(t2 + 1));
    } catch (const std::exception&) {
      raise(errc::parse, qrels_path.string() + ":" + std::to_string(line_no) +
                             ": relevance is not a number");
    }
    if (rel.relevance < 0.0)
      raise(errc::parse,
            qrels_path.string() + ":" + std::to_string(line_no) + ": negative relevance");
    if (!qids.count(rel.qid))
      raise(errc::dangling_reference,
            qrels_path.string() + ": qrel references unknown query '" + rel.qid + "'");
    if (!docids.count(rel.docid))
      raise(errc::dangling_reference,
            qrels_path.string() + ": qrel references unknown doc '" + rel.docid + "'");
    out.qrels.push_back(std::move(rel));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Serializers (canonical JSONL/TSV, round-trips with the loaders)
// ---------------------------------------------------------------------------

namespace detail {

inline std::ofstream create_or_raise(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) raise(errc::storage, "cannot create " + path.string());
  return out;
}

}  // namespace detail

inline void save_sts(const STSPairs& data, const std::filesystem::path& path) {
  auto out = detail::create_or_raise(path);
  for (const auto& r : data.rows) {
    nlohmann::json j{{"id", r.id}, {"sentence1", r.sentence1}, {"sentence2", r.sentence2},
                     {"score", r.score}};
    out << j.dump() << '\n';
  }
}

inline void save_pc(const PCPairs& data, const std::filesystem::path& path) {
  auto out = detail::create_or_raise(path);
  for (const auto& r : data.rows) {
    nlohmann::json j{{"id", r.id}, {"sentence1", r.sentence1}, {"sentence2", r.sentence2},
                     {"label", r.label}};
    out << j.dump() << '\n';
  }
}

inline void save_ir(const IRCollection& data, const std::filesystem::path& queries_path,
                    const std::filesystem::path& corpus_path,
                    const std::filesystem::path& qrels_path) {
  {
    auto out = detail::create_or_raise(queries_path);
    for (const auto& q : data.queries)
      out << nlohmann::json{{"id", q.id}, {"text", q.text}}.dump() << '\n';
  }
  {
    auto out = detail::create_or_raise(corpus_path);
    for (const auto& d : data.corpus)
      out << nlohmann::json{{"id", d.id}, {"text", d.text}}.dump() << '\n';
  }
  {
    auto out = detail::create_or_raise(qrels_path);
    for (const auto& r : data.qrels) {
      out << r.qid << '\t' << r.docid << '\t';
      if (r.relevance == static_cast<long long>(r.relevance))
        out << static_cast<long long>(r.relevance);
      else
        out << r.relevance;
      out << '\n';
    }
  }
}

}  // namespace gase
