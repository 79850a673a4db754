#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "gase/augment.hpp"
#include "gase/digest.hpp"
#include "gase/error.hpp"
#include "gase/genclient.hpp"
#include "gase/pooling.hpp"

namespace gase {

struct DatasetRef {
  std::string name;
  std::string task;  // sts | pc | ir
  std::string path;  // sts/pc
  std::string queries, corpus, qrels;  // ir
};

struct GeneratorRef {
  std::string id;
  std::string type;  // http | echo | table | identity | noise_suffix
  GeneratorEndpoint endpoint;  // http only; api key comes from the named env var
  StubConfig stub;             // stub kinds
  // Per-strategy template override, e.g. {"paraphrase": "paraphrase_reka"}.
  std::map<std::string, std::string> template_overrides;
};

struct EmbedderRef {
  std::string id;
  std::string type = "hash_stub";  // static | remote | hash_stub
  std::string path;                // static: word vector file
  HttpEndpoint endpoint;           // remote
  int batch_limit = 96;            // remote
  std::size_t dim = 64;            // hash_stub
  std::uint64_t seed = 0;          // hash_stub
};

enum class IrScope { queries_only, queries_and_corpus };

struct ExperimentConfig {
  std::uint64_t seed = 1337;
  GenerationParams params;
  std::vector<Strategy> strategies = {Strategy::paraphrase};
  std::vector<GeneratorRef> generators;
  EmbedderRef embedder;
  PoolingSpec pooling;
  bool normalize_before_pool = false;
  IrScope ir_scope = IrScope::queries_and_corpus;
  std::vector<DatasetRef> datasets;
  std::string cache_dir;
  bool no_cache = false;  // bypass cache reads; writes still happen
  std::string prompts_dir;
  std::string stopwords_path;
  int max_workers = 8;
};

// Variants pooled per input: one per (generative strategy x generator), one per
// local strategy.
inline int expected_k(const ExperimentConfig& cfg) {
  int k = 0;
  for (Strategy s : cfg.strategies)
    k += is_generative(s) ? static_cast<int>(cfg.generators.size()) : 1;
  return k;
}

namespace detail {

inline HttpEndpoint endpoint_from_json(const nlohmann::json& j, const std::string& default_path) {
  HttpEndpoint ep;
  ep.base_url = j.value("base_url", "");
  ep.path = j.value("path", default_path);
  ep.model = j.value("model", "");
  ep.api_key_env = j.value("api_key_env", "");
  ep.timeout_ms = j.value("timeout_ms", 30000);
  ep.max_retries = j.value("max_retries", 3);
  ep.backoff_base_ms = j.value("backoff_base_ms", 1000);
  ep.max_concurrency = j.value("max_concurrency", 4);
  return ep;
}

inline nlohmann::json endpoint_to_json(const HttpEndpoint& ep) {
  // api_key_env names the variable; the key value itself is never part of
  // config state and so can never be dumped.
  return {{"base_url", ep.base_url},   {"path", ep.path},
          {"model", ep.model},         {"api_key_env", ep.api_key_env},
          {"timeout_ms", ep.timeout_ms}, {"max_retries", ep.max_retries},
          {"backoff_base_ms", ep.backoff_base_ms}, {"max_concurrency", ep.max_concurrency}};
}

}  // namespace detail

inline ExperimentConfig config_from_json(const nlohmann::json& j) {
  ExperimentConfig cfg;
  cfg.seed = j.value("seed", std::uint64_t{1337});
  if (j.contains("params")) {
    const auto& p = j["params"];
    cfg.params.temperature = p.value("temperature", 0.0);
    cfg.params.top_p = p.value("top_p", 1.0);
    if (p.contains("seed") && !p["seed"].is_null())
      cfg.params.seed = p["seed"].get<std::int64_t>();
    else if (p.contains("seed"))
      cfg.params.seed.reset();
    if (p.contains("max_tokens") && !p["max_tokens"].is_null())
      cfg.params.max_tokens = p["max_tokens"].get<int>();
  }
  if (j.contains("strategies")) {
    cfg.strategies.clear();
    for (const auto& s : j["strategies"]) cfg.strategies.push_back(strategy_from_name(s.get<std::string>()));
    if (cfg.strategies.empty()) raise(errc::config, "strategies must not be empty");
  }
  if (j.contains("generators")) {
    for (const auto& g : j["generators"]) {
      GeneratorRef ref;
      ref.id = g.value("id", "");
      ref.type = g.value("type", "http");
      if (ref.type == "http") {
        ref.endpoint = detail::endpoint_from_json(g, "/v1/chat/completions");
        if (ref.id.empty()) ref.id = ref.endpoint.model;
      } else {
        ref.stub.id = ref.id;
        ref.stub.seed = g.value("stub_seed", std::uint64_t{0});
        ref.stub.delay_ms = g.value("delay_ms", 0);
        if (g.contains("table"))
          for (const auto& [k, v] : g["table"].items()) ref.stub.table[k] = v.get<std::string>();
      }
      if (g.contains("templates"))
        for (const auto& [k, v] : g["templates"].items())
          ref.template_overrides[k] = v.get<std::string>();
      cfg.generators.push_back(std::move(ref));
    }
  }
  if (j.contains("embedder")) {
    const auto& e = j["embedder"];
    cfg.embedder.id = e.value("id", "");
    cfg.embedder.type = e.value("type", "hash_stub");
    cfg.embedder.path = e.value("path", "");
    cfg.embedder.dim = e.value("dim", std::size_t{64});
    cfg.embedder.seed = e.value("seed", std::uint64_t{0});
    cfg.embedder.batch_limit = e.value("batch_limit", 96);
    if (cfg.embedder.type == "remote") cfg.embedder.endpoint = detail::endpoint_from_json(e, "/v1/embeddings");
    if (cfg.embedder.id.empty())
      cfg.embedder.id = cfg.embedder.type == "remote" ? cfg.embedder.endpoint.model : cfg.embedder.type;
  }
  if (j.contains("pooling")) {
    cfg.pooling.method = pooling_method_from_name(j["pooling"].value("method", "mean"));
    cfg.pooling.original_weight = j["pooling"].value("original_weight", 0.5);
  }
  cfg.normalize_before_pool = j.value("normalize_before_pool", false);
  const std::string scope = j.value("ir_augment_scope", "queries_and_corpus");
  if (scope == "queries_only")
    cfg.ir_scope = IrScope::queries_only;
  else if (scope == "queries_and_corpus")
    cfg.ir_scope = IrScope::queries_and_corpus;
  else
    raise(errc::config, "unknown ir_augment_scope '" + scope + "'");
  if (j.contains("datasets")) {
    for (const auto& d : j["datasets"]) {
      DatasetRef ref;
      ref.name = d.value("name", "");
      ref.task = d.value("task", "sts");
      ref.path = d.value("path", "");
      ref.queries = d.value("queries", "");
      ref.corpus = d.value("corpus", "");
      ref.qrels = d.value("qrels", "");
      if (ref.name.empty()) raise(errc::config, "dataset entry lacks a name");
      if (ref.task != "sts" && ref.task != "pc" && ref.task != "ir")
        raise(errc::config, "dataset '" + ref.name + "': unknown task '" + ref.task + "'");
      cfg.datasets.push_back(std::move(ref));
    }
  }
  cfg.cache_dir = j.value("cache_dir", "");
  cfg.no_cache = j.value("no_cache", false);
  cfg.prompts_dir = j.value("prompts_dir", "");
  cfg.stopwords_path = j.value("stopwords_path", "");
  cfg.max_workers = j.value("max_workers", 8);
  return cfg;
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) raise(errc::storage, "cannot open config " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    raise(errc::parse, path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

inline nlohmann::json config_to_json(const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["seed"] = cfg.seed;
  j["params"] = cfg.params.to_json();
  {
    auto arr = nlohmann::json::array();
    for (Strategy s : cfg.strategies) arr.push_back(std::string(strategy_name(s)));
    j["strategies"] = arr;
  }
  {
    auto arr = nlohmann::json::array();
    for (const auto& g : cfg.generators) {
      nlohmann::json e{{"id", g.id}, {"type", g.type}};
      if (g.type == "http") e.update(detail::endpoint_to_json(g.endpoint));
      if (g.stub.seed) e["stub_seed"] = g.stub.seed;
      if (g.stub.delay_ms) e["delay_ms"] = g.stub.delay_ms;
      if (!g.stub.table.empty()) {
        nlohmann::json t = nlohmann::json::object();
        for (const auto& [k, v] : g.stub.table) t[k] = v;
        e["table"] = t;
      }
      if (!g.template_overrides.empty()) {
        nlohmann::json t = nlohmann::json::object();
        for (const auto& [k, v] : g.template_overrides) t[k] = v;
        e["templates"] = t;
      }
      arr.push_back(std::move(e));
    }
    j["generators"] = arr;
  }
  {
    nlohmann::json e{{"id", cfg.embedder.id}, {"type", cfg.embedder.type}};
    if (cfg.embedder.type == "static") e["path"] = cfg.embedder.path;
    if (cfg.embedder.type == "hash_stub") {
      e["dim"] = cfg.embedder.dim;
      e["seed"] = cfg.embedder.seed;
    }
    if (cfg.embedder.type == "remote") {
      e.update(detail::endpoint_to_json(cfg.embedder.endpoint));
      e["batch_limit"] = cfg.embedder.batch_limit;
    }
    j["embedder"] = e;
  }
  j["pooling"] = {{"method", std::string(pooling_method_name(cfg.pooling.method))},
                  {"original_weight", cfg.pooling.original_weight}};
  j["normalize_before_pool"] = cfg.normalize_before_pool;
  j["ir_augment_scope"] =
      cfg.ir_scope == IrScope::queries_only ? "queries_only" : "queries_and_corpus";
  {
    auto arr = nlohmann::json::array();
    for (const auto& d : cfg.datasets) {
      nlohmann::json e{{"name", d.name}, {"task", d.task}};
      if (!d.path.empty()) e["path"] = d.path;
      if (!d.queries.empty()) e["queries"] = d.queries;
      if (!d.corpus.empty()) e["corpus"] = d.corpus;
      if (!d.qrels.empty()) e["qrels"] = d.qrels;
      arr.push_back(std::move(e));
    }
    j["datasets"] = arr;
  }
  if (!cfg.prompts_dir.empty()) j["prompts_dir"] = cfg.prompts_dir;
  if (!cfg.stopwords_path.empty()) j["stopwords_path"] = cfg.stopwords_path;
  return j;
}

// Digest over the semantically relevant portion of the config: identifies a
// run for reproducibility. Cache location and worker counts do not affect
// results and are excluded.
inline std::string config_digest(const ExperimentConfig& cfg) {
  return sha256_hex(config_to_json(cfg).dump());
}

}  // namespace gase
