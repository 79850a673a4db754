#pragma once

#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "gase/augment.hpp"
#include "gase/cache.hpp"
#include "gase/config.hpp"
#include "gase/datasets.hpp"
#include "gase/embed_remote.hpp"
#include "gase/embedding.hpp"
#include "gase/genclient.hpp"
#include "gase/metrics.hpp"
#include "gase/pooling.hpp"
#include "gase/report.hpp"

namespace gase {

namespace detail {

// Index-sharded worker loop. Results are written by index, so reports cannot
// depend on completion order.
template <typename Fn>
void parallel_for(std::size_t n, int workers, Fn&& fn) {
  if (workers <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mu;
  const int count = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(workers), n));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(count));
  for (int w = 0; w < count; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mu);
          if (!first_error) first_error = std::current_exception();
          next.store(n, std::memory_order_relaxed);
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

inline std::string iso_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::tm tm_utc{};
  gmtime_r(&t, &tm_utc);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

}  // namespace detail

// One variant slot per input text: a strategy plus the generator that serves
// it (-1 for the local strategies).
struct VariantSlot {
  Strategy strategy;
  int generator = -1;
};

class Runner {
 public:
  explicit Runner(ExperimentConfig cfg) : cfg_(std::move(cfg)) {
    templates_ = default_templates();
    if (!cfg_.prompts_dir.empty()) {
      for (auto& t : load_template_dir(cfg_.prompts_dir)) {
        bool replaced = false;
        for (auto& existing : templates_)
          if (existing.id == t.id) {
            existing = t;
            replaced = true;
          }
        if (!replaced) templates_.push_back(std::move(t));
      }
    }
    stopwords_ =
        cfg_.stopwords_path.empty() ? default_stopwords() : load_stopwords(cfg_.stopwords_path);
    if (!cfg_.cache_dir.empty()) cache_ = std::make_unique<Cache>(cfg_.cache_dir);
    for (const auto& ref : cfg_.generators)
      clients_.push_back(std::make_shared<CountingClient>(make_client(ref)));
    embedder_ = make_embedder(cfg_.embedder);
  }

  const ExperimentConfig& config() const { return cfg_; }
  Cache* cache() { return cache_.get(); }
  long generative_requests() const {
    long n = 0;
    for (const auto& c : clients_) n += c->calls();
    return n;
  }

  // Test/extension hooks: swap in a custom client or provider.
  void set_generator_client(std::size_t index, std::shared_ptr<GenerativeClient> client) {
    clients_.at(index) = std::make_shared<CountingClient>(std::move(client));
  }
  void set_embedding_provider(std::shared_ptr<EmbeddingProvider> provider) {
    embedder_ = std::move(provider);
  }

  ScoreReport run_sts() { return run_task("sts"); }
  ScoreReport run_pc() { return run_task("pc"); }
  ScoreReport run_ir() { return run_task("ir"); }

  // Mean word counts, Jaccard(original, variant), and the cosine structure
  // between original pairs and their variants, per augmentation kind.
  AnalysisReport analyze() {
    AnalysisReport report;
    report.config_digest = config_digest(cfg_);
    report.seed = cfg_.seed;
    for (const auto& ref : cfg_.datasets) {
      if (ref.task != "sts" && ref.task != "pc") continue;
      AnalysisDataset entry;
      entry.name = ref.name;
      try {
        std::vector<std::pair<std::string, std::string>> pairs;
        if (ref.task == "sts") {
          for (const auto& r : load_sts(ref.path).rows) pairs.emplace_back(r.sentence1, r.sentence2);
        } else {
          for (const auto& r : load_pc(ref.path).rows) pairs.emplace_back(r.sentence1, r.sentence2);
        }
        analyze_pairs(pairs, entry);
      } catch (const std::exception& e) {
        entry.status = std::string("failed: ") + e.what();
      }
      report.datasets.push_back(std::move(entry));
    }
    return report;
  }

  // Wall-clock per full dataset pass (datasets already loaded), mean and
  // sample standard deviation over `repeats` runs. Generative caching is
  // disabled while timing so every repeat pays the real generation cost.
  RuntimeReport time_run(int repeats) {
    if (repeats < 1) raise(errc::config, "time_run: repeats must be >= 1");
    RuntimeReport report;
    report.config_digest = config_digest(cfg_);
    report.repeats = repeats;
    report.single_run = repeats == 1;
    for (const auto& ref : cfg_.datasets) {
      // Load outside the clock; the measurement covers augment+embed+score.
      std::vector<double> seconds;
      seconds.reserve(static_cast<std::size_t>(repeats));
      if (ref.task == "sts") {
        const auto data = load_sts(ref.path);
        for (int r = 0; r < repeats; ++r) seconds.push_back(timed([&] { score_sts(ref, data, true); }));
      } else if (ref.task == "pc") {
        const auto data = load_pc(ref.path);
        for (int r = 0; r < repeats; ++r) seconds.push_back(timed([&] { score_pc(ref, data, true); }));
      } else {
        const auto data = load_ir(ref.queries, ref.corpus, ref.qrels);
        for (int r = 0; r < repeats; ++r) seconds.push_back(timed([&] { score_ir(ref, data, true); }));
      }
      RuntimeRow row;
      row.dataset = ref.name;
      double mean = 0.0;
      for (double s : seconds) mean += s;
      mean /= static_cast<double>(seconds.size());
      row.mean_seconds = mean;
      if (seconds.size() > 1) {
        double ss = 0.0;
        for (double s : seconds) ss += (s - mean) * (s - mean);
        row.stddev_seconds = std::sqrt(ss / static_cast<double>(seconds.size() - 1));
      }
      report.rows.push_back(std::move(row));
    }
    return report;
  }

  // Augments one text against every variant slot of the configured grid.
  std::vector<AugmentationRecord> augment_text(const std::string& text, bool timing_mode = false) {
    const auto slots = variant_plan();
    std::vector<AugmentationRecord> records(slots.size());
    const TextUnit unit{"", text};
    for (std::size_t s = 0; s < slots.size(); ++s)
      records[s] = augment_slot(unit, slots[s], timing_mode);
    return records;
  }

  // The variant grid: one slot per (generative strategy x generator), one per
  // local strategy, in the fixed cross-augmentation order.
  std::vector<VariantSlot> variant_plan() const {
    std::vector<VariantSlot> slots;
    static constexpr Strategy order[] = {Strategy::paraphrase, Strategy::summarise,
                                         Strategy::extract_keywords, Strategy::random_keywords,
                                         Strategy::stopword_removal};
    for (Strategy s : order) {
      bool wanted = false;
      for (Strategy c : cfg_.strategies) wanted = wanted || c == s;
      if (!wanted) continue;
      if (is_generative(s)) {
        for (int g = 0; g < static_cast<int>(clients_.size()); ++g)
          slots.push_back(VariantSlot{s, g});
      } else {
        slots.push_back(VariantSlot{s, -1});
      }
    }
    return slots;
  }

 private:
  // ------------------------------------------------------------------
  // Construction helpers
  // ------------------------------------------------------------------

  std::shared_ptr<GenerativeClient> make_client(const GeneratorRef& ref) const {
    if (ref.type == "http") return std::make_shared<HttpChatClient>(ref.endpoint);
    StubConfig cfg = ref.stub;
    cfg.templates = templates_;
    if (ref.type == "echo") return make_stub(StubKind::echo, std::move(cfg));
    if (ref.type == "table") return make_stub(StubKind::table, std::move(cfg));
    if (ref.type == "identity") return make_stub(StubKind::identity, std::move(cfg));
    if (ref.type == "noise_suffix") return make_stub(StubKind::noise_suffix, std::move(cfg));
    raise(errc::config, "unknown generator type '" + ref.type + "'");
  }

  static std::shared_ptr<EmbeddingProvider> make_embedder(const EmbedderRef& ref) {
    if (ref.type == "static")
      return std::make_shared<StaticWordVectorProvider>(load_word_vectors(ref.path), ref.id);
    if (ref.type == "remote") {
      EmbeddingEndpoint ep;
      ep.http = ref.endpoint;
      ep.batch_limit = ref.batch_limit;
      return std::make_shared<RemoteEmbeddingProvider>(std::move(ep));
    }
    if (ref.type == "hash_stub")
      return std::make_shared<HashStubProvider>(ref.dim, ref.seed, ref.id);
    raise(errc::config, "unknown embedder type '" + ref.type + "'");
  }

  // ------------------------------------------------------------------
  // Augmentation stage
  // ------------------------------------------------------------------

  AugmentationRecord augment_slot(const TextUnit& unit, const VariantSlot& slot,
                                  bool timing_mode) {
    AugmentOptions opts;
    opts.templates = &templates_;
    opts.params = cfg_.params;
    opts.seed = cfg_.seed;
    opts.stopwords = &stopwords_;
    opts.cache = cache_.get();
    opts.bypass_cache_reads = cfg_.no_cache || timing_mode;
    opts.bypass_cache_writes = timing_mode;

    AugmentationStrategy strategy;
    strategy.kind = slot.strategy;
    GenerativeClient* client = nullptr;
    if (slot.generator >= 0) {
      client = clients_[static_cast<std::size_t>(slot.generator)].get();
      const auto& overrides =
          cfg_.generators[static_cast<std::size_t>(slot.generator)].template_overrides;
      auto it = overrides.find(std::string(strategy_name(slot.strategy)));
      if (it != overrides.end()) strategy.prompt_template_id = it->second;
    }
    return augment(unit, strategy, client, opts);
  }

  int fanout_workers() const {
    int limit = cfg_.max_workers;
    for (const auto& ref : cfg_.generators)
      if (ref.type == "http") limit = std::min(limit, ref.endpoint.max_concurrency);
    return std::max(1, std::min(limit, 8));
  }

  // Unique texts in first-seen order.
  static std::vector<std::string> unique_texts(const std::vector<std::string>& texts) {
    std::vector<std::string> uniques;
    std::unordered_set<std::string> seen;
    for (const auto& t : texts)
      if (seen.insert(t).second) uniques.push_back(t);
    return uniques;
  }

  // records[i][s]: variant for uniques[i], slot s.
  std::vector<std::vector<AugmentationRecord>> augment_all(
      const std::vector<std::string>& uniques, const std::vector<VariantSlot>& slots,
      bool timing_mode) {
    std::vector<std::vector<AugmentationRecord>> records(uniques.size());
    detail::parallel_for(uniques.size(), fanout_workers(), [&](std::size_t i) {
      const TextUnit unit{"", uniques[i]};
      auto& row = records[i];
      row.resize(slots.size());
      for (std::size_t s = 0; s < slots.size(); ++s) row[s] = augment_slot(unit, slots[s], timing_mode);
    });
    return records;
  }

  // ------------------------------------------------------------------
  // Embedding stage (cache-aware, batched)
  // ------------------------------------------------------------------

  std::unordered_map<std::string, EmbeddingVector> embed_unique(
      const std::vector<std::string>& texts) {
    std::unordered_map<std::string, EmbeddingVector> out;
    const auto uniques = unique_texts(texts);
    std::vector<std::string> missing;
    for (const auto& t : uniques) {
      if (cache_ && !cfg_.no_cache) {
        const auto key = embed_cache_key(t);
        if (auto bytes = cache_->get(key)) {
          EmbeddingVector vec;
          vec.values = decode_vector_record(*bytes);
          vec.provider_id = embedder_->id();
          out.emplace(t, std::move(vec));
          continue;
        }
      }
      missing.push_back(t);
    }
    if (!missing.empty()) {
      auto vectors = embedder_->embed(missing);
      if (vectors.size() != missing.size())
        raise(errc::malformed_response, "embedding provider returned wrong count");
      for (std::size_t i = 0; i < missing.size(); ++i) {
        if (cache_) cache_->put(embed_cache_key(missing[i]), encode_vector_record(vectors[i].values));
        out.emplace(missing[i], std::move(vectors[i]));
      }
    }
    return out;
  }

  CacheKey embed_cache_key(const std::string& text) const {
    return make_cache_key("embed", embedder_->id(), embedder_->model(), "-", text, "{}");
  }

  // ------------------------------------------------------------------
  // Pooling stage
  // ------------------------------------------------------------------

  struct PooledText {
    EmbeddingVector vec;
    long degraded = 0;  // degraded augmentation records + degraded embeddings
  };

  std::unordered_map<std::string, PooledText> pool_texts(const std::vector<std::string>& texts,
                                                         bool timing_mode) {
    const auto uniques = unique_texts(texts);
    const auto slots = variant_plan();
    std::unordered_map<std::string, PooledText> out;

    if (slots.empty()) {  // k = 0: no augmentation stage at all
      std::vector<std::string> to_embed = uniques;
      auto vectors = embed_unique(to_embed);
      for (const auto& t : uniques) {
        PooledText entry;
        entry.vec = vectors.at(t);
        if (cfg_.normalize_before_pool) entry.vec = l2_normalize(std::move(entry.vec));
        entry.degraded = entry.vec.degraded ? 1 : 0;
        out.emplace(t, std::move(entry));
      }
      return out;
    }

    const auto records = augment_all(uniques, slots, timing_mode);
    std::vector<std::string> to_embed = uniques;
    for (const auto& row : records)
      for (const auto& rec : row) to_embed.push_back(rec.text);
    auto vectors = embed_unique(to_embed);

    for (std::size_t i = 0; i < uniques.size(); ++i) {
      PooledText entry;
      EmbeddingVector original = vectors.at(uniques[i]);
      if (cfg_.normalize_before_pool) original = l2_normalize(std::move(original));
      std::map<Strategy, std::vector<EmbeddingVector>> per_strategy;
      for (std::size_t s = 0; s < slots.size(); ++s) {
        const auto& rec = records[i][s];
        if (rec.degraded) ++entry.degraded;
        EmbeddingVector vec = vectors.at(rec.text);
        if (cfg_.normalize_before_pool) vec = l2_normalize(std::move(vec));
        if (vec.degraded) ++entry.degraded;
        per_strategy[slots[s].strategy].push_back(std::move(vec));
      }
      const auto bundle = assemble_cross(original, per_strategy);
      entry.vec = pool(bundle, cfg_.pooling);
      out.emplace(uniques[i], std::move(entry));
    }
    return out;
  }

  // ------------------------------------------------------------------
  // Task scoring
  // ------------------------------------------------------------------

  DatasetScore score_sts(const DatasetRef& ref, const STSPairs& data, bool timing_mode) {
    DatasetScore score;
    score.name = ref.name;
    std::vector<std::string> texts;
    texts.reserve(2 * data.rows.size());
    for (const auto& r : data.rows) {
      texts.push_back(r.sentence1);
      texts.push_back(r.sentence2);
    }
    auto pooled = pool_texts(texts, timing_mode);
    std::vector<double> sims, gold;
    sims.reserve(data.rows.size());
    gold.reserve(data.rows.size());
    std::unordered_set<std::string> counted;
    for (const auto& r : data.rows) {
      const auto& a = pooled.at(r.sentence1);
      const auto& b = pooled.at(r.sentence2);
      bool zero = false;
      sims.push_back(cosine(a.vec.values, b.vec.values, &zero));
      gold.push_back(r.score);
      if (zero) ++score.degraded;
      for (const auto* side : {&r.sentence1, &r.sentence2})
        if (counted.insert(*side).second) score.degraded += pooled.at(*side).degraded;
    }
    score.score = 100.0 * spearman(sims, gold);
    return score;
  }

  DatasetScore score_pc(const DatasetRef& ref, const PCPairs& data, bool timing_mode) {
    DatasetScore score;
    score.name = ref.name;
    std::vector<std::string> texts;
    texts.reserve(2 * data.rows.size());
    for (const auto& r : data.rows) {
      texts.push_back(r.sentence1);
      texts.push_back(r.sentence2);
    }
    auto pooled = pool_texts(texts, timing_mode);
    std::vector<double> sims;
    std::vector<int> labels;
    std::unordered_set<std::string> counted;
    for (const auto& r : data.rows) {
      bool zero = false;
      sims.push_back(
          cosine(pooled.at(r.sentence1).vec.values, pooled.at(r.sentence2).vec.values, &zero));
      labels.push_back(r.label);
      if (zero) ++score.degraded;
      for (const auto* side : {&r.sentence1, &r.sentence2})
        if (counted.insert(*side).second) score.degraded += pooled.at(*side).degraded;
    }
    score.score = 100.0 * average_precision(sims, labels);
    return score;
  }

  DatasetScore score_ir(const DatasetRef& ref, const IRCollection& data, bool timing_mode) {
    DatasetScore score;
    score.name = ref.name;
    std::vector<std::string> query_texts;
    for (const auto& q : data.queries) query_texts.push_back(q.text);
    std::vector<std::string> doc_texts;
    for (const auto& d : data.corpus) doc_texts.push_back(d.text);

    auto pooled_queries = pool_texts(query_texts, timing_mode);

    // Corpus side: augmented only when the scope says so; queries_only keeps
    // plain corpus embeddings.
    std::unordered_map<std::string, PooledText> pooled_docs;
    if (cfg_.ir_scope == IrScope::queries_and_corpus) {
      pooled_docs = pool_texts(doc_texts, timing_mode);
    } else {
      auto vectors = embed_unique(doc_texts);
      for (const auto& t : unique_texts(doc_texts)) {
        PooledText entry;
        entry.vec = vectors.at(t);
        if (cfg_.normalize_before_pool) entry.vec = l2_normalize(std::move(entry.vec));
        entry.degraded = entry.vec.degraded ? 1 : 0;
        pooled_docs.emplace(t, std::move(entry));
      }
    }

    std::unordered_map<std::string, std::unordered_map<std::string, double>> qrels_by_query;
    for (const auto& rel : data.qrels) qrels_by_query[rel.qid][rel.docid] = rel.relevance;

    double sum = 0.0;
    int scored = 0;
    long unjudgeable = 0;
    for (const auto& q : data.queries) {
      auto it = qrels_by_query.find(q.id);
      if (it == qrels_by_query.end()) continue;  // unjudged query
      std::vector<ScoredDoc> docs;
      docs.reserve(data.corpus.size());
      const auto& qvec = pooled_queries.at(q.text).vec.values;
      for (const auto& d : data.corpus)
        docs.push_back(ScoredDoc{d.id, cosine(qvec, pooled_docs.at(d.text).vec.values)});
      try {
        sum += ndcg_at_k(make_ranked(std::move(docs)), it->second, 10);
        ++scored;
      } catch (const error& e) {
        if (e.code() != errc::no_relevant) throw;
        ++unjudgeable;  // qrels for this query carry no positive grade
      }
    }
    for (const auto& [text, entry] : pooled_queries) score.degraded += entry.degraded;
    for (const auto& [text, entry] : pooled_docs) score.degraded += entry.degraded;
    score.degraded += unjudgeable;
    if (scored == 0) raise(errc::no_relevant, "no query with positive relevance judgments");
    score.score = 100.0 * (sum / static_cast<double>(scored));
    return score;
  }

  ScoreReport run_task(const std::string& task) {
    ScoreReport report;
    report.task = task;
    report.metric = task == "sts" ? "spearman" : task == "pc" ? "average_precision" : "ndcg@10";
    report.config_digest = config_digest(cfg_);
    report.seed = cfg_.seed;
    report.k = expected_k(cfg_);
    report.pooling = std::string(pooling_method_name(cfg_.pooling.method));
    report.stats.started_at = detail::iso_timestamp();
    const auto t0 = std::chrono::steady_clock::now();
    const long gen_before = generative_requests();
    const CacheStats cache_before = cache_ ? cache_->stats() : CacheStats{};

    for (const auto& ref : cfg_.datasets) {
      if (ref.task != task) continue;
      DatasetScore entry;
      entry.name = ref.name;
      try {
        // A failing dataset is isolated; the sweep continues.
        if (task == "sts")
          entry = score_sts(ref, load_sts(ref.path), false);
        else if (task == "pc")
          entry = score_pc(ref, load_pc(ref.path), false);
        else
          entry = score_ir(ref, load_ir(ref.queries, ref.corpus, ref.qrels), false);
      } catch (const std::exception& e) {
        entry.status = std::string("failed: ") + e.what();
        entry.score = 0.0;
      }
      report.datasets.push_back(std::move(entry));
    }

    report.stats.finished_at = detail::iso_timestamp();
    report.stats.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report.stats.gen_requests = generative_requests() - gen_before;
    if (cache_) {
      const CacheStats after = cache_->stats();
      report.stats.gen_cache_hits = after.hits - cache_before.hits;
    }
    return report;
  }

  void analyze_pairs(const std::vector<std::pair<std::string, std::string>>& pairs,
                     AnalysisDataset& entry) {
    const auto slots = variant_plan();
    std::vector<std::string> texts;
    for (const auto& [a, b] : pairs) {
      texts.push_back(a);
      texts.push_back(b);
    }
    const auto uniques = unique_texts(texts);
    const auto records = augment_all(uniques, slots, false);
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < uniques.size(); ++i) index.emplace(uniques[i], i);

    std::vector<std::string> to_embed = uniques;
    for (const auto& row : records)
      for (const auto& rec : row) to_embed.push_back(rec.text);
    auto vectors = embed_unique(to_embed);

    double wc_orig = 0.0;
    for (const auto& t : texts) wc_orig += static_cast<double>(word_count(t));
    entry.original_word_count = wc_orig / static_cast<double>(texts.size());

    double cos_oo = 0.0;
    for (const auto& [a, b] : pairs)
      cos_oo += cosine(vectors.at(a).values, vectors.at(b).values);
    entry.cos_orig1_orig2 = 100.0 * cos_oo / static_cast<double>(pairs.size());

    // Aggregate over pairs and, per kind, over the generators serving it.
    std::map<std::string, AnalysisKindStats> acc;
    std::map<std::string, long> counts;
    for (std::size_t s = 0; s < slots.size(); ++s) {
      const std::string kind{strategy_name(slots[s].strategy)};
      auto& stats = acc[kind];
      auto& n = counts[kind];
      for (const auto& [a, b] : pairs) {
        const auto& rec_a = records[index.at(a)][s];
        const auto& rec_b = records[index.at(b)][s];
        stats.word_count += static_cast<double>(word_count(rec_a.text)) +
                            static_cast<double>(word_count(rec_b.text));
        stats.jaccard += jaccard(a, rec_a.text) + jaccard(b, rec_b.text);
        stats.cos_orig1_aug1 += cosine(vectors.at(a).values, vectors.at(rec_a.text).values);
        stats.cos_orig2_aug2 += cosine(vectors.at(b).values, vectors.at(rec_b.text).values);
        stats.cos_aug1_aug2 += cosine(vectors.at(rec_a.text).values, vectors.at(rec_b.text).values);
        ++n;
      }
    }
    for (auto& [kind, stats] : acc) {
      const double n = static_cast<double>(counts[kind]);
      AnalysisKindStats out;
      out.word_count = stats.word_count / (2.0 * n);
      out.jaccard = stats.jaccard / (2.0 * n);
      out.cos_orig1_aug1 = 100.0 * stats.cos_orig1_aug1 / n;
      out.cos_orig2_aug2 = 100.0 * stats.cos_orig2_aug2 / n;
      out.cos_aug1_aug2 = 100.0 * stats.cos_aug1_aug2 / n;
      entry.kinds[kind] = out;
    }
  }

  template <typename Fn>
  static double timed(Fn&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }

  ExperimentConfig cfg_;
  std::vector<PromptTemplate> templates_;
  std::set<std::string> stopwords_;
  std::unique_ptr<Cache> cache_;
  std::vector<std::shared_ptr<CountingClient>> clients_;
  std::shared_ptr<EmbeddingProvider> embedder_;
};

}  // namespace gase
