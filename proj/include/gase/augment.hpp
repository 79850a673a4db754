#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "gase/cache.hpp"
#include "gase/error.hpp"
#include "gase/genclient.hpp"
#include "gase/prompts.hpp"
#include "gase/text.hpp"

namespace gase {

// The three generative transformations plus the two local baselines.
enum class Strategy {
  paraphrase,
  summarise,
  extract_keywords,
  random_keywords,
  stopword_removal,
};

inline bool is_generative(Strategy s) {
  return s == Strategy::paraphrase || s == Strategy::summarise || s == Strategy::extract_keywords;
}

inline std::string_view strategy_name(Strategy s) {
  switch (s) {
    case Strategy::paraphrase: return "paraphrase";
    case Strategy::summarise: return "summarise";
    case Strategy::extract_keywords: return "keywords";
    case Strategy::random_keywords: return "random_keywords";
    case Strategy::stopword_removal: return "stopword_removal";
  }
  return "?";
}

inline Strategy strategy_from_name(std::string_view name) {
  if (name == "paraphrase") return Strategy::paraphrase;
  if (name == "summarise" || name == "summarize") return Strategy::summarise;
  if (name == "keywords" || name == "extract_keywords") return Strategy::extract_keywords;
  if (name == "random_keywords") return Strategy::random_keywords;
  if (name == "stopword_removal") return Strategy::stopword_removal;
  raise(errc::config, "unknown strategy '" + std::string(name) + "'");
}

inline std::string_view default_template_id(Strategy s) {
  switch (s) {
    case Strategy::paraphrase: return "paraphrase";
    case Strategy::summarise: return "summarise";
    case Strategy::extract_keywords: return "keywords";
    default: return "";
  }
}

struct AugmentationStrategy {
  Strategy kind = Strategy::paraphrase;
  std::string prompt_template_id;  // empty -> default for the kind
};

struct TextUnit {
  std::string id;
  std::string text;
};

struct AugmentationRecord {
  std::string source_id;
  Strategy strategy = Strategy::paraphrase;
  std::string generator_id;
  GenerationParams params;
  std::string text;
  bool degraded = false;  // generator produced nothing; source text substituted
};

// ---------------------------------------------------------------------------
// Post-processing
// ---------------------------------------------------------------------------

struct PostprocessRules {
  bool strip_quotes = true;
  std::vector<std::string> labels = {"paraphrase", "summary", "keywords", "rephrased"};
  bool keyword_punctuation = false;  // drop ','/'.' (keyword extraction outputs)
};

inline PostprocessRules default_postprocess_rules(Strategy s) {
  PostprocessRules rules;
  rules.keyword_punctuation = (s == Strategy::extract_keywords);
  return rules;
}

namespace detail {

inline bool strip_one_quote_pair(std::string& s) {
  static constexpr std::string_view pairs[][2] = {
      {"\"", "\""}, {"'", "'"}, {"“", "”"}, {"‘", "’"}};
  for (const auto& p : pairs) {
    const auto& open = p[0];
    const auto& close = p[1];
    if (s.size() >= open.size() + close.size() && s.compare(0, open.size(), open) == 0 &&
        s.compare(s.size() - close.size(), close.size(), close) == 0) {
      s = s.substr(open.size(), s.size() - open.size() - close.size());
      return true;
    }
  }
  return false;
}

// Strips a leading label like "Keywords:" or "paraphrase -" (case-insensitive,
// colon optional, must be followed by whitespace if the colon is absent).
inline bool strip_one_label(std::string& s, const std::vector<std::string>& labels) {
  for (const auto& label : labels) {
    if (s.size() < label.size()) continue;
    if (!iequals_ascii(std::string_view(s).substr(0, label.size()), label)) continue;
    std::size_t i = label.size();
    bool had_colon = false;
    if (i < s.size() && s[i] == ':') {
      ++i;
      had_colon = true;
    }
    std::size_t ws = i;
    while (ws < s.size() && is_space(s[ws])) ++ws;
    if (!had_colon && ws == i) continue;  // plain word, not a label
    s = s.substr(ws);
    return true;
  }
  return false;
}

}  // namespace detail

inline std::string postprocess(std::string_view raw, const PostprocessRules& rules) {
  std::string s(trim(raw));
  bool changed = true;
  while (changed) {
    changed = false;
    if (rules.strip_quotes && detail::strip_one_quote_pair(s)) changed = true;
    if (detail::strip_one_label(s, rules.labels)) changed = true;
    if (changed) s = std::string(trim(s));
  }
  if (rules.keyword_punctuation) {
    for (char& c : s)
      if (c == ',' || c == '.') c = ' ';
    s = collapse_spaces(s);
  }
  return s;
}

inline std::string postprocess(std::string_view raw, Strategy strategy,
                               std::string_view generator_id = {}) {
  (void)generator_id;  // hook for per-generator rule overrides
  return postprocess(raw, default_postprocess_rules(strategy));
}

// ---------------------------------------------------------------------------
// Local (non-generative) baselines
// ---------------------------------------------------------------------------

// Selects max(3, floor(0.28 * word_count)) distinct words uniformly at random
// (all of them when fewer than 3), preserving original order. Punctuation is
// removed before extraction.
inline std::string random_keywords(std::string_view text, std::uint64_t rng_seed) {
  const std::string cleaned = strip_punctuation(text);
  const auto words = tokenize(cleaned);
  if (words.empty()) raise(errc::empty_input, "random_keywords: no words after punctuation removal");

  const std::size_t total = words.size();
  // floor(0.28 * total), computed exactly in integers.
  std::size_t n = std::max<std::size_t>(3, (28 * total) / 100);
  if (total < 3) n = total;
  n = std::min(n, total);

  // Partial Fisher-Yates over positions, then re-sort to keep input order.
  std::vector<std::size_t> positions(total);
  for (std::size_t i = 0; i < total; ++i) positions[i] = i;
  det_rng rng(rng_seed);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = i + rng.bounded(total - i);
    std::swap(positions[i], positions[j]);
  }
  positions.resize(n);
  std::sort(positions.begin(), positions.end());

  std::vector<std::string_view> selected;
  selected.reserve(n);
  for (std::size_t p : positions) selected.push_back(words[p]);
  return join(selected);
}

struct StopwordResult {
  std::string text;
  bool degraded = false;  // everything was a stopword; original returned
};

// Drops tokens whose lowercased, punctuation-stripped form is in the list;
// survivors keep their original form and order.
inline StopwordResult remove_stopwords(std::string_view text,
                                       const std::set<std::string>& stopwords) {
  if (stopwords.empty()) raise(errc::empty_input, "remove_stopwords: empty stopword list");
  std::vector<std::string_view> kept;
  const auto tokens = tokenize(text);
  for (auto tok : tokens) {
    const std::string norm = strip_punctuation(to_lower(tok));
    if (!stopwords.count(norm)) kept.push_back(tok);
  }
  if (kept.empty() && !tokens.empty()) return StopwordResult{std::string(text), true};
  return StopwordResult{join(kept), false};
}

// Standard English stopword list (the common 179-word NLP list).
inline const std::set<std::string>& default_stopwords() {
  static const std::set<std::string> words = {
      "i", "me", "my", "myself", "we", "our", "ours", "ourselves", "you", "you're", "you've",
      "you'll", "you'd", "your", "yours", "yourself", "yourselves", "he", "him", "his", "himself",
      "she", "she's", "her", "hers", "herself", "it", "it's", "its", "itself", "they", "them",
      "their", "theirs", "themselves", "what", "which", "who", "whom", "this", "that", "that'll",
      "these", "those", "am", "is", "are", "was", "were", "be", "been", "being", "have", "has",
      "had", "having", "do", "does", "did", "doing", "a", "an", "the", "and", "but", "if", "or",
      "because", "as", "until", "while", "of", "at", "by", "for", "with", "about", "against",
      "between", "into", "through", "during", "before", "after", "above", "below", "to", "from",
      "up", "down", "in", "out", "on", "off", "over", "under", "again", "further", "then", "once",
      "here", "there", "when", "where", "why", "how", "all", "any", "both", "each", "few", "more",
      "most", "other", "some", "such", "no", "nor", "not", "only", "own", "same", "so", "than",
      "too", "very", "s", "t", "can", "will", "just", "don", "don't", "should", "should've",
      "now", "d", "ll", "m", "o", "re", "ve", "y", "ain", "aren", "aren't", "couldn", "couldn't",
      "didn", "didn't", "doesn", "doesn't", "hadn", "hadn't", "hasn", "hasn't", "haven",
      "haven't", "isn", "isn't", "ma", "mightn", "mightn't", "mustn", "mustn't", "needn",
      "needn't", "shan", "shan't", "shouldn", "shouldn't", "wasn", "wasn't", "weren", "weren't",
      "won", "won't", "wouldn", "wouldn't"};
  return words;
}

inline std::set<std::string> load_stopwords(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) raise(errc::storage, "cannot open stopword file " + path.string());
  std::set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    const auto t = trim(line);
    if (!t.empty()) words.insert(to_lower(t));
  }
  if (words.empty()) raise(errc::empty_file, "stopword file " + path.string() + " is empty");
  return words;
}

// ---------------------------------------------------------------------------
// augment(): one input, one strategy, one record
// ---------------------------------------------------------------------------

struct AugmentOptions {
  const std::vector<PromptTemplate>* templates = nullptr;  // nullptr -> defaults
  GenerationParams params;
  std::uint64_t seed = 1337;  // random_keywords; mixed with the input text hash
  const std::set<std::string>* stopwords = nullptr;        // nullptr -> defaults
  Cache* cache = nullptr;
  bool bypass_cache_reads = false;
  bool bypass_cache_writes = false;
};

inline AugmentationRecord augment(const TextUnit& input, const AugmentationStrategy& strategy,
                                  GenerativeClient* client, const AugmentOptions& opts = {}) {
  if (trim(input.text).empty()) raise(errc::empty_input, "augment: empty source text");
  if (is_generative(strategy.kind) != (client != nullptr))
    raise(errc::config, std::string("augment: strategy '") +
                            std::string(strategy_name(strategy.kind)) +
                            (client ? "' does not take a client" : "' requires a client"));

  AugmentationRecord record;
  record.source_id = input.id;
  record.strategy = strategy.kind;
  record.params = opts.params;

  std::string produced;
  if (is_generative(strategy.kind)) {
    record.generator_id = client->id();
    const auto& templates = opts.templates ? *opts.templates : default_templates();
    const std::string_view tid = strategy.prompt_template_id.empty()
                                     ? default_template_id(strategy.kind)
                                     : std::string_view(strategy.prompt_template_id);
    const PromptTemplate* tmpl = find_template(templates, tid);
    if (!tmpl) raise(errc::unknown_template, "no template '" + std::string(tid) + "'");
    const std::string prompt = render_prompt(*tmpl, input.text);

    CacheKey key;
    if (opts.cache)
      key = make_cache_key("gen", client->id(), client->model(), tmpl->id, input.text,
                           opts.params.canonical_json());
    std::optional<std::string> cached;
    if (opts.cache && !opts.bypass_cache_reads) cached = opts.cache->get(key);
    if (cached) {
      produced = *cached;
    } else {
      produced = client->complete(prompt, opts.params);
      if (opts.cache && !opts.bypass_cache_writes)
        opts.cache->put(key, produced,
                        {{"provider", client->id()},
                         {"model", client->model()},
                         {"template", tmpl->id}});
    }
    produced = postprocess(produced, strategy.kind, record.generator_id);
  } else {
    record.generator_id = "local";
    if (strategy.kind == Strategy::random_keywords) {
      produced = random_keywords(input.text, mix64(opts.seed, fnv1a64(input.text)));
    } else {
      auto res = remove_stopwords(input.text, opts.stopwords ? *opts.stopwords : default_stopwords());
      produced = std::move(res.text);
      record.degraded = res.degraded;
    }
  }

  if (trim(produced).empty()) {
    record.text = input.text;  // keep pooling arity stable
    record.degraded = true;
  } else {
    record.text = std::move(produced);
  }
  return record;
}

}  // namespace gase
