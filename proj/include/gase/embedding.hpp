#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "gase/error.hpp"
#include "gase/text.hpp"

namespace gase {

struct EmbeddingVector {
  std::vector<float> values;
  std::string provider_id;
  bool degraded = false;  // fallback vector (e.g. all tokens OOV)

  std::size_t dim() const { return values.size(); }
};

// ---------------------------------------------------------------------------
// Static word vectors (GloVe-style text format)
// ---------------------------------------------------------------------------

struct WordVectorTable {
  std::size_t dim = 0;
  std::unordered_map<std::string, std::vector<float>> entries;
  std::size_t skipped_lines = 0;  // wrong arity or unparsable values
};

// One line per token: token then dim space-separated reals. Duplicates keep
// the first occurrence; lines with the wrong arity are skipped and counted.
// The dimension is fixed by the first valid line; a disagreeing second line
// means the file itself is ambiguous and loading fails.
inline WordVectorTable load_word_vectors(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) raise(errc::storage, "cannot open word vector file " + path.string());

  WordVectorTable table;
  std::string line;
  std::size_t valid_lines = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto tokens = tokenize(line);
    if (tokens.size() < 2) {
      ++table.skipped_lines;
      continue;
    }
    std::vector<float> values;
    values.reserve(tokens.size() - 1);
    bool ok = true;
    for (std::size_t i = 1; i < tokens.size(); ++i) {
      try {
        const float v = std::stof(std::string(tokens[i]));
        if (!std::isfinite(v)) {
          ok = false;
          break;
        }
        values.push_back(v);
      } catch (const std::exception&) {
        ok = false;
        break;
      }
    }
    if (!ok) {
      ++table.skipped_lines;
      continue;
    }
    if (valid_lines == 0) {
      table.dim = values.size();
    } else if (valid_lines == 1 && values.size() != table.dim) {
      raise(errc::inconsistent_dim,
            "word vector file " + path.string() + ": first lines disagree on dimension (" +
                std::to_string(table.dim) + " vs " + std::to_string(values.size()) + ")");
    } else if (values.size() != table.dim) {
      ++table.skipped_lines;
      continue;
    }
    ++valid_lines;
    table.entries.emplace(std::string(tokens[0]), std::move(values));  // first wins
  }
  if (valid_lines == 0)
    raise(errc::empty_file, "word vector file " + path.string() + " has no valid lines");
  return table;
}

// Mean of token vectors; exact-case lookup first, then lowercase. With no
// matching token at all the zero vector is returned, flagged degraded.
inline EmbeddingVector embed_static(const WordVectorTable& table, std::string_view text,
                                    std::string_view provider_id = "static") {
  std::vector<double> acc(table.dim, 0.0);
  std::size_t found = 0;
  for (auto tok : tokenize(text)) {
    auto it = table.entries.find(std::string(tok));
    if (it == table.entries.end()) it = table.entries.find(to_lower(tok));
    if (it == table.entries.end()) continue;
    ++found;
    for (std::size_t i = 0; i < table.dim; ++i) acc[i] += it->second[i];
  }
  EmbeddingVector out;
  out.provider_id = std::string(provider_id);
  out.values.resize(table.dim, 0.0f);
  if (found == 0) {
    out.degraded = true;
    return out;
  }
  for (std::size_t i = 0; i < table.dim; ++i)
    out.values[i] = static_cast<float>(acc[i] / static_cast<double>(found));
  return out;
}

// ---------------------------------------------------------------------------
// Deterministic pseudo-embedding for tests: hash (seed, text) into dim reals
// in [-1, 1].
// ---------------------------------------------------------------------------

inline EmbeddingVector embed_hash_stub(std::string_view text, std::size_t dim,
                                       std::uint64_t seed) {
  det_rng rng(mix64(seed, fnv1a64(text)));
  EmbeddingVector out;
  out.provider_id = "hash-stub";
  out.values.reserve(dim);
  for (std::size_t i = 0; i < dim; ++i)
    out.values.push_back(static_cast<float>(2.0 * rng.unit() - 1.0));
  return out;
}

// ---------------------------------------------------------------------------
// Provider interface used by the pipeline
// ---------------------------------------------------------------------------

class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual std::string id() const = 0;
  virtual std::string model() const { return id(); }
  // One vector per input, in input order.
  virtual std::vector<EmbeddingVector> embed(const std::vector<std::string>& texts) = 0;
};

class StaticWordVectorProvider : public EmbeddingProvider {
 public:
  StaticWordVectorProvider(WordVectorTable table, std::string id)
      : table_(std::move(table)), id_(std::move(id)) {}

  std::string id() const override { return id_; }

  std::vector<EmbeddingVector> embed(const std::vector<std::string>& texts) override {
    std::vector<EmbeddingVector> out;
    out.reserve(texts.size());
    for (const auto& t : texts) out.push_back(embed_static(table_, t, id_));
    return out;
  }

 private:
  WordVectorTable table_;
  std::string id_;
};

class HashStubProvider : public EmbeddingProvider {
 public:
  HashStubProvider(std::size_t dim, std::uint64_t seed, std::string id = "hash-stub")
      : dim_(dim), seed_(seed), id_(std::move(id)) {}

  std::string id() const override { return id_; }

  // Dimension and seed change the vectors, so they are part of the cache
  // identity.
  std::string model() const override {
    return id_ + "/d" + std::to_string(dim_) + "/s" + std::to_string(seed_);
  }

  std::vector<EmbeddingVector> embed(const std::vector<std::string>& texts) override {
    std::vector<EmbeddingVector> out;
    out.reserve(texts.size());
    for (const auto& t : texts) {
      auto v = embed_hash_stub(t, dim_, seed_);
      v.provider_id = id_;
      out.push_back(std::move(v));
    }
    return out;
  }

 private:
  std::size_t dim_;
  std::uint64_t seed_;
  std::string id_;
};

}  // namespace gase
