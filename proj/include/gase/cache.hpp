#pragma once

#include <unistd.h>

#include <atomic>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "gase/digest.hpp"
#include "gase/error.hpp"
#include "gase/text.hpp"

namespace gase {

// Content address of one generative completion or one embedding. Two
// logically equal requests must collide, so the params component is expected
// in canonical form (sorted keys, shortest round-trip reals) as produced by
// GenerationParams::canonical_json or canonicalize_params_json.
struct CacheKey {
  std::string ns;      // "gen" or "embed"
  std::string digest;  // sha256 hex over all key fields
};

inline std::string canonicalize_params_json(std::string_view params_json) {
  try {
    return nlohmann::json::parse(params_json).dump();
  } catch (const nlohmann::json::parse_error& e) {
    raise(errc::parse, std::string("params json: ") + e.what());
  }
}

inline CacheKey make_cache_key(std::string_view ns, std::string_view provider_id,
                               std::string_view model, std::string_view template_id,
                               std::string_view input_text, std::string_view canonical_params) {
  std::string material;
  material.reserve(ns.size() + provider_id.size() + model.size() + template_id.size() +
                   input_text.size() + canonical_params.size() + 8);
  const auto field = [&material](std::string_view v) {
    material.append(v);
    material.push_back('\x1f');  // unit separator: fields can contain anything else
  };
  field(ns);
  field(provider_id);
  field(model);
  field(template_id.empty() ? std::string_view("-") : template_id);
  field(input_text);
  field(canonical_params);
  return CacheKey{std::string(ns), sha256_hex(material)};
}

// Binary record for cached embeddings: uint32 little-endian dimension, then
// dim float32 little-endian values.
inline std::string encode_vector_record(std::span<const float> values) {
  std::string out;
  out.reserve(4 + 4 * values.size());
  const std::uint32_t dim = static_cast<std::uint32_t>(values.size());
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<char>((dim >> (8 * b)) & 0xFF));
  for (float v : values) {
    std::uint32_t bits;
    std::memcpy(&bits, &v, 4);
    for (int b = 0; b < 4; ++b) out.push_back(static_cast<char>((bits >> (8 * b)) & 0xFF));
  }
  return out;
}

inline std::vector<float> decode_vector_record(std::string_view bytes) {
  if (bytes.size() < 4) raise(errc::storage, "vector record truncated");
  const auto u32 = [&](std::size_t off) {
    std::uint32_t v = 0;
    for (int b = 0; b < 4; ++b)
      v |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[off + b])) << (8 * b);
    return v;
  };
  const std::uint32_t dim = u32(0);
  if (bytes.size() != 4 + 4 * static_cast<std::size_t>(dim))
    raise(errc::storage, "vector record size mismatch");
  std::vector<float> values(dim);
  for (std::uint32_t i = 0; i < dim; ++i) {
    const std::uint32_t bits = u32(4 + 4 * static_cast<std::size_t>(i));
    std::memcpy(&values[i], &bits, 4);
  }
  return values;
}

struct CacheStats {
  long hits = 0;
  long misses = 0;
  long puts = 0;
};

// Filesystem-backed store: <dir>/<ns>/<2-hex-prefix>/<digest> plus a
// .meta.json sidecar. Writers stage to a temp file in the same directory and
// rename, so concurrent writers of one key never interleave and readers only
// ever see complete values.
class Cache {
 public:
  explicit Cache(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) raise(errc::storage, "cannot create cache dir " + dir_.string());
  }

  std::optional<std::string> get(const CacheKey& key) const {
    std::ifstream in(value_path(key), std::ios::binary);
    if (!in) {
      misses_.fetch_add(1, std::memory_order_relaxed);
      return std::nullopt;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    hits_.fetch_add(1, std::memory_order_relaxed);
    return buf.str();
  }

  void put(const CacheKey& key, std::string_view value,
           const nlohmann::json& meta = nlohmann::json::object()) {
    const auto path = value_path(key);
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) raise(errc::storage, "cannot create " + path.parent_path().string());
    atomic_write(path, value);
    if (!meta.empty()) {
      auto meta_path = path;
      meta_path += ".meta.json";
      atomic_write(meta_path, meta.dump());
    }
    puts_.fetch_add(1, std::memory_order_relaxed);
  }

  const std::filesystem::path& dir() const { return dir_; }

  CacheStats stats() const {
    return CacheStats{hits_.load(std::memory_order_relaxed),
                      misses_.load(std::memory_order_relaxed),
                      puts_.load(std::memory_order_relaxed)};
  }

  void reset_stats() {
    hits_.store(0);
    misses_.store(0);
    puts_.store(0);
  }

 private:
  std::filesystem::path value_path(const CacheKey& key) const {
    return dir_ / key.ns / key.digest.substr(0, 2) / key.digest;
  }

  void atomic_write(const std::filesystem::path& path, std::string_view value) const {
    static std::atomic<std::uint64_t> counter{0};
    auto tmp = path;
    tmp += ".tmp." + std::to_string(::getpid()) + "." +
           std::to_string(counter.fetch_add(1, std::memory_order_relaxed));
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) raise(errc::storage, "cannot write " + tmp.string());
      out.write(value.data(), static_cast<std::streamsize>(value.size()));
      if (!out) raise(errc::storage, "short write to " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
      std::filesystem::remove(tmp, ec);
      raise(errc::storage, "rename into " + path.string() + " failed");
    }
  }

  std::filesystem::path dir_;
  mutable std::atomic<long> hits_{0};
  mutable std::atomic<long> misses_{0};
  mutable std::atomic<long> puts_{0};
};

}  // namespace gase
