#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "gase/augment.hpp"
#include "gase/embedding.hpp"
#include "gase/error.hpp"

namespace gase {

enum class PoolingMethod { mean, max, weighted };

inline std::string_view pooling_method_name(PoolingMethod m) {
  switch (m) {
    case PoolingMethod::mean: return "mean";
    case PoolingMethod::max: return "max";
    case PoolingMethod::weighted: return "weighted";
  }
  return "?";
}

inline PoolingMethod pooling_method_from_name(std::string_view name) {
  if (name == "mean") return PoolingMethod::mean;
  if (name == "max") return PoolingMethod::max;
  if (name == "weighted") return PoolingMethod::weighted;
  raise(errc::config, "unknown pooling method '" + std::string(name) + "'");
}

// Weighted pooling gives the original `original_weight` and splits the rest
// uniformly over the k variants.
struct PoolingSpec {
  PoolingMethod method = PoolingMethod::mean;
  double original_weight = 0.5;
};

struct EmbeddingBundle {
  EmbeddingVector original;
  std::vector<EmbeddingVector> variants;
};

namespace detail {

inline void check_bundle_dims(const EmbeddingBundle& bundle) {
  for (const auto& v : bundle.variants)
    if (v.dim() != bundle.original.dim())
      raise(errc::dim_mismatch, "bundle variant dim " + std::to_string(v.dim()) +
                                    " vs original " + std::to_string(bundle.original.dim()));
}

}  // namespace detail

// Combines original + k variants into one vector. With k = 0 every method is
// the identity on the original.
inline EmbeddingVector pool(const EmbeddingBundle& bundle, const PoolingSpec& spec) {
  detail::check_bundle_dims(bundle);
  const std::size_t k = bundle.variants.size();
  if (k == 0) return bundle.original;
  if (spec.method == PoolingMethod::weighted && spec.original_weight == 1.0)
    return bundle.original;  // exact endpoint of the weight sweep

  const std::size_t dim = bundle.original.dim();
  EmbeddingVector out;
  out.provider_id = bundle.original.provider_id;
  out.degraded = bundle.original.degraded;
  for (const auto& v : bundle.variants) out.degraded = out.degraded || v.degraded;
  out.values.resize(dim);

  switch (spec.method) {
    case PoolingMethod::mean: {
      for (std::size_t i = 0; i < dim; ++i) {
        double acc = bundle.original.values[i];
        for (const auto& v : bundle.variants) acc += v.values[i];
        out.values[i] = static_cast<float>(acc / static_cast<double>(k + 1));
      }
      break;
    }
    case PoolingMethod::max: {
      for (std::size_t i = 0; i < dim; ++i) {
        float m = bundle.original.values[i];
        for (const auto& v : bundle.variants) m = std::max(m, v.values[i]);
        out.values[i] = m;
      }
      break;
    }
    case PoolingMethod::weighted: {
      const double w = spec.original_weight;
      if (w < 0.0 || w > 1.0)
        raise(errc::config, "original_weight must be in [0,1]");
      const double vw = (1.0 - w) / static_cast<double>(k);
      for (std::size_t i = 0; i < dim; ++i) {
        double acc = w * bundle.original.values[i];
        for (const auto& v : bundle.variants) acc += vw * v.values[i];
        out.values[i] = static_cast<float>(acc);
      }
      break;
    }
  }
  return out;
}

// Flattens per-strategy variants into one bundle in fixed strategy order
// (paraphrase, summarise, keywords, then the local baselines), so
// cross-augmentation runs are reproducible regardless of map iteration.
inline EmbeddingBundle assemble_cross(
    const EmbeddingVector& original,
    const std::map<Strategy, std::vector<EmbeddingVector>>& per_strategy_variants) {
  EmbeddingBundle bundle;
  bundle.original = original;
  static constexpr Strategy order[] = {Strategy::paraphrase, Strategy::summarise,
                                       Strategy::extract_keywords, Strategy::random_keywords,
                                       Strategy::stopword_removal};
  for (Strategy s : order) {
    auto it = per_strategy_variants.find(s);
    if (it == per_strategy_variants.end()) continue;
    for (const auto& v : it->second) bundle.variants.push_back(v);
  }
  detail::check_bundle_dims(bundle);
  return bundle;
}

// Unit L2 normalization; the zero vector stays zero.
inline EmbeddingVector l2_normalize(EmbeddingVector v) {
  double norm = 0.0;
  for (float x : v.values) norm += static_cast<double>(x) * x;
  norm = std::sqrt(norm);
  if (norm > 0.0)
    for (float& x : v.values) x = static_cast<float>(x / norm);
  return v;
}

}  // namespace gase
