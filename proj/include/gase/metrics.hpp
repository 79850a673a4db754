#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "gase/error.hpp"
#include "gase/text.hpp"

namespace gase {

// Cosine similarity dot(a,b) / (|a||b|). A zero vector has no direction; the
// result is defined as 0 and *degraded (when given) is set.
inline double cosine(std::span<const float> a, std::span<const float> b,
                     bool* degraded = nullptr) {
  if (a.size() != b.size())
    raise(errc::dim_mismatch, "cosine: dims " + std::to_string(a.size()) + " vs " +
                                  std::to_string(b.size()));
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += static_cast<double>(a[i]) * b[i];
    na += static_cast<double>(a[i]) * a[i];
    nb += static_cast<double>(b[i]) * b[i];
  }
  if (na == 0.0 || nb == 0.0) {
    if (degraded) *degraded = true;
    return 0.0;
  }
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

// Fractional (average) ranks, 1-based: ties share the mean of the ranks they
// occupy.
inline std::vector<double> fractional_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return values[i] < values[j]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double avg = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

inline double pearson(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) raise(errc::degenerate_input, "pearson: constant input");
  return sxy / std::sqrt(sxx * syy);
}

// Spearman's rank correlation with average-rank tie handling: Pearson on the
// fractional ranks of both sides.
inline double spearman(std::span<const double> sims, std::span<const double> gold) {
  if (sims.size() != gold.size())
    raise(errc::dim_mismatch, "spearman: length mismatch");
  if (sims.size() < 2) raise(errc::degenerate_input, "spearman: need at least 2 pairs");
  const auto rs = fractional_ranks(sims);
  const auto rg = fractional_ranks(gold);
  return pearson(rs, rg);
}

// Token-set Jaccard over lowercased, punctuation-stripped whitespace tokens.
// Two empty sets are identical, so both-empty yields 1.
inline double jaccard(std::string_view a, std::string_view b) {
  const auto token_set = [](std::string_view text) {
    std::unordered_set<std::string> set;
    for (auto tok : tokenize(text)) {
      std::string t = strip_punctuation(to_lower(tok));
      if (!t.empty()) set.insert(std::move(t));
    }
    return set;
  };
  const auto sa = token_set(a);
  const auto sb = token_set(b);
  if (sa.empty() && sb.empty()) return 1.0;
  std::size_t inter = 0;
  for (const auto& t : sa) inter += sb.count(t);
  const std::size_t uni = sa.size() + sb.size() - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

inline std::size_t word_count(std::string_view text) { return tokenize(text).size(); }

// Non-interpolated average precision. Items are ranked by (score desc,
// original index asc); AP is the mean of precision@rank over the positive
// items' ranks.
inline double average_precision(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size())
    raise(errc::dim_mismatch, "average_precision: length mismatch");
  std::size_t positives = 0;
  for (int l : labels) positives += (l != 0);
  if (positives == 0) raise(errc::no_positives, "average_precision: no positive labels");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    if (scores[i] != scores[j]) return scores[i] > scores[j];
    return i < j;
  });
  double sum = 0.0;
  std::size_t seen_pos = 0;
  for (std::size_t rank = 1; rank <= order.size(); ++rank) {
    if (labels[order[rank - 1]] != 0) {
      ++seen_pos;
      sum += static_cast<double>(seen_pos) / static_cast<double>(rank);
    }
  }
  return sum / static_cast<double>(positives);
}

struct ScoredDoc {
  std::string id;
  double score;
};

// Retrieval ranking, strictly ordered by (score desc, doc id asc) so the same
// scores always produce the same list.
struct RankedList {
  std::vector<ScoredDoc> docs;
};

inline RankedList make_ranked(std::vector<ScoredDoc> docs) {
  std::sort(docs.begin(), docs.end(), [](const ScoredDoc& a, const ScoredDoc& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.id < b.id;
  });
  return RankedList{std::move(docs)};
}

// NDCG@k with exponential gain: DCG = sum over ranks r<=k of
// (2^rel - 1) / log2(r + 1), normalized by the ideal DCG over the qrels.
inline double ndcg_at_k(const RankedList& ranked,
                        const std::unordered_map<std::string, double>& qrels, int k = 10) {
  bool any_relevant = false;
  for (const auto& [id, rel] : qrels)
    if (rel > 0.0) any_relevant = true;
  if (!any_relevant) raise(errc::no_relevant, "ndcg_at_k: no positive relevance in qrels");

  const auto gain = [](double rel) { return std::exp2(rel) - 1.0; };
  double dcg = 0.0;
  const std::size_t cutoff = std::min<std::size_t>(ranked.docs.size(), static_cast<std::size_t>(k));
  for (std::size_t r = 1; r <= cutoff; ++r) {
    auto it = qrels.find(ranked.docs[r - 1].id);
    if (it != qrels.end()) dcg += gain(it->second) / std::log2(static_cast<double>(r) + 1.0);
  }

  std::vector<double> rels;
  rels.reserve(qrels.size());
  for (const auto& [id, rel] : qrels) rels.push_back(rel);
  std::sort(rels.begin(), rels.end(), std::greater<double>());
  double idcg = 0.0;
  const std::size_t icutoff = std::min<std::size_t>(rels.size(), static_cast<std::size_t>(k));
  for (std::size_t r = 1; r <= icutoff; ++r)
    idcg += gain(rels[r - 1]) / std::log2(static_cast<double>(r) + 1.0);
  return idcg > 0.0 ? dcg / idcg : 0.0;
}

}  // namespace gase
