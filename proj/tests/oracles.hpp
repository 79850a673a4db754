#pragma once

// Reference implementations used only by tests. Each one recomputes its
// metric straight from the definition, independent of the library code path
// it validates.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

namespace oracle {

// Fractional ranks the slow way: rank_i = 1 + #{j : x_j < x_i}
// + 0.5 * #{j != i : x_j == x_i}.
inline std::vector<double> fractional_ranks(const std::vector<double>& x) {
  std::vector<double> ranks(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    std::size_t below = 0, equal = 0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (x[j] < x[i]) ++below;
      if (j != i && x[j] == x[i]) ++equal;
    }
    ranks[i] = 1.0 + static_cast<double>(below) + 0.5 * static_cast<double>(equal);
  }
  return ranks;
}

inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    syy += y[i] * y[i];
    sxy += x[i] * y[i];
  }
  const double cov = sxy - sx * sy / n;
  const double vx = sxx - sx * sx / n;
  const double vy = syy - sy * sy / n;
  return cov / std::sqrt(vx * vy);
}

// Rank-then-Pearson route for Spearman.
inline double spearman(const std::vector<double>& sims, const std::vector<double>& gold) {
  return pearson(fractional_ranks(sims), fractional_ranks(gold));
}

// Average precision from an explicit ranking: labels_in_rank_order[r] is the
// binary label of the item at rank r+1.
inline double average_precision(const std::vector<int>& labels_in_rank_order) {
  std::size_t positives = 0;
  for (int l : labels_in_rank_order) positives += (l != 0);
  double sum = 0.0;
  for (std::size_t r = 1; r <= labels_in_rank_order.size(); ++r) {
    if (labels_in_rank_order[r - 1] == 0) continue;
    std::size_t hits = 0;
    for (std::size_t j = 0; j < r; ++j) hits += (labels_in_rank_order[j] != 0);
    sum += static_cast<double>(hits) / static_cast<double>(r);
  }
  return sum / static_cast<double>(positives);
}

// NDCG@k from an explicit ranking: rels_in_rank_order[r] is the relevance of
// the item at rank r+1; all_rels holds every judged relevance for the ideal.
inline double ndcg_at_k(const std::vector<double>& rels_in_rank_order,
                        std::vector<double> all_rels, int k) {
  const auto dcg = [k](const std::vector<double>& rels) {
    double sum = 0.0;
    for (std::size_t r = 1; r <= rels.size() && r <= static_cast<std::size_t>(k); ++r)
      sum += (std::exp2(rels[r - 1]) - 1.0) / std::log2(static_cast<double>(r) + 1.0);
    return sum;
  };
  std::sort(all_rels.begin(), all_rels.end(), std::greater<double>());
  const double ideal = dcg(all_rels);
  return ideal > 0.0 ? dcg(rels_in_rank_order) / ideal : 0.0;
}

}  // namespace oracle
