#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <numeric>
#include <vector>

#include "gase/metrics.hpp"
#include "gase/text.hpp"
#include "oracles.hpp"

using namespace gase;

namespace {

std::vector<float> fv(std::initializer_list<float> v) { return std::vector<float>(v); }

}  // namespace

TEST_CASE("cosine closed-form values") {
  CHECK(cosine(fv({1, 0}), fv({1, 0})) == Catch::Approx(1.0).margin(1e-15));
  CHECK(cosine(fv({1, 0}), fv({0, 1})) == Catch::Approx(0.0).margin(1e-15));
  // 1/sqrt(2), hand-computed closed form
  CHECK(std::abs(cosine(fv({1, 1}), fv({1, 0})) - 0.7071067811865475) <= 1e-12);
}

TEST_CASE("cosine zero vector degrades to 0") {
  bool degraded = false;
  CHECK(cosine(fv({0, 0}), fv({1, 0}), &degraded) == 0.0);
  CHECK(degraded);
}

TEST_CASE("cosine dim mismatch") {
  CHECK_THROWS_MATCHES(cosine(fv({1}), fv({1, 2})), error, Catch::Matchers::Predicate<error>(
      [](const error& e) { return e.code() == errc::dim_mismatch; }));
}

TEST_CASE("cosine is invariant to positive scaling") {
  det_rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<float> a, b;
    for (int i = 0; i < 8; ++i) {
      a.push_back(static_cast<float>(rng.unit() - 0.5));
      b.push_back(static_cast<float>(rng.unit() - 0.5));
    }
    const double base = cosine(a, b);
    std::vector<float> a2 = a;
    for (auto& x : a2) x *= 7.5f;
    CHECK(cosine(a2, b) == Catch::Approx(base).margin(1e-7));
  }
}

TEST_CASE("fractional ranks average ties") {
  const std::vector<double> x{1, 2, 2, 3};
  const auto r = fractional_ranks(x);
  CHECK(r == std::vector<double>{1.0, 2.5, 2.5, 4.0});
}

TEST_CASE("spearman monotone and reversed") {
  CHECK(spearman(std::vector<double>{1, 2, 3}, std::vector<double>{10, 20, 30}) ==
        Catch::Approx(1.0).margin(1e-15));
  CHECK(spearman(std::vector<double>{1, 2, 3}, std::vector<double>{30, 20, 10}) ==
        Catch::Approx(-1.0).margin(1e-15));
}

TEST_CASE("spearman tie case matches rank-then-Pearson oracle") {
  const std::vector<double> sims{1, 2, 2, 3};
  const std::vector<double> gold{1, 3, 2, 4};
  const double expect = oracle::spearman(sims, gold);
  // sqrt(0.9), worked out by hand from the average ranks
  CHECK(std::abs(expect - 0.9486832980505138) <= 1e-12);
  CHECK(std::abs(spearman(sims, gold) - expect) <= 1e-12);
}

TEST_CASE("spearman matches oracle on random instances with ties") {
  det_rng rng(1337);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng.bounded(49);
    std::vector<double> sims(n), gold(n);
    for (std::size_t i = 0; i < n; ++i) {
      // small integer grids inject plenty of ties
      sims[i] = static_cast<double>(rng.bounded(8));
      gold[i] = static_cast<double>(rng.bounded(8));
    }
    const auto constant = [](const std::vector<double>& v) {
      return std::all_of(v.begin(), v.end(), [&](double x) { return x == v[0]; });
    };
    if (constant(sims)) sims[0] += 1.0;
    if (constant(gold)) gold[0] += 1.0;
    CHECK(std::abs(spearman(sims, gold) - oracle::spearman(sims, gold)) <= 1e-12);
  }
}

TEST_CASE("spearman invariant under strictly increasing transforms") {
  det_rng rng(5);
  std::vector<double> sims(20), gold(20);
  for (std::size_t i = 0; i < sims.size(); ++i) {
    sims[i] = rng.unit() * 4.0 - 2.0;
    gold[i] = rng.unit() * 4.0 - 2.0;
  }
  const double base = spearman(sims, gold);
  std::vector<double> cubed = sims, affine = gold;
  for (auto& x : cubed) x = x * x * x;
  for (auto& x : affine) x = 2.0 * x + 1.0;
  CHECK(std::abs(spearman(cubed, gold) - base) <= 1e-12);
  CHECK(std::abs(spearman(sims, affine) - base) <= 1e-12);
}

TEST_CASE("spearman rejects degenerate input") {
  const auto is_degenerate = Catch::Matchers::Predicate<error>(
      [](const error& e) { return e.code() == errc::degenerate_input; });
  CHECK_THROWS_MATCHES(spearman(std::vector<double>{1, 1, 1}, std::vector<double>{1, 2, 3}), error,
                       is_degenerate);
  CHECK_THROWS_MATCHES(spearman(std::vector<double>{1}, std::vector<double>{2}), error,
                       is_degenerate);
}

TEST_CASE("jaccard examples") {
  CHECK(jaccard("the cat sat", "the cat sat") == 1.0);
  CHECK(jaccard("abc", "xyz") == 0.0);
  // |{the,sat}| / |{the,cat,dog,sat}| by enumeration
  CHECK(jaccard("the cat sat", "the dog sat") == 0.5);
  CHECK(jaccard("", "") == 1.0);
  CHECK(jaccard("a", "") == 0.0);
  // lowercase + punctuation-stripped tokens
  CHECK(jaccard("The cat.", "the cat") == 1.0);
}

TEST_CASE("jaccard is symmetric") {
  det_rng rng(3);
  const std::vector<std::string> words{"aa", "bb", "cc", "dd", "ee"};
  for (int trial = 0; trial < 30; ++trial) {
    std::string a, b;
    for (int i = 0; i < 4; ++i) {
      a += words[rng.bounded(words.size())] + " ";
      b += words[rng.bounded(words.size())] + " ";
    }
    CHECK(jaccard(a, b) == jaccard(b, a));
  }
}

TEST_CASE("word_count") {
  CHECK(word_count("") == 0);
  CHECK(word_count("a b  c") == 3);
  CHECK(word_count("man guitar playing music crowd") == 5);
}

TEST_CASE("average precision examples") {
  CHECK(average_precision(std::vector<double>{0.9, 0.1}, std::vector<int>{1, 0}) == 1.0);
  // single positive at rank 2 -> precision 1/2
  CHECK(average_precision(std::vector<double>{0.1, 0.9}, std::vector<int>{1, 0}) == 0.5);
  CHECK(average_precision(std::vector<double>{0.3, 0.2, 0.1}, std::vector<int>{1, 1, 1}) == 1.0);
  CHECK_THROWS_MATCHES(average_precision(std::vector<double>{0.5}, std::vector<int>{0}), error,
                       Catch::Matchers::Predicate<error>(
                           [](const error& e) { return e.code() == errc::no_positives; }));
}

TEST_CASE("average precision ties break by original index") {
  // equal scores: first item wins rank 1
  CHECK(average_precision(std::vector<double>{0.5, 0.5}, std::vector<int>{1, 0}) == 1.0);
  CHECK(average_precision(std::vector<double>{0.5, 0.5}, std::vector<int>{0, 1}) == 0.5);
}

TEST_CASE("average precision equals enumeration oracle on all orderings up to 5") {
  for (std::size_t n = 1; n <= 5; ++n) {
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    do {
      for (unsigned mask = 1; mask < (1u << n); ++mask) {
        // perm[i] = item placed at rank i+1; give it score n-i
        std::vector<double> scores(n);
        std::vector<int> labels(n);
        std::vector<int> in_rank_order(n);
        for (std::size_t i = 0; i < n; ++i) {
          scores[perm[i]] = static_cast<double>(n - i);
          labels[perm[i]] = (mask >> perm[i]) & 1u;
          in_rank_order[i] = (mask >> perm[i]) & 1u;
        }
        CHECK(average_precision(scores, labels) == oracle::average_precision(in_rank_order));
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
}

TEST_CASE("ndcg closed-form values") {
  RankedList one = make_ranked({{"d1", 0.9}, {"d2", 0.5}});
  CHECK(ndcg_at_k(one, {{"d1", 1.0}}, 10) == 1.0);
  // single relevant doc at rank 2: (1/log2(3)) / (1/log2(2))
  RankedList two = make_ranked({{"d1", 0.9}, {"d2", 0.5}});
  CHECK(std::abs(ndcg_at_k(two, {{"d2", 1.0}}, 10) - 0.6309297535714574) <= 1e-12);
}

TEST_CASE("ndcg truncation and errors") {
  std::vector<ScoredDoc> docs;
  for (int i = 0; i < 12; ++i) docs.push_back({"d" + std::to_string(i), 12.0 - i});
  CHECK(ndcg_at_k(make_ranked(docs), {{"d11", 1.0}}, 10) == 0.0);  // relevant outside top k
  CHECK_THROWS_MATCHES(ndcg_at_k(make_ranked(docs), {{"d0", 0.0}}, 10), error,
                       Catch::Matchers::Predicate<error>(
                           [](const error& e) { return e.code() == errc::no_relevant; }));
}

TEST_CASE("ranked list orders by score desc then id asc") {
  const auto ranked = make_ranked({{"b", 1.0}, {"a", 1.0}, {"c", 2.0}});
  REQUIRE(ranked.docs.size() == 3);
  CHECK(ranked.docs[0].id == "c");
  CHECK(ranked.docs[1].id == "a");
  CHECK(ranked.docs[2].id == "b");
}

TEST_CASE("ndcg equals enumeration oracle on all orderings up to 5") {
  for (std::size_t n = 1; n <= 5; ++n) {
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    do {
      for (unsigned mask = 1; mask < (1u << n); ++mask) {
        std::vector<ScoredDoc> docs;
        std::unordered_map<std::string, double> qrels;
        std::vector<double> in_rank_order(n);
        std::vector<double> all_rels;
        for (std::size_t i = 0; i < n; ++i) {
          const std::string id = "d" + std::to_string(perm[i]);
          docs.push_back({id, static_cast<double>(n - i)});
          const double rel = (mask >> perm[i]) & 1u;
          in_rank_order[i] = rel;
          qrels[id] = rel;
          all_rels.push_back(rel);
        }
        CHECK(ndcg_at_k(make_ranked(docs), qrels, 3) ==
              oracle::ndcg_at_k(in_rank_order, all_rels, 3));
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
}
