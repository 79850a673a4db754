#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <thread>
#include <unordered_set>

#include "gase/embed_remote.hpp"
#include "gase/embedding.hpp"
#include "gase/metrics.hpp"

using namespace gase;

namespace {

std::filesystem::path write_file(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
  return path;
}

}  // namespace

TEST_CASE("load_word_vectors parses the text format") {
  const auto path = write_file("gase_wv1.txt", "a 1 0\nb 0 1\n");
  const auto table = load_word_vectors(path);
  CHECK(table.dim == 2);
  CHECK(table.entries.size() == 2);
  CHECK(table.entries.at("a") == std::vector<float>{1.0f, 0.0f});
  CHECK(table.skipped_lines == 0);
}

TEST_CASE("duplicate tokens keep the first occurrence") {
  const auto path = write_file("gase_wv2.txt", "a 1 0\na 9 9\nb 0 1\n");
  const auto table = load_word_vectors(path);
  CHECK(table.entries.at("a") == std::vector<float>{1.0f, 0.0f});
}

TEST_CASE("wrong-arity lines are skipped and counted") {
  const auto path = write_file("gase_wv3.txt", "a 1 0\nb 0 1\nc 0 1 2\n");
  const auto table = load_word_vectors(path);
  CHECK(table.dim == 2);
  CHECK(table.entries.count("c") == 0);
  CHECK(table.skipped_lines == 1);
}

TEST_CASE("word vector file errors") {
  const auto code_is = [](errc c) {
    return Catch::Matchers::Predicate<error>([c](const error& e) { return e.code() == c; });
  };
  CHECK_THROWS_MATCHES(load_word_vectors(write_file("gase_wv4.txt", "")), error,
                       code_is(errc::empty_file));
  CHECK_THROWS_MATCHES(load_word_vectors(write_file("gase_wv5.txt", "a 1 0\nb 0 1 2\n")), error,
                       code_is(errc::inconsistent_dim));
  CHECK_THROWS_MATCHES(load_word_vectors("/nonexistent/gase_wv.txt"), error,
                       code_is(errc::storage));
}

TEST_CASE("embed_static averages token vectors") {
  WordVectorTable table;
  table.dim = 2;
  table.entries = {{"a", {1.0f, 0.0f}}, {"b", {0.0f, 1.0f}}};
  CHECK(embed_static(table, "a b").values == std::vector<float>{0.5f, 0.5f});
  CHECK(embed_static(table, "a").values == std::vector<float>{1.0f, 0.0f});
}

TEST_CASE("embed_static falls back to lowercase then zero vector") {
  WordVectorTable table;
  table.dim = 2;
  table.entries = {{"cat", {1.0f, 0.0f}}, {"Dog", {0.0f, 1.0f}}};
  CHECK(embed_static(table, "CAT").values == std::vector<float>{1.0f, 0.0f});
  const auto oov = embed_static(table, "zzz");
  CHECK(oov.values == std::vector<float>{0.0f, 0.0f});
  CHECK(oov.degraded);
  // unknown-case form that only matches exactly
  CHECK(embed_static(table, "Dog").values == std::vector<float>{0.0f, 1.0f});
}

TEST_CASE("embed_static depends only on the token multiset") {
  WordVectorTable table;
  table.dim = 3;
  table.entries = {{"x", {1, 2, 3}}, {"y", {-1, 0, 1}}, {"z", {0.5, 0.5, 0.5}}};
  const auto a = embed_static(table, "x y z y");
  const auto b = embed_static(table, "y z y x");
  CHECK(a.values == b.values);
}

TEST_CASE("hash stub embeddings are deterministic with the right shape") {
  const auto a = embed_hash_stub("some text", 8, 3);
  const auto b = embed_hash_stub("some text", 8, 3);
  CHECK(a.values == b.values);
  CHECK(a.dim() == 8);
  for (float v : a.values) {
    CHECK(v >= -1.0f);
    CHECK(v <= 1.0f);
    CHECK(std::isfinite(v));
  }
  CHECK(embed_hash_stub("some text", 8, 4).values != a.values);
}

TEST_CASE("hash stub collision spot-check over 10^4 strings") {
  std::unordered_set<std::string> seen;
  det_rng rng(8);
  int collisions = 0;
  for (int i = 0; i < 10000; ++i) {
    std::string text = "s" + std::to_string(i) + "_" + std::to_string(rng.next());
    const auto vec = embed_hash_stub(text, 16, 0);
    std::string fingerprint(reinterpret_cast<const char*>(vec.values.data()),
                            vec.values.size() * sizeof(float));
    if (!seen.insert(fingerprint).second) ++collisions;
  }
  CHECK(collisions == 0);
}

namespace {

struct FakeEmbedServer {
  httplib::Server server;
  std::thread thread;
  int port = 0;

  explicit FakeEmbedServer(
      std::function<nlohmann::json(const std::vector<std::string>&)> make_data) {
    server.Post("/v1/embeddings", [make_data](const httplib::Request& req, httplib::Response& res) {
      const auto body = nlohmann::json::parse(req.body);
      std::vector<std::string> inputs;
      for (const auto& t : body["input"]) inputs.push_back(t.get<std::string>());
      nlohmann::json out{{"data", make_data(inputs)}};
      res.set_content(out.dump(), "application/json");
    });
    port = server.bind_to_any_port("127.0.0.1");
    thread = std::thread([this] { server.listen_after_bind(); });
    server.wait_until_ready();
  }

  ~FakeEmbedServer() {
    server.stop();
    thread.join();
  }

  EmbeddingEndpoint endpoint() const {
    EmbeddingEndpoint ep;
    ep.http.base_url = "http://127.0.0.1:" + std::to_string(port);
    ep.http.path = "/v1/embeddings";
    ep.http.model = "fake-embed";
    ep.http.backoff_base_ms = 5;
    return ep;
  }
};

nlohmann::json fixed_vector_for(const std::string& text, std::size_t dim) {
  auto vec = embed_hash_stub(text, dim, 99).values;
  return nlohmann::json(vec);
}

}  // namespace

TEST_CASE("embed_remote returns one vector per input in order") {
  FakeEmbedServer fake([](const std::vector<std::string>& inputs) {
    auto data = nlohmann::json::array();
    for (const auto& t : inputs) data.push_back({{"embedding", fixed_vector_for(t, 4)}});
    return data;
  });
  const std::vector<std::string> texts{"one", "two", "three"};
  const auto vectors = embed_remote(fake.endpoint(), texts);
  REQUIRE(vectors.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(vectors[i].dim() == 4);
    CHECK(vectors[i].values == embed_hash_stub(texts[i], 4, 99).values);
  }
}

TEST_CASE("embed_remote honors explicit index fields (shuffled response)") {
  FakeEmbedServer fake([](const std::vector<std::string>& inputs) {
    auto data = nlohmann::json::array();
    for (std::size_t i = inputs.size(); i-- > 0;)
      data.push_back({{"embedding", fixed_vector_for(inputs[i], 4)}, {"index", i}});
    return data;
  });
  const std::vector<std::string> texts{"a", "b", "c"};
  const auto vectors = embed_remote(fake.endpoint(), texts);
  for (std::size_t i = 0; i < texts.size(); ++i)
    CHECK(vectors[i].values == embed_hash_stub(texts[i], 4, 99).values);
}

TEST_CASE("embed_remote rejects empty batches and mismatched dims") {
  FakeEmbedServer fake([](const std::vector<std::string>& inputs) {
    auto data = nlohmann::json::array();
    for (std::size_t i = 0; i < inputs.size(); ++i) {
      // fault injection: second vector has the wrong length
      data.push_back({{"embedding", fixed_vector_for(inputs[i], i == 1 ? 3 : 4)}});
    }
    return data;
  });
  const auto code_is = [](errc c) {
    return Catch::Matchers::Predicate<error>([c](const error& e) { return e.code() == c; });
  };
  CHECK_THROWS_MATCHES(embed_remote(fake.endpoint(), {}), error, code_is(errc::empty_batch));
  CHECK_THROWS_MATCHES(embed_remote(fake.endpoint(), {"a", "b"}), error,
                       code_is(errc::dim_mismatch));
}

TEST_CASE("remote provider splits oversized batches") {
  std::vector<std::size_t> batch_sizes;
  FakeEmbedServer fake([&](const std::vector<std::string>& inputs) {
    batch_sizes.push_back(inputs.size());
    auto data = nlohmann::json::array();
    for (const auto& t : inputs) data.push_back({{"embedding", fixed_vector_for(t, 4)}});
    return data;
  });
  auto ep = fake.endpoint();
  ep.batch_limit = 2;
  RemoteEmbeddingProvider provider(ep);
  std::vector<std::string> texts{"a", "b", "c", "d", "e"};
  const auto vectors = provider.embed(texts);
  REQUIRE(vectors.size() == 5);
  CHECK(batch_sizes == std::vector<std::size_t>{2, 2, 1});
  for (std::size_t i = 0; i < texts.size(); ++i)
    CHECK(vectors[i].values == embed_hash_stub(texts[i], 4, 99).values);
}
