#include <catch2/catch_amalgamated.hpp>

#include <atomic>
#include <cstdlib>
#include <thread>

#include "gase/config.hpp"
#include "gase/genclient.hpp"
#include "gase/http.hpp"

using namespace gase;

namespace {

// Minimal scripted chat server for exercising the retry policy.
struct FakeServer {
  httplib::Server server;
  std::thread thread;
  int port = 0;
  std::atomic<int> hits{0};

  explicit FakeServer(std::function<void(int, const httplib::Request&, httplib::Response&)> handler) {
    server.Post("/v1/chat/completions", [this, handler](const httplib::Request& req,
                                                        httplib::Response& res) {
      handler(hits.fetch_add(1) + 1, req, res);
    });
    port = server.bind_to_any_port("127.0.0.1");
    thread = std::thread([this] { server.listen_after_bind(); });
    server.wait_until_ready();
  }

  ~FakeServer() {
    server.stop();
    thread.join();
  }

  GeneratorEndpoint endpoint() const {
    GeneratorEndpoint ep;
    ep.base_url = "http://127.0.0.1:" + std::to_string(port);
    ep.path = "/v1/chat/completions";
    ep.model = "fake-model";
    ep.max_retries = 3;
    ep.backoff_base_ms = 5;  // keep tests fast
    return ep;
  }
};

void reply_ok(httplib::Response& res, const std::string& content) {
  nlohmann::json body{{"choices", {{{"message", {{"role", "assistant"}, {"content", content}}}}}}};
  res.set_content(body.dump(), "application/json");
}

}  // namespace

TEST_CASE("generation params default to greedy decoding with seed 1337") {
  GenerationParams p;
  CHECK(p.temperature == 0.0);
  CHECK(p.top_p == 1.0);
  REQUIRE(p.seed.has_value());
  CHECK(*p.seed == 1337);
  CHECK_FALSE(p.max_tokens.has_value());
}

TEST_CASE("request payload carries params bit-exact") {
  GenerationParams p;
  p.temperature = 0.7312986;
  p.top_p = 0.3300000000000001;
  p.seed = 99;
  p.max_tokens = 17;
  GeneratorEndpoint ep;
  ep.model = "m1";
  const auto body = build_chat_request(ep, "hello", p);
  const auto round = nlohmann::json::parse(body.dump());
  CHECK(round["temperature"].get<double>() == 0.7312986);
  CHECK(round["top_p"].get<double>() == 0.3300000000000001);
  CHECK(round["seed"].get<std::int64_t>() == 99);
  CHECK(round["max_tokens"].get<int>() == 17);
  CHECK(round["model"] == "m1");
  REQUIRE(round["messages"].size() == 1);
  CHECK(round["messages"][0]["role"] == "user");
  CHECK(round["messages"][0]["content"] == "hello");
}

TEST_CASE("seed is omitted when unset") {
  GenerationParams p;
  p.seed.reset();
  GeneratorEndpoint ep;
  const auto body = build_chat_request(ep, "x", p);
  CHECK_FALSE(body.contains("seed"));
}

TEST_CASE("canonical params json is field-order independent") {
  GenerationParams p;
  const std::string canon = p.canonical_json();
  // same fields, shuffled order, re-canonicalized
  CHECK(canonicalize_params_json(R"({"top_p":1.0,"seed":1337,"temperature":0.0})") == canon);
}

TEST_CASE("parse_chat_response rejects malformed bodies") {
  const auto malformed = Catch::Matchers::Predicate<error>(
      [](const error& e) { return e.code() == errc::malformed_response; });
  CHECK_THROWS_MATCHES(parse_chat_response(nlohmann::json::object()), error, malformed);
  CHECK_THROWS_MATCHES(parse_chat_response(nlohmann::json{{"choices", nlohmann::json::array()}}),
                       error, malformed);
  nlohmann::json ok{{"choices", {{{"message", {{"content", "hi"}}}}}}};
  CHECK(parse_chat_response(ok) == "hi");
}

TEST_CASE("echo and table stubs") {
  auto echo = make_stub(StubKind::echo);
  CHECK(echo->complete("abc", {}) == "abc");

  StubConfig cfg;
  cfg.table["p1"] = "v1";
  auto table = make_stub(StubKind::table, cfg);
  CHECK(table->complete("p1", {}) == "v1");
  CHECK_THROWS_MATCHES(table->complete("missing", {}), error,
                       Catch::Matchers::Predicate<error>(
                           [](const error& e) { return e.code() == errc::unknown_key; }));
}

TEST_CASE("identity stub extracts the payload from known templates") {
  auto identity = make_stub(StubKind::identity);
  const auto* tmpl = find_template(default_templates(), "paraphrase");
  CHECK(identity->complete(render_prompt(*tmpl, "cats purr"), {}) == "cats purr");
  CHECK_THROWS_MATCHES(identity->complete("no such template", {}), error,
                       Catch::Matchers::Predicate<error>(
                           [](const error& e) { return e.code() == errc::unknown_template; }));
}

TEST_CASE("noise suffix stub is deterministic per seed") {
  StubConfig cfg;
  cfg.seed = 7;
  auto noise = make_stub(StubKind::noise_suffix, cfg);
  const auto* tmpl = find_template(default_templates(), "paraphrase");
  const auto prompt = render_prompt(*tmpl, "cats purr");
  CHECK(noise->complete(prompt, {}) == "cats purr <tok7>");
  CHECK(noise->complete(prompt, {}) == noise->complete(prompt, {}));
}

TEST_CASE("complete retries on 5xx then succeeds") {
  FakeServer fake([](int hit, const httplib::Request&, httplib::Response& res) {
    if (hit <= 2) {
      res.status = 500;
      return;
    }
    reply_ok(res, "ok");
  });
  CHECK(complete(fake.endpoint(), "hello", {}) == "ok");
  CHECK(fake.hits.load() == 3);
}

TEST_CASE("auth failures never retry") {
  FakeServer fake([](int, const httplib::Request&, httplib::Response& res) { res.status = 401; });
  CHECK_THROWS_MATCHES(complete(fake.endpoint(), "hello", {}), error,
                       Catch::Matchers::Predicate<error>(
                           [](const error& e) { return e.code() == errc::auth; }));
  CHECK(fake.hits.load() == 1);
}

TEST_CASE("429 retries then surfaces rate_limited") {
  FakeServer fake([](int, const httplib::Request&, httplib::Response& res) { res.status = 429; });
  auto ep = fake.endpoint();
  ep.max_retries = 2;
  CHECK_THROWS_MATCHES(complete(ep, "hello", {}), error,
                       Catch::Matchers::Predicate<error>(
                           [](const error& e) { return e.code() == errc::rate_limited; }));
  CHECK(fake.hits.load() == 3);  // initial try + 2 retries
}

TEST_CASE("other 4xx fail immediately without retry") {
  FakeServer fake([](int, const httplib::Request&, httplib::Response& res) { res.status = 404; });
  CHECK_THROWS_MATCHES(complete(fake.endpoint(), "hello", {}), error,
                       Catch::Matchers::Predicate<error>(
                           [](const error& e) { return e.code() == errc::transport; }));
  CHECK(fake.hits.load() == 1);
}

TEST_CASE("api key from the environment reaches the auth header") {
  setenv("GASE_TEST_KEY", "sk-test-XYZ", 1);
  std::string seen_auth;
  FakeServer fake([&](int, const httplib::Request& req, httplib::Response& res) {
    seen_auth = req.get_header_value("Authorization");
    reply_ok(res, "fine");
  });
  auto ep = fake.endpoint();
  ep.api_key_env = "GASE_TEST_KEY";
  CHECK(complete(ep, "hello", {}) == "fine");
  CHECK(seen_auth == "Bearer sk-test-XYZ");
  unsetenv("GASE_TEST_KEY");
}

TEST_CASE("api keys never appear in config dumps") {
  setenv("GASE_SECRET_ENV", "sk-super-secret-123", 1);
  ExperimentConfig cfg;
  GeneratorRef gen;
  gen.type = "http";
  gen.endpoint.base_url = "http://example.invalid";
  gen.endpoint.model = "m";
  gen.endpoint.api_key_env = "GASE_SECRET_ENV";
  cfg.generators.push_back(gen);
  cfg.embedder.type = "remote";
  cfg.embedder.endpoint.api_key_env = "GASE_SECRET_ENV";

  const std::string dumped = config_to_json(cfg).dump();
  CHECK(dumped.find("sk-super-secret-123") == std::string::npos);
  CHECK(dumped.find("GASE_SECRET_ENV") != std::string::npos);
  unsetenv("GASE_SECRET_ENV");
}

TEST_CASE("counting client counts completions") {
  auto counting = std::make_shared<CountingClient>(make_stub(StubKind::echo));
  CHECK(counting->calls() == 0);
  counting->complete("a", {});
  counting->complete("b", {});
  CHECK(counting->calls() == 2);
}
