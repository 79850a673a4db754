#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

#include "json.hpp"

#include "gase/error.hpp"
#include "gase/http.hpp"
#include "gase/prompts.hpp"

namespace gase {

// Sampling parameters sent with every generation request. Defaults match the
// reproducibility setup: greedy decoding with a fixed seed.
struct GenerationParams {
  double temperature = 0.0;
  double top_p = 1.0;
  std::optional<std::int64_t> seed = 1337;
  std::optional<int> max_tokens;

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["temperature"] = temperature;
    j["top_p"] = top_p;
    if (seed) j["seed"] = *seed;
    if (max_tokens) j["max_tokens"] = *max_tokens;
    return j;
  }

  // Canonical form for cache keys: object keys sorted, reals in shortest
  // round-trip decimal. nlohmann's ordered object map + dump give both.
  std::string canonical_json() const { return to_json().dump(); }
};

class GenerativeClient {
 public:
  virtual ~GenerativeClient() = default;
  virtual std::string id() const = 0;
  virtual std::string model() const { return id(); }
  virtual std::string complete(const std::string& prompt, const GenerationParams& params) = 0;
};

using GeneratorEndpoint = HttpEndpoint;

// Chat-completions request body: single user message plus the sampling
// fields. The same shape reaches hosted APIs and local model servers.
inline nlohmann::json build_chat_request(const GeneratorEndpoint& ep, const std::string& prompt,
                                         const GenerationParams& params) {
  nlohmann::json body = params.to_json();
  body["model"] = ep.model;
  body["messages"] = nlohmann::json::array({{{"role", "user"}, {"content", prompt}}});
  return body;
}

inline std::string parse_chat_response(const nlohmann::json& response) {
  if (!response.contains("choices") || !response["choices"].is_array() ||
      response["choices"].empty())
    raise(errc::malformed_response, "chat response has no choices");
  const auto& first = response["choices"][0];
  if (!first.contains("message") || !first["message"].contains("content") ||
      !first["message"]["content"].is_string())
    raise(errc::malformed_response, "chat choice has no message content");
  return first["message"]["content"].get<std::string>();
}

inline std::string complete(const GeneratorEndpoint& ep, const std::string& prompt,
                            const GenerationParams& params) {
  if (prompt.empty()) raise(errc::empty_input, "complete: empty prompt");
  return parse_chat_response(post_json_with_retries(ep, build_chat_request(ep, prompt, params)));
}

class HttpChatClient : public GenerativeClient {
 public:
  explicit HttpChatClient(GeneratorEndpoint endpoint)
      : endpoint_(std::move(endpoint)), limiter_(endpoint_.max_concurrency) {
    if (endpoint_.path.empty()) endpoint_.path = "/v1/chat/completions";
  }

  std::string id() const override { return endpoint_.model; }

  std::string complete(const std::string& prompt, const GenerationParams& params) override {
    scoped_acquire guard(limiter_);
    return gase::complete(endpoint_, prompt, params);
  }

  const GeneratorEndpoint& endpoint() const { return endpoint_; }

 private:
  GeneratorEndpoint endpoint_;
  concurrency_limiter limiter_;
};

// ---------------------------------------------------------------------------
// Deterministic local stubs for tests and offline runs.
// ---------------------------------------------------------------------------

enum class StubKind { echo, table, identity, noise_suffix };

struct StubConfig {
  std::string id;                                        // generator identity; defaults per kind
  std::unordered_map<std::string, std::string> table;    // table stub lookups
  std::uint64_t seed = 0;                                // noise_suffix token seed
  int delay_ms = 0;                                      // scripted latency per call
  std::vector<PromptTemplate> templates;                 // identity/noise payload extraction;
                                                         // empty -> shipped defaults
};

namespace detail {

inline const std::vector<PromptTemplate>& stub_templates(const StubConfig& cfg) {
  return cfg.templates.empty() ? default_templates() : cfg.templates;
}

// Longest-prefix template match, so overlapping prompt families resolve to
// the most specific body.
inline std::string extract_known_payload(const std::vector<PromptTemplate>& templates,
                                         const std::string& prompt) {
  const PromptTemplate* best = nullptr;
  std::string payload;
  for (const auto& t : templates) {
    if (auto p = extract_payload(t, prompt)) {
      if (!best || t.body.size() > best->body.size()) {
        best = &t;
        payload = std::move(*p);
      }
    }
  }
  if (!best) raise(errc::unknown_template, "prompt matches no known template");
  return payload;
}

inline void scripted_delay(int delay_ms) {
  if (delay_ms > 0) std::this_thread::sleep_for(std::chrono::milliseconds(delay_ms));
}

class EchoStub : public GenerativeClient {
 public:
  explicit EchoStub(StubConfig cfg) : cfg_(std::move(cfg)) {
    if (cfg_.id.empty()) cfg_.id = "stub-echo";
  }
  std::string id() const override { return cfg_.id; }
  std::string complete(const std::string& prompt, const GenerationParams&) override {
    scripted_delay(cfg_.delay_ms);
    return prompt;
  }

 private:
  StubConfig cfg_;
};

class TableStub : public GenerativeClient {
 public:
  explicit TableStub(StubConfig cfg) : cfg_(std::move(cfg)) {
    if (cfg_.id.empty()) cfg_.id = "stub-table";
  }
  std::string id() const override { return cfg_.id; }
  std::string complete(const std::string& prompt, const GenerationParams&) override {
    scripted_delay(cfg_.delay_ms);
    auto it = cfg_.table.find(prompt);
    if (it == cfg_.table.end()) raise(errc::unknown_key, "table stub has no entry for prompt");
    return it->second;
  }

 private:
  StubConfig cfg_;
};

// Returns the {text} payload unchanged: the identity augmenter.
class IdentityStub : public GenerativeClient {
 public:
  explicit IdentityStub(StubConfig cfg) : cfg_(std::move(cfg)) {
    if (cfg_.id.empty()) cfg_.id = "stub-identity";
  }
  std::string id() const override { return cfg_.id; }
  std::string complete(const std::string& prompt, const GenerationParams&) override {
    scripted_delay(cfg_.delay_ms);
    return extract_known_payload(stub_templates(cfg_), prompt);
  }

 private:
  StubConfig cfg_;
};

// Payload plus a seed-determined suffix token, e.g. "<tok7>" for seed 7.
class NoiseSuffixStub : public GenerativeClient {
 public:
  explicit NoiseSuffixStub(StubConfig cfg) : cfg_(std::move(cfg)) {
    if (cfg_.id.empty()) cfg_.id = "stub-noise";
  }
  std::string id() const override { return cfg_.id; }
  std::string complete(const std::string& prompt, const GenerationParams&) override {
    scripted_delay(cfg_.delay_ms);
    return extract_known_payload(stub_templates(cfg_), prompt) + " <tok" +
           std::to_string(cfg_.seed) + ">";
  }

 private:
  StubConfig cfg_;
};

}  // namespace detail

inline std::shared_ptr<GenerativeClient> make_stub(StubKind kind, StubConfig cfg = {}) {
  switch (kind) {
    case StubKind::echo: return std::make_shared<detail::EchoStub>(std::move(cfg));
    case StubKind::table: return std::make_shared<detail::TableStub>(std::move(cfg));
    case StubKind::identity: return std::make_shared<detail::IdentityStub>(std::move(cfg));
    case StubKind::noise_suffix: return std::make_shared<detail::NoiseSuffixStub>(std::move(cfg));
  }
  raise(errc::config, "unknown stub kind");
}

// Wraps any client and counts completions; cache tests assert on the count.
class CountingClient : public GenerativeClient {
 public:
  explicit CountingClient(std::shared_ptr<GenerativeClient> inner) : inner_(std::move(inner)) {}
  std::string id() const override { return inner_->id(); }
  std::string model() const override { return inner_->model(); }
  std::string complete(const std::string& prompt, const GenerationParams& params) override {
    calls_.fetch_add(1, std::memory_order_relaxed);
    return inner_->complete(prompt, params);
  }
  long calls() const { return calls_.load(std::memory_order_relaxed); }

 private:
  std::shared_ptr<GenerativeClient> inner_;
  std::atomic<long> calls_{0};
};

}  // namespace gase
