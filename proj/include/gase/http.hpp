#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdlib>
#include <functional>
#include <mutex>
#include <string>
#include <thread>

#include "httplib.h"
#include "json.hpp"

#include "gase/error.hpp"
#include "gase/text.hpp"

namespace gase {

// One remote HTTP endpoint. The API key is looked up from the named
// environment variable at call time and is never stored on this struct, so
// serializing an endpoint cannot leak it.
struct HttpEndpoint {
  std::string base_url;  // scheme://host[:port]
  std::string path;      // request path, e.g. /v1/chat/completions
  std::string model;
  std::string api_key_env;
  int timeout_ms = 30000;
  int max_retries = 3;
  int backoff_base_ms = 1000;
  int max_concurrency = 4;
};

inline std::string api_key_from_env(const HttpEndpoint& ep) {
  if (ep.api_key_env.empty()) return {};
  const char* v = std::getenv(ep.api_key_env.c_str());
  return v ? std::string(v) : std::string();
}

// Counting semaphore with a runtime limit; bounds in-flight requests per
// endpoint.
class concurrency_limiter {
 public:
  explicit concurrency_limiter(int limit) : available_(limit > 0 ? limit : 1) {}

  void acquire() {
    std::unique_lock lock(mu_);
    cv_.wait(lock, [&] { return available_ > 0; });
    --available_;
  }

  void release() {
    {
      std::lock_guard lock(mu_);
      ++available_;
    }
    cv_.notify_one();
  }

 private:
  std::mutex mu_;
  std::condition_variable cv_;
  int available_;
};

struct scoped_acquire {
  explicit scoped_acquire(concurrency_limiter& l) : limiter(l) { limiter.acquire(); }
  ~scoped_acquire() { limiter.release(); }
  concurrency_limiter& limiter;
};

// POSTs a JSON body and applies the shared retry policy: exponential backoff
// (base, factor 2, jitter) on transport errors, 429, and 5xx, up to
// max_retries. 401/403 raise auth immediately; other 4xx never retry.
inline nlohmann::json post_json_with_retries(const HttpEndpoint& ep, const nlohmann::json& body) {
  httplib::Client client(ep.base_url);
  client.set_connection_timeout(0, ep.timeout_ms * 1000LL);
  client.set_read_timeout(ep.timeout_ms / 1000, (ep.timeout_ms % 1000) * 1000);
  const std::string key = api_key_from_env(ep);
  if (!key.empty()) client.set_bearer_token_auth(key);

  const std::string payload = body.dump();
  det_rng jitter(static_cast<std::uint64_t>(
      std::chrono::steady_clock::now().time_since_epoch().count()));

  errc last = errc::transport;
  std::string last_msg = "no attempt made";
  for (int attempt = 0; attempt <= ep.max_retries; ++attempt) {
    if (attempt > 0) {
      const std::int64_t base = static_cast<std::int64_t>(ep.backoff_base_ms) << (attempt - 1);
      const std::int64_t sleep_ms =
          base + static_cast<std::int64_t>(jitter.bounded(static_cast<std::uint64_t>(base) / 2 + 1));
      std::this_thread::sleep_for(std::chrono::milliseconds(sleep_ms));
    }
    auto res = client.Post(ep.path, payload, "application/json");
    if (!res) {
      last = errc::transport;
      last_msg = "transport failure: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status == 401 || res->status == 403)
      raise(errc::auth, "authentication rejected (" + std::to_string(res->status) + ") by " +
                            ep.base_url);
    if (res->status == 429) {
      last = errc::rate_limited;
      last_msg = "rate limited by " + ep.base_url;
      continue;
    }
    if (res->status >= 500) {
      last = errc::transport;
      last_msg = "server error " + std::to_string(res->status) + " from " + ep.base_url;
      continue;
    }
    if (res->status < 200 || res->status >= 300)
      raise(errc::transport,
            "unexpected status " + std::to_string(res->status) + " from " + ep.base_url);
    try {
      return nlohmann::json::parse(res->body);
    } catch (const nlohmann::json::parse_error& e) {
      raise(errc::malformed_response, std::string("response is not JSON: ") + e.what());
    }
  }
  raise(last, last_msg + " after " + std::to_string(ep.max_retries) + " retries");
}

}  // namespace gase
