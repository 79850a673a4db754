#pragma once

#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "gase/embedding.hpp"
#include "gase/error.hpp"
#include "gase/http.hpp"

namespace gase {

struct EmbeddingEndpoint {
  HttpEndpoint http;     // path defaults to /v1/embeddings
  int batch_limit = 96;  // max texts per request
};

// Request {model, input:[texts]} -> response {data:[{embedding:[...]}...]}.
// One vector per input in input order; honors the shared retry policy.
inline std::vector<EmbeddingVector> embed_remote(const EmbeddingEndpoint& ep,
                                                 const std::vector<std::string>& texts) {
  if (texts.empty()) raise(errc::empty_batch, "embed_remote: empty batch");
  if (static_cast<int>(texts.size()) > ep.batch_limit)
    raise(errc::config, "embed_remote: batch of " + std::to_string(texts.size()) +
                            " exceeds limit " + std::to_string(ep.batch_limit));

  HttpEndpoint http = ep.http;
  if (http.path.empty()) http.path = "/v1/embeddings";
  nlohmann::json body;
  body["model"] = http.model;
  body["input"] = texts;
  const nlohmann::json response = post_json_with_retries(http, body);

  if (!response.contains("data") || !response["data"].is_array() ||
      response["data"].size() != texts.size())
    raise(errc::malformed_response, "embedding response data count mismatch");

  std::vector<EmbeddingVector> out(texts.size());
  std::size_t position = 0;
  for (const auto& item : response["data"]) {
    if (!item.contains("embedding") || !item["embedding"].is_array())
      raise(errc::malformed_response, "embedding item lacks values");
    const std::size_t index =
        item.contains("index") ? item["index"].get<std::size_t>() : position;
    if (index >= out.size()) raise(errc::malformed_response, "embedding index out of range");
    EmbeddingVector vec;
    vec.provider_id = http.model;
    vec.values.reserve(item["embedding"].size());
    for (const auto& v : item["embedding"]) vec.values.push_back(v.get<float>());
    out[index] = std::move(vec);
    ++position;
  }
  const std::size_t dim = out.front().dim();
  for (const auto& v : out)
    if (v.dim() != dim)
      raise(errc::dim_mismatch, "embedding response vectors disagree in length");
  return out;
}

class RemoteEmbeddingProvider : public EmbeddingProvider {
 public:
  explicit RemoteEmbeddingProvider(EmbeddingEndpoint endpoint)
      : endpoint_(std::move(endpoint)), limiter_(endpoint_.http.max_concurrency) {}

  std::string id() const override { return endpoint_.http.model; }

  std::vector<EmbeddingVector> embed(const std::vector<std::string>& texts) override {
    if (texts.empty()) raise(errc::empty_batch, "embed: empty batch");
    std::vector<EmbeddingVector> out;
    out.reserve(texts.size());
    for (std::size_t start = 0; start < texts.size();
         start += static_cast<std::size_t>(endpoint_.batch_limit)) {
      const std::size_t end =
          std::min(texts.size(), start + static_cast<std::size_t>(endpoint_.batch_limit));
      std::vector<std::string> chunk(texts.begin() + static_cast<std::ptrdiff_t>(start),
                                     texts.begin() + static_cast<std::ptrdiff_t>(end));
      scoped_acquire guard(limiter_);
      auto vectors = embed_remote(endpoint_, chunk);
      for (auto& v : vectors) out.push_back(std::move(v));
    }
    return out;
  }

 private:
  EmbeddingEndpoint endpoint_;
  concurrency_limiter limiter_;
};

}  // namespace gase
