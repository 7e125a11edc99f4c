#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "evalforge/embedder.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>

#include "evalforge/rng.hpp"
#include "evalforge/sha256.hpp"
#include "httplib.h"

namespace evalforge {

using nlohmann::json;

std::vector<Embedding> Embedder::embed_tokens(const std::vector<std::string>& tokens) {
    if (tokens.empty()) throw std::invalid_argument("empty token list");
    std::vector<Embedding> out;
    out.reserve(tokens.size());
    for (const auto& token : tokens) out.push_back(embed(token));
    return out;
}

DeterministicEmbedder::DeterministicEmbedder(int dim) : dim_(dim) {
    if (dim < 1) throw std::invalid_argument("embedding dim must be >= 1");
}

Embedding DeterministicEmbedder::embed(const std::string& text) {
    const auto digest = sha256(text);
    std::uint64_t seed;
    std::memcpy(&seed, digest.data(), 8);
    Rng rng(seed);
    Embedding v(static_cast<std::size_t>(dim_));
    double norm_sq = 0.0;
    for (auto& component : v) {
        component = rng.normal();
        norm_sq += component * component;
    }
    const double norm = std::sqrt(norm_sq);
    for (auto& component : v) component /= norm;
    return v;
}

nlohmann::json embed_request_body(const std::string& model_name,
                                  const std::vector<std::string>& inputs) {
    return json{{"model", model_name}, {"input", inputs}};
}

std::vector<Embedding> parse_embed_response(const std::string& body) {
    json doc = json::parse(body, nullptr, false);
    if (doc.is_discarded() || !doc.is_object() || !doc.contains("embeddings") ||
        !doc["embeddings"].is_array()) {
        FailureRecord failure;
        failure.kind = FailureKind::parse;
        failure.message = "embedding response missing \"embeddings\" array";
        throw EmbedderError(std::move(failure));
    }
    std::vector<Embedding> out;
    for (const auto& item : doc["embeddings"]) {
        if (!item.is_array()) {
            FailureRecord failure;
            failure.kind = FailureKind::parse;
            failure.message = "embedding entry is not an array";
            throw EmbedderError(std::move(failure));
        }
        out.push_back(item.get<Embedding>());
    }
    return out;
}

HttpEmbedder::HttpEmbedder(std::string base_url, std::string model_name, int dim,
                           double timeout_seconds, CacheStore* store,
                           CachePolicy policy)
    : base_url_(std::move(base_url)),
      model_name_(std::move(model_name)),
      dim_(dim),
      timeout_seconds_(timeout_seconds),
      store_(store),
      policy_(policy) {}

Embedding HttpEmbedder::embed(const std::string& text) {
    const std::string cache_provider = "embedding:" + model_name_;
    const bool reads = store_ && (policy_ == CachePolicy::enabled ||
                                  policy_ == CachePolicy::read_only ||
                                  policy_ == CachePolicy::replay);
    const bool writes = store_ && (policy_ == CachePolicy::enabled ||
                                   policy_ == CachePolicy::write_only);
    SystemClock clock;
    std::string key;
    if (store_ && policy_ != CachePolicy::disabled)
        key = cache_key(text, model_name_, cache_provider, 0.0, 0);

    if (reads) {
        if (auto entry = store_->lookup(key, clock.unix_seconds())) {
            json vec = json::parse(entry->response_text, nullptr, false);
            if (vec.is_array()) return vec.get<Embedding>();
        }
        if (policy_ == CachePolicy::replay) {
            FailureRecord failure;
            failure.kind = FailureKind::cache_miss;
            failure.message = "replay cache miss for embedding";
            throw EmbedderError(std::move(failure));
        }
    }

    httplib::Client client(base_url_);
    client.set_connection_timeout(static_cast<int>(timeout_seconds_), 0);
    client.set_read_timeout(static_cast<int>(timeout_seconds_), 0);
    auto result = client.Post("/embed", embed_request_body(model_name_, {text}).dump(),
                              "application/json");
    if (!result) {
        FailureRecord failure;
        failure.kind = FailureKind::network;
        failure.message = "transport failure: " + httplib::to_string(result.error());
        throw EmbedderError(std::move(failure));
    }
    if (result->status != 200) {
        FailureRecord failure;
        failure.kind = classify_error(result->status, result->body);
        failure.http_status = result->status;
        failure.message = "HTTP " + std::to_string(result->status);
        throw EmbedderError(std::move(failure));
    }
    auto vectors = parse_embed_response(result->body);
    if (vectors.size() != 1) {
        FailureRecord failure;
        failure.kind = FailureKind::parse;
        failure.message = "expected one embedding, got " + std::to_string(vectors.size());
        throw EmbedderError(std::move(failure));
    }

    if (writes) {
        CacheEntry entry;
        entry.prompt_hash = key;
        entry.model_name = model_name_;
        entry.provider = cache_provider;
        entry.prompt_text = text;
        entry.response_text = json(vectors[0]).dump();
        entry.created_at = clock.unix_seconds();
        store_->put(entry);
    }
    return vectors[0];
}

double cosine_similarity(const Embedding& a, const Embedding& b) {
    if (a.size() != b.size()) throw std::invalid_argument("dimension mismatch");
    if (a == b) {
        // Exact 1.0 for identical vectors, where rounding in the general
        // path could land 1 ulp off.
        for (double x : a)
            if (x != 0.0) return 1.0;
        throw std::invalid_argument("zero-norm embedding");
    }
    double dot = 0.0, norm_a = 0.0, norm_b = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        norm_a += a[i] * a[i];
        norm_b += b[i] * b[i];
    }
    if (norm_a == 0.0 || norm_b == 0.0)
        throw std::invalid_argument("zero-norm embedding");
    return dot / (std::sqrt(norm_a) * std::sqrt(norm_b));
}

}  // namespace evalforge
