/// @file embedder.hpp
/// Pluggable text embedding for semantic and RAG metrics: a deterministic
/// test embedder (no model weights) and an HTTP-backed one whose calls
/// are cacheable through the response cache.

#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "evalforge/cache.hpp"
#include "evalforge/provider.hpp"

namespace evalforge {

using Embedding = std::vector<double>;

/// Thrown by the HTTP embedder on provider failure; carries the
/// classified failure for the caller to record.
class EmbedderError : public std::runtime_error {
public:
    explicit EmbedderError(FailureRecord failure)
        : std::runtime_error(failure.message), failure_(std::move(failure)) {}

    const FailureRecord& failure() const { return failure_; }

private:
    FailureRecord failure_;
};

class Embedder {
public:
    virtual ~Embedder() = default;
    virtual int dim() const = 0;

    /// Deterministic per instance: same text, same vector.
    virtual Embedding embed(const std::string& text) = 0;

    /// One embedding per token, positionally aligned. Throws
    /// std::invalid_argument on an empty token list.
    virtual std::vector<Embedding> embed_tokens(const std::vector<std::string>& tokens);
};

/// Unit vectors with pseudo-random components seeded from SHA-256 of the
/// text; context-free per token. Distinct texts get near-orthogonal
/// directions at dim 64.
class DeterministicEmbedder : public Embedder {
public:
    explicit DeterministicEmbedder(int dim = 64);

    int dim() const override { return dim_; }
    Embedding embed(const std::string& text) override;

private:
    int dim_;
};

/// POSTs {"model": <name>, "input": [<texts>...]} to <base_url>/embed and
/// expects {"embeddings": [[...], ...]} with one vector per input. When a
/// cache store is supplied, single-text embeddings go through it keyed as
/// (text, model, "embedding:<model>", temperature 0, max_tokens 0).
class HttpEmbedder : public Embedder {
public:
    HttpEmbedder(std::string base_url, std::string model_name, int dim,
                 double timeout_seconds = 60.0, CacheStore* store = nullptr,
                 CachePolicy policy = CachePolicy::disabled);

    int dim() const override { return dim_; }
    Embedding embed(const std::string& text) override;

private:
    std::string base_url_;
    std::string model_name_;
    int dim_;
    double timeout_seconds_;
    CacheStore* store_;
    CachePolicy policy_;
};

/// Request/response shapes for the HTTP embedder, exposed for tests.
nlohmann::json embed_request_body(const std::string& model_name,
                                  const std::vector<std::string>& inputs);
std::vector<Embedding> parse_embed_response(const std::string& body);

double cosine_similarity(const Embedding& a, const Embedding& b);

}  // namespace evalforge
