/// @file provider.hpp
/// Inference-engine abstraction over hosted LLM chat APIs plus a
/// deterministic mock. Failures are values (FailureRecord), never
/// exceptions: the runner tallies them per example.

#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "evalforge/clock.hpp"
#include "evalforge/config.hpp"
#include "evalforge/rng.hpp"
#include <json.hpp>

namespace evalforge {

enum class FailureKind {
    rate_limited,
    server_error,
    auth_error,
    invalid_request,
    content_policy,
    network,
    parse,
    cache_miss,
};

std::string to_string(FailureKind k);

struct FailureRecord {
    FailureKind kind = FailureKind::network;
    std::optional<int> http_status;
    std::string message;
    int attempts = 1;
};

struct InferenceRequest {
    std::string prompt;
    double temperature = 0.0;
    int max_tokens = 1024;
    std::string request_id;
};

struct InferenceResponse {
    std::string text;
    std::int64_t input_tokens = 0;
    std::int64_t output_tokens = 0;
    double latency_ms = 0.0;
    std::optional<double> cost;
    bool cached = false;
    std::optional<FailureRecord> error;

    bool ok() const { return !error.has_value(); }
};

/// 429 → rate_limited; 500/502/503 → server_error; 401 → auth_error;
/// 400 → invalid_request unless the body carries a content-policy signal;
/// other statuses → server_error if >= 500 else invalid_request.
FailureKind classify_error(int http_status, const std::string& body);

/// Recoverable failures (retried): rate_limited, server_error, network.
bool is_recoverable(FailureKind k);

/// Linear price model per million tokens. Absent unless both prices are
/// configured.
std::optional<double> compute_cost(std::int64_t input_tokens,
                                   std::int64_t output_tokens,
                                   const ModelConfig& model);

/// Runs attempt() until success, a non-recoverable failure, or
/// max_retries retries are spent. Before retry k (k >= 1) sleeps
/// base_delay * 2^(k-1) plus uniform jitter in [0, base_delay).
/// The returned response carries the total attempt count.
InferenceResponse retry_with_backoff(
    const std::function<InferenceResponse()>& attempt, int max_retries,
    double base_delay, Clock& clock, Rng& rng);

class InferenceEngine {
public:
    virtual ~InferenceEngine() = default;
    virtual InferenceResponse infer(const InferenceRequest& request) = 0;

    /// Positionally aligned with requests; one failure never fails the
    /// batch.
    virtual std::vector<InferenceResponse> infer_batch(
        const std::vector<InferenceRequest>& requests);
};

/// Test/observability hooks threaded through engine construction. All
/// pointers are optional; counters are shared across workers.
struct EngineEnv {
    Clock* clock = nullptr;
    std::atomic<std::int64_t>* provider_calls = nullptr;
    std::atomic<std::int64_t>* engine_constructions = nullptr;
    double mock_latency_seconds = 0.0;
    std::uint64_t rng_seed = 0;
};

/// Deterministic offline engine. Contract:
///   "echo:X"            -> text X
///   "fail:<status>"     -> simulated HTTP failure with that status
///   contains "judge:<n>"      -> "Score: <n>. Explanation: mock."
///   contains "verdict:<A|B|tie>" -> "Verdict: <A|B|tie>"
///   anything else       -> first 16 hex chars of SHA-256(prompt)
/// Token counts are ceil(bytes/4); latency is env.mock_latency_seconds
/// slept on the injected clock.
class MockEngine : public InferenceEngine {
public:
    MockEngine(const ModelConfig& model, const InferenceConfig& inference,
               const EngineEnv& env, std::uint64_t worker_id);

    InferenceResponse infer(const InferenceRequest& request) override;

private:
    InferenceResponse attempt_once(const InferenceRequest& request);

    ModelConfig model_;
    int max_retries_;
    double retry_delay_;
    EngineEnv env_;
    Clock* clock_;
    SystemClock fallback_clock_;
    Rng rng_;
};

/// Builds the provider-specific engine for model.provider. Increments
/// env.engine_constructions when present.
std::unique_ptr<InferenceEngine> make_engine(const ModelConfig& model,
                                             const InferenceConfig& inference,
                                             const EngineEnv& env,
                                             std::uint64_t worker_id = 0);

/// Wire-format builders and parsers, exposed for offline tests. Parsers
/// return a parse-kind failure on unexpected shapes.
nlohmann::json openai_request_body(const ModelConfig& model,
                                   const InferenceRequest& request);
nlohmann::json anthropic_request_body(const ModelConfig& model,
                                      const InferenceRequest& request);
nlohmann::json google_request_body(const ModelConfig& model,
                                   const InferenceRequest& request);
InferenceResponse parse_openai_response(const std::string& body);
InferenceResponse parse_anthropic_response(const std::string& body);
InferenceResponse parse_google_response(const std::string& body);

/// EVALFORGE_<PROVIDER>_API_KEY, e.g. EVALFORGE_OPENAI_API_KEY.
std::string api_key_env_var(Provider provider);

}  // namespace evalforge
