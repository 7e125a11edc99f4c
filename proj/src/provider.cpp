#include "evalforge/provider.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "evalforge/sha256.hpp"

namespace evalforge {

std::string to_string(FailureKind k) {
    switch (k) {
        case FailureKind::rate_limited: return "rate_limited";
        case FailureKind::server_error: return "server_error";
        case FailureKind::auth_error: return "auth_error";
        case FailureKind::invalid_request: return "invalid_request";
        case FailureKind::content_policy: return "content_policy";
        case FailureKind::network: return "network";
        case FailureKind::parse: return "parse";
        case FailureKind::cache_miss: return "cache_miss";
    }
    return "?";
}

namespace {

bool contains_ci(const std::string& haystack, const std::string& needle) {
    auto it = std::search(haystack.begin(), haystack.end(), needle.begin(),
                          needle.end(), [](char a, char b) {
                              return std::tolower(static_cast<unsigned char>(a)) ==
                                     std::tolower(static_cast<unsigned char>(b));
                          });
    return it != haystack.end();
}

}  // namespace

FailureKind classify_error(int http_status, const std::string& body) {
    if (contains_ci(body, "content_filter") || contains_ci(body, "content policy") ||
        contains_ci(body, "content_policy"))
        return FailureKind::content_policy;
    switch (http_status) {
        case 429: return FailureKind::rate_limited;
        case 500:
        case 502:
        case 503: return FailureKind::server_error;
        case 401: return FailureKind::auth_error;
        case 400: return FailureKind::invalid_request;
        default:
            return http_status >= 500 ? FailureKind::server_error
                                      : FailureKind::invalid_request;
    }
}

bool is_recoverable(FailureKind k) {
    return k == FailureKind::rate_limited || k == FailureKind::server_error ||
           k == FailureKind::network;
}

std::optional<double> compute_cost(std::int64_t input_tokens,
                                   std::int64_t output_tokens,
                                   const ModelConfig& model) {
    if (!model.price_per_1m_input || !model.price_per_1m_output)
        return std::nullopt;
    return static_cast<double>(input_tokens) * *model.price_per_1m_input / 1e6 +
           static_cast<double>(output_tokens) * *model.price_per_1m_output / 1e6;
}

InferenceResponse retry_with_backoff(
    const std::function<InferenceResponse()>& attempt, int max_retries,
    double base_delay, Clock& clock, Rng& rng) {
    InferenceResponse response;
    int attempts = 0;
    for (int k = 0; k <= max_retries; ++k) {
        if (k > 0) {
            const double delay =
                base_delay * std::pow(2.0, k - 1) + rng.uniform() * base_delay;
            clock.sleep_for(delay);
        }
        response = attempt();
        ++attempts;
        if (response.ok() || !is_recoverable(response.error->kind)) break;
    }
    if (response.error) response.error->attempts = attempts;
    return response;
}

std::vector<InferenceResponse> InferenceEngine::infer_batch(
    const std::vector<InferenceRequest>& requests) {
    std::vector<InferenceResponse> responses;
    responses.reserve(requests.size());
    for (const auto& request : requests) responses.push_back(infer(request));
    return responses;
}

namespace {

std::int64_t mock_token_count(const std::string& text) {
    return (static_cast<std::int64_t>(text.size()) + 3) / 4;
}

/// Finds "judge:<digits>" or "verdict:<A|B|tie>" markers anywhere in the
/// prompt, so marker-bearing text survives judge prompt wrapping.
std::optional<std::string> find_marker(const std::string& prompt,
                                       const std::string& marker) {
    auto pos = prompt.find(marker);
    if (pos == std::string::npos) return std::nullopt;
    return prompt.substr(pos + marker.size());
}

}  // namespace

MockEngine::MockEngine(const ModelConfig& model, const InferenceConfig& inference,
                       const EngineEnv& env, std::uint64_t worker_id)
    : model_(model),
      max_retries_(inference.max_retries),
      retry_delay_(inference.retry_delay),
      env_(env),
      clock_(env.clock ? env.clock : &fallback_clock_),
      rng_(Rng::stream(env.rng_seed, worker_id)) {}

InferenceResponse MockEngine::attempt_once(const InferenceRequest& request) {
    if (env_.provider_calls) env_.provider_calls->fetch_add(1);
    const double start = clock_->now_seconds();
    if (env_.mock_latency_seconds > 0) clock_->sleep_for(env_.mock_latency_seconds);

    InferenceResponse response;
    response.latency_ms = (clock_->now_seconds() - start) * 1000.0;
    response.input_tokens = mock_token_count(request.prompt);

    const std::string& prompt = request.prompt;
    if (prompt.rfind("fail:", 0) == 0) {
        const int status = std::atoi(prompt.c_str() + 5);
        FailureRecord failure;
        failure.kind = classify_error(status, "");
        failure.http_status = status;
        failure.message = "simulated HTTP " + std::to_string(status);
        response.error = failure;
        return response;
    }

    if (prompt.rfind("echo:", 0) == 0) {
        response.text = prompt.substr(5);
    } else if (auto rest = find_marker(prompt, "judge:")) {
        std::size_t i = 0;
        while (i < rest->size() && std::isdigit(static_cast<unsigned char>((*rest)[i])))
            ++i;
        if (i > 0) {
            response.text = "Score: " + rest->substr(0, i) + ". Explanation: mock.";
        } else {
            response.text = sha256_hex(prompt).substr(0, 16);
        }
    } else if (auto rest = find_marker(prompt, "verdict:")) {
        std::string verdict;
        for (const char* v : {"tie", "A", "B"}) {
            if (rest->rfind(v, 0) == 0) {
                verdict = v;
                break;
            }
        }
        response.text = verdict.empty() ? sha256_hex(prompt).substr(0, 16)
                                        : "Verdict: " + verdict;
    } else {
        response.text = sha256_hex(prompt).substr(0, 16);
    }

    response.output_tokens = mock_token_count(response.text);
    response.cost = compute_cost(response.input_tokens, response.output_tokens, model_);
    return response;
}

InferenceResponse MockEngine::infer(const InferenceRequest& request) {
    return retry_with_backoff([&] { return attempt_once(request); }, max_retries_,
                              retry_delay_, *clock_, rng_);
}

std::string api_key_env_var(Provider provider) {
    std::string name = to_string(provider);
    for (char& c : name) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return "EVALFORGE_" + name + "_API_KEY";
}

std::unique_ptr<InferenceEngine> make_http_engine(const ModelConfig& model,
                                                  const InferenceConfig& inference,
                                                  const EngineEnv& env,
                                                  std::uint64_t worker_id);

std::unique_ptr<InferenceEngine> make_engine(const ModelConfig& model,
                                             const InferenceConfig& inference,
                                             const EngineEnv& env,
                                             std::uint64_t worker_id) {
    if (env.engine_constructions) env.engine_constructions->fetch_add(1);
    if (model.provider == Provider::mock)
        return std::make_unique<MockEngine>(model, inference, env, worker_id);
    return make_http_engine(model, inference, env, worker_id);
}

}  // namespace evalforge
