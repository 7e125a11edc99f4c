#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <cstdlib>

#include "evalforge/provider.hpp"
#include "httplib.h"

namespace evalforge {

using nlohmann::json;

nlohmann::json openai_request_body(const ModelConfig& model,
                                   const InferenceRequest& request) {
    return json{{"model", model.model_name},
                {"messages", json::array({json{{"role", "user"},
                                               {"content", request.prompt}}})},
                {"temperature", request.temperature},
                {"max_tokens", request.max_tokens}};
}

nlohmann::json anthropic_request_body(const ModelConfig& model,
                                      const InferenceRequest& request) {
    return json{{"model", model.model_name},
                {"messages", json::array({json{{"role", "user"},
                                               {"content", request.prompt}}})},
                {"temperature", request.temperature},
                {"max_tokens", request.max_tokens}};
}

nlohmann::json google_request_body(const ModelConfig& model,
                                   const InferenceRequest& request) {
    (void)model;
    return json{
        {"contents",
         json::array({json{{"parts", json::array({json{{"text", request.prompt}}})}}})},
        {"generationConfig", json{{"temperature", request.temperature},
                                  {"maxOutputTokens", request.max_tokens}}}};
}

namespace {

InferenceResponse parse_failure(const std::string& message) {
    InferenceResponse response;
    FailureRecord failure;
    failure.kind = FailureKind::parse;
    failure.message = message;
    response.error = failure;
    return response;
}

}  // namespace

InferenceResponse parse_openai_response(const std::string& body) {
    json doc = json::parse(body, nullptr, false);
    if (doc.is_discarded()) return parse_failure("response body is not JSON");
    InferenceResponse response;
    try {
        response.text = doc.at("choices").at(0).at("message").at("content")
                            .get<std::string>();
        response.input_tokens = doc.at("usage").at("prompt_tokens").get<std::int64_t>();
        response.output_tokens =
            doc.at("usage").at("completion_tokens").get<std::int64_t>();
    } catch (const json::exception& e) {
        return parse_failure(std::string("unexpected response shape: ") + e.what());
    }
    return response;
}

InferenceResponse parse_anthropic_response(const std::string& body) {
    json doc = json::parse(body, nullptr, false);
    if (doc.is_discarded()) return parse_failure("response body is not JSON");
    InferenceResponse response;
    try {
        response.text = doc.at("content").at(0).at("text").get<std::string>();
        response.input_tokens = doc.at("usage").at("input_tokens").get<std::int64_t>();
        response.output_tokens = doc.at("usage").at("output_tokens").get<std::int64_t>();
    } catch (const json::exception& e) {
        return parse_failure(std::string("unexpected response shape: ") + e.what());
    }
    return response;
}

InferenceResponse parse_google_response(const std::string& body) {
    json doc = json::parse(body, nullptr, false);
    if (doc.is_discarded()) return parse_failure("response body is not JSON");
    InferenceResponse response;
    try {
        response.text = doc.at("candidates").at(0).at("content").at("parts").at(0)
                            .at("text").get<std::string>();
        const json& usage = doc.at("usageMetadata");
        response.input_tokens = usage.at("promptTokenCount").get<std::int64_t>();
        response.output_tokens = usage.at("candidatesTokenCount").get<std::int64_t>();
    } catch (const json::exception& e) {
        return parse_failure(std::string("unexpected response shape: ") + e.what());
    }
    return response;
}

namespace {

const char* default_base_url(Provider provider) {
    switch (provider) {
        case Provider::openai: return "https://api.openai.com";
        case Provider::anthropic: return "https://api.anthropic.com";
        case Provider::google: return "https://generativelanguage.googleapis.com";
        case Provider::mock: break;
    }
    return "";
}

class HttpEngine : public InferenceEngine {
public:
    HttpEngine(const ModelConfig& model, const InferenceConfig& inference,
               const EngineEnv& env, std::uint64_t worker_id)
        : model_(model),
          max_retries_(inference.max_retries),
          retry_delay_(inference.retry_delay),
          env_(env),
          clock_(env.clock ? env.clock : &fallback_clock_),
          rng_(Rng::stream(env.rng_seed, worker_id)),
          base_url_(model.base_url.value_or(default_base_url(model.provider))) {
        const char* key = std::getenv(api_key_env_var(model.provider).c_str());
        api_key_ = key ? key : "";
    }

    InferenceResponse infer(const InferenceRequest& request) override {
        auto response = retry_with_backoff(
            [&] { return attempt_once(request); }, max_retries_, retry_delay_,
            *clock_, rng_);
        if (response.ok())
            response.cost =
                compute_cost(response.input_tokens, response.output_tokens, model_);
        return response;
    }

private:
    InferenceResponse attempt_once(const InferenceRequest& request) {
        if (env_.provider_calls) env_.provider_calls->fetch_add(1);
        httplib::Client client(base_url_);
        client.set_connection_timeout(static_cast<int>(model_.timeout_seconds), 0);
        client.set_read_timeout(static_cast<int>(model_.timeout_seconds), 0);

        std::string path;
        json body;
        httplib::Headers headers;
        switch (model_.provider) {
            case Provider::openai:
                path = "/v1/chat/completions";
                body = openai_request_body(model_, request);
                headers.emplace("Authorization", "Bearer " + api_key_);
                break;
            case Provider::anthropic:
                path = "/v1/messages";
                body = anthropic_request_body(model_, request);
                headers.emplace("x-api-key", api_key_);
                headers.emplace("anthropic-version", "2023-06-01");
                break;
            case Provider::google:
                path = "/v1beta/models/" + model_.model_name +
                       ":generateContent?key=" + api_key_;
                body = google_request_body(model_, request);
                break;
            case Provider::mock: break;
        }

        const double start = clock_->now_seconds();
        auto result = client.Post(path, headers, body.dump(), "application/json");
        const double latency_ms = (clock_->now_seconds() - start) * 1000.0;

        InferenceResponse response;
        if (!result) {
            FailureRecord failure;
            failure.kind = FailureKind::network;
            failure.message = "transport failure: " + httplib::to_string(result.error());
            response.error = failure;
        } else if (result->status != 200) {
            FailureRecord failure;
            failure.kind = classify_error(result->status, result->body);
            failure.http_status = result->status;
            failure.message = "HTTP " + std::to_string(result->status);
            response.error = failure;
        } else {
            switch (model_.provider) {
                case Provider::openai:
                    response = parse_openai_response(result->body);
                    break;
                case Provider::anthropic:
                    response = parse_anthropic_response(result->body);
                    break;
                case Provider::google:
                    response = parse_google_response(result->body);
                    break;
                case Provider::mock: break;
            }
        }
        response.latency_ms = latency_ms;
        return response;
    }

    ModelConfig model_;
    int max_retries_;
    double retry_delay_;
    EngineEnv env_;
    Clock* clock_;
    SystemClock fallback_clock_;
    Rng rng_;
    std::string base_url_;
    std::string api_key_;
};

}  // namespace

std::unique_ptr<InferenceEngine> make_http_engine(const ModelConfig& model,
                                                  const InferenceConfig& inference,
                                                  const EngineEnv& env,
                                                  std::uint64_t worker_id) {
    return std::make_unique<HttpEngine>(model, inference, env, worker_id);
}

}  // namespace evalforge
