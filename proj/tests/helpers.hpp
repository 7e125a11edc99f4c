/// @file helpers.hpp
/// Shared test utilities: fixture loading, temp directories, and a
/// scripted inference engine for exercising judge flows offline.

#pragma once

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "evalforge/metrics.hpp"
#include "evalforge/provider.hpp"

namespace testutil {

inline nlohmann::json load_fixture(const std::string& name) {
    const std::string path = std::string(EVALFORGE_FIXTURE_DIR) + "/" + name;
    std::ifstream in(path);
    REQUIRE_MESSAGE(in.good(), "missing fixture: " << path);
    return nlohmann::json::parse(in);
}

inline evalforge::NormalizationOptions options_from(const nlohmann::json& j) {
    evalforge::NormalizationOptions opts;
    opts.lowercase = j.at("lowercase").get<bool>();
    opts.strip_punctuation = j.at("strip_punctuation").get<bool>();
    opts.collapse_whitespace = j.at("collapse_whitespace").get<bool>();
    opts.strip_articles = j.at("strip_articles").get<bool>();
    return opts;
}

/// Fresh directory under the system temp root, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag = "evalforge_test") {
        static std::mt19937_64 gen(std::random_device{}());
        for (;;) {
            std::ostringstream name;
            name << tag << "-" << std::hex << gen();
            path_ = std::filesystem::temp_directory_path() / name.str();
            if (std::filesystem::create_directory(path_)) break;
        }
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::string str() const { return path_.string(); }
    std::string file(const std::string& name) const {
        return (path_ / name).string();
    }

private:
    std::filesystem::path path_;
};

inline std::string write_file(const TempDir& dir, const std::string& name,
                              const std::string& content) {
    const std::string path = dir.file(name);
    std::ofstream out(path, std::ios::binary);
    out << content;
    return path;
}

/// Replies with the script entry whose key is a substring of the prompt
/// (first match in insertion order), else with `fallback`.
class ScriptedEngine : public evalforge::InferenceEngine {
public:
    explicit ScriptedEngine(std::string fallback = "Score: 3. ok")
        : fallback_(std::move(fallback)) {}

    ScriptedEngine& on(std::string needle, std::string reply) {
        script_.emplace_back(std::move(needle), std::move(reply));
        return *this;
    }

    evalforge::InferenceResponse infer(
        const evalforge::InferenceRequest& request) override {
        ++calls;
        prompts.push_back(request.prompt);
        evalforge::InferenceResponse resp;
        resp.text = fallback_;
        for (const auto& [needle, reply] : script_) {
            if (request.prompt.find(needle) != std::string::npos) {
                resp.text = reply;
                break;
            }
        }
        resp.input_tokens = static_cast<std::int64_t>(request.prompt.size() / 4);
        resp.output_tokens = static_cast<std::int64_t>(resp.text.size() / 4);
        return resp;
    }

    int calls = 0;
    std::vector<std::string> prompts;

private:
    std::vector<std::pair<std::string, std::string>> script_;
    std::string fallback_;
};

}  // namespace testutil
