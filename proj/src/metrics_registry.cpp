#include "evalforge/metrics_registry.hpp"

#include <algorithm>
#include <array>

#include "evalforge/metrics.hpp"

namespace evalforge::metrics {

namespace {

struct MetricInfo {
    const char* name;
    const char* family;
    bool binary;
    bool reference;
    bool contexts;
};

constexpr std::array<MetricInfo, 14> kRegistry{{
    {"exact_match", "lexical", true, true, false},
    {"contains", "lexical", true, true, false},
    {"token_f1", "lexical", false, true, false},
    {"bleu", "lexical", false, true, false},
    {"rouge_l", "lexical", false, true, false},
    {"embedding_similarity", "semantic", false, true, false},
    {"bertscore", "semantic", false, true, false},
    {"judge_pointwise", "llm_judge", false, false, false},
    {"judge_pairwise", "llm_judge", false, true, false},
    {"faithfulness", "rag", false, false, true},
    {"context_relevance", "rag", false, false, true},
    {"answer_relevance", "rag", false, false, false},
    {"context_precision", "rag", false, false, true},
    {"context_recall", "rag", false, true, true},
}};

const MetricInfo* find(const std::string& name) {
    for (const auto& info : kRegistry)
        if (name == info.name) return &info;
    return nullptr;
}

}  // namespace

std::vector<std::string> registered_names() {
    std::vector<std::string> names;
    names.reserve(kRegistry.size());
    for (const auto& info : kRegistry) names.emplace_back(info.name);
    return names;
}

bool is_registered(const std::string& name) { return find(name) != nullptr; }

std::string family_of(const std::string& name) {
    const auto* info = find(name);
    return info ? info->family : "";
}

bool is_binary(const std::string& name) {
    const auto* info = find(name);
    return info && info->binary;
}

bool needs_reference(const std::string& name) {
    const auto* info = find(name);
    return info && info->reference;
}

bool needs_contexts(const std::string& name) {
    const auto* info = find(name);
    return info && info->contexts;
}

}  // namespace evalforge::metrics

namespace evalforge {

namespace {

ScoredExample base_scored(const MetricConfig& cfg, const MetricInputs& in) {
    ScoredExample scored;
    scored.example_id = in.example->example_id;
    scored.metric_name = cfg.name;
    return scored;
}

ScoredExample not_scorable(const MetricConfig& cfg, const MetricInputs& in,
                           const std::string& reason) {
    ScoredExample scored = base_scored(cfg, in);
    scored.parse_failed = true;
    scored.detail = reason;
    return scored;
}

NormalizationOptions options_from(const MetricConfig& cfg) {
    NormalizationOptions opts;
    opts.lowercase = cfg.param_bool("lowercase", opts.lowercase);
    opts.strip_punctuation = cfg.param_bool("strip_punctuation", opts.strip_punctuation);
    opts.collapse_whitespace =
        cfg.param_bool("collapse_whitespace", opts.collapse_whitespace);
    opts.strip_articles = cfg.param_bool("strip_articles", opts.strip_articles);
    return opts;
}

ScoredExample from_outcome(const MetricConfig& cfg, const MetricInputs& in,
                           const JudgeOutcome& outcome) {
    ScoredExample scored = base_scored(cfg, in);
    scored.parse_failed = outcome.parse_failed;
    scored.score = outcome.parse_failed ? 0.0 : outcome.score;
    if (!outcome.detail.empty()) scored.detail = outcome.detail;
    return scored;
}

}  // namespace

ScoredExample score_metric(const MetricConfig& cfg, const MetricInputs& in) {
    const Example& ex = *in.example;
    const std::string& prediction = in.response->text;
    const std::string& question = ex.rendered_prompt;
    const NormalizationOptions opts = options_from(cfg);

    const bool wants_reference = metrics::needs_reference(cfg.name);
    const bool wants_contexts = metrics::needs_contexts(cfg.name);
    if (wants_reference && !ex.reference)
        return not_scorable(cfg, in, "metric requires a reference answer");
    if (wants_contexts && (!ex.contexts || ex.contexts->empty()))
        return not_scorable(cfg, in, "metric requires retrieved contexts");

    const std::string reference = ex.reference.value_or("");
    const std::vector<std::string> contexts =
        ex.contexts.value_or(std::vector<std::string>{});

    const std::string family = metrics::family_of(cfg.name);
    if ((family == "semantic" || cfg.name == "answer_relevance") && !in.embedder)
        return not_scorable(cfg, in, "metric requires an embedder");
    const bool judge_backed =
        family == "llm_judge" ||
        (family == "rag" && cfg.name != "answer_relevance");
    if (judge_backed && !in.judge)
        return not_scorable(cfg, in, "metric requires a judge engine");

    ScoredExample scored = base_scored(cfg, in);

    if (cfg.name == "exact_match") {
        scored.score = exact_match(prediction, reference, opts);
    } else if (cfg.name == "contains") {
        scored.score = contains_match(prediction, reference, opts);
    } else if (cfg.name == "token_f1") {
        scored.score = token_f1(prediction, reference, opts);
    } else if (cfg.name == "bleu") {
        scored.score = bleu(prediction, {reference},
                            static_cast<int>(cfg.param_int("max_n", 4)),
                            cfg.param_double("eps", 1e-9), opts);
    } else if (cfg.name == "rouge_l") {
        scored.score = rouge_l(prediction, reference, opts);
    } else if (cfg.name == "embedding_similarity") {
        try {
            scored.score = embedding_similarity(prediction, reference, *in.embedder);
        } catch (const std::exception& e) {
            return not_scorable(cfg, in, e.what());
        }
    } else if (cfg.name == "bertscore") {
        try {
            scored.score = bertscore_text(prediction, reference, *in.embedder, opts).f1;
        } catch (const std::exception& e) {
            return not_scorable(cfg, in, e.what());
        }
    } else if (cfg.name == "judge_pointwise") {
        const auto outcome = judge_pointwise(
            question, prediction,
            cfg.param_str("rubric", "overall quality of the answer"), *in.judge,
            static_cast<int>(cfg.param_int("scale_min", 1)),
            static_cast<int>(cfg.param_int("scale_max", 5)));
        return from_outcome(cfg, in, outcome);
    } else if (cfg.name == "judge_pairwise") {
        // Run-level pairwise: model answer as A, reference as B.
        const auto verdict = judge_pairwise(question, prediction, reference, *in.judge);
        if (verdict == PairwiseVerdict::unparsed)
            return not_scorable(cfg, in, "unparseable pairwise verdict");
        scored.score = verdict == PairwiseVerdict::A
                           ? 1.0
                           : (verdict == PairwiseVerdict::tie ? 0.5 : 0.0);
        scored.detail = to_string(verdict);
    } else if (cfg.name == "faithfulness") {
        return from_outcome(cfg, in, faithfulness(question, prediction, contexts, *in.judge));
    } else if (cfg.name == "context_relevance") {
        return from_outcome(cfg, in, context_relevance(question, contexts, *in.judge));
    } else if (cfg.name == "answer_relevance") {
        try {
            scored.score = answer_relevance(question, prediction, *in.embedder);
        } catch (const std::exception& e) {
            return not_scorable(cfg, in, e.what());
        }
    } else if (cfg.name == "context_precision") {
        return from_outcome(cfg, in, context_precision_judged(question, contexts, *in.judge));
    } else if (cfg.name == "context_recall") {
        return from_outcome(cfg, in, context_recall(contexts, reference, *in.judge));
    } else {
        return not_scorable(cfg, in, "unregistered metric " + cfg.name);
    }
    return scored;
}

}  // namespace evalforge
