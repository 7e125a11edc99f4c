#include <cctype>
#include <regex>
#include <sstream>
#include <stdexcept>

#include "evalforge/metrics.hpp"

namespace evalforge {

namespace {

InferenceResponse ask(InferenceEngine& judge, const std::string& prompt) {
    InferenceRequest request;
    request.prompt = prompt;
    request.temperature = 0.0;
    request.max_tokens = 1024;
    request.request_id = "judge";
    return judge.infer(request);
}

JudgeOutcome failed(std::string reason) {
    JudgeOutcome out;
    out.parse_failed = true;
    out.detail = std::move(reason);
    return out;
}

std::string join_contexts(const std::vector<std::string>& contexts) {
    std::string out;
    for (std::size_t i = 0; i < contexts.size(); ++i) {
        if (i) out += "\n";
        out += contexts[i];
    }
    return out;
}

}  // namespace

std::string to_string(PairwiseVerdict v) {
    switch (v) {
        case PairwiseVerdict::A: return "A";
        case PairwiseVerdict::B: return "B";
        case PairwiseVerdict::tie: return "tie";
        case PairwiseVerdict::unparsed: return "unparsed";
    }
    return "?";
}

std::string judge_pointwise_prompt(const std::string& question,
                                   const std::string& answer,
                                   const std::string& rubric, int scale_min,
                                   int scale_max) {
    std::ostringstream out;
    out << "You are grading an answer.\n"
        << "Rubric: " << rubric << "\n"
        << "Question:\n" << question << "\n"
        << "Answer:\n" << answer << "\n"
        << "Respond with 'Score: <n>' where <n> is an integer from "
        << scale_min << " to " << scale_max << ", then an explanation.";
    return out.str();
}

std::string judge_pairwise_prompt(const std::string& question,
                                  const std::string& answer_a,
                                  const std::string& answer_b) {
    std::ostringstream out;
    out << "You are comparing two answers to the same question.\n"
        << "Question:\n" << question << "\n"
        << "Answer A:\n" << answer_a << "\n"
        << "Answer B:\n" << answer_b << "\n"
        << "Respond with 'Verdict: A', 'Verdict: B', or 'Verdict: Tie', "
        << "then an explanation.";
    return out.str();
}

std::string claim_extraction_prompt(const std::string& text) {
    std::ostringstream out;
    out << "List every factual claim made in the text below as a numbered "
        << "list, one claim per line, formatted '1. <claim>'.\n"
        << "Text:\n" << text;
    return out.str();
}

std::string claim_check_prompt(const std::string& claim,
                               const std::string& context_text) {
    std::ostringstream out;
    out << "Context:\n" << context_text << "\n"
        << "Claim: " << claim << "\n"
        << "Is the claim supported by the context? Respond with exactly one "
        << "word: supported or unsupported.";
    return out.str();
}

std::string chunk_relevance_prompt(const std::string& question,
                                   const std::string& chunk) {
    std::ostringstream out;
    out << "You are grading a retrieved passage.\n"
        << "Rubric: relevance of the passage to the question\n"
        << "Question:\n" << question << "\n"
        << "Passage:\n" << chunk << "\n"
        << "Respond with 'Score: <n>' where <n> is an integer from 1 to 5, "
        << "then an explanation.";
    return out.str();
}

std::optional<int> extract_judge_score(const std::string& text, int scale_min,
                                       int scale_max) {
    if (scale_min >= scale_max)
        throw std::invalid_argument("scale_min must be < scale_max");
    static const std::regex pattern(R"(Score\s*[:=]?\s*(\d+))",
                                    std::regex::icase);
    std::smatch match;
    if (!std::regex_search(text, match, pattern)) return std::nullopt;
    const long value = std::strtol(match[1].str().c_str(), nullptr, 10);
    if (value < scale_min || value > scale_max) return std::nullopt;
    return static_cast<int>(value);
}

JudgeOutcome judge_pointwise(const std::string& question, const std::string& answer,
                             const std::string& rubric, InferenceEngine& judge,
                             int scale_min, int scale_max) {
    const auto response =
        ask(judge, judge_pointwise_prompt(question, answer, rubric, scale_min, scale_max));
    if (!response.ok())
        return failed("judge inference failed: " + response.error->message);
    const auto score = extract_judge_score(response.text, scale_min, scale_max);
    if (!score) return failed("unparseable judge reply: " + response.text);
    JudgeOutcome out;
    out.score = static_cast<double>(*score - scale_min) /
                static_cast<double>(scale_max - scale_min);
    out.detail = response.text;
    return out;
}

PairwiseVerdict judge_pairwise(const std::string& question,
                               const std::string& answer_a,
                               const std::string& answer_b,
                               InferenceEngine& judge) {
    const auto response = ask(judge, judge_pairwise_prompt(question, answer_a, answer_b));
    if (!response.ok()) return PairwiseVerdict::unparsed;
    static const std::regex pattern(R"(Verdict\s*[:=]?\s*(A|B|Tie))",
                                    std::regex::icase);
    std::smatch match;
    if (!std::regex_search(response.text, match, pattern))
        return PairwiseVerdict::unparsed;
    const std::string v = match[1].str();
    if (v == "A" || v == "a") return PairwiseVerdict::A;
    if (v == "B" || v == "b") return PairwiseVerdict::B;
    return PairwiseVerdict::tie;
}

std::vector<std::string> parse_numbered_list(const std::string& text) {
    std::vector<std::string> items;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::size_t i = 0;
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        std::size_t digits = i;
        while (digits < line.size() &&
               std::isdigit(static_cast<unsigned char>(line[digits])))
            ++digits;
        if (digits == i || digits >= line.size()) continue;
        if (line[digits] != '.' && line[digits] != ')') continue;
        std::size_t start = digits + 1;
        while (start < line.size() &&
               std::isspace(static_cast<unsigned char>(line[start])))
            ++start;
        if (start < line.size()) items.push_back(line.substr(start));
    }
    return items;
}

namespace {

/// Shared claim loop for faithfulness and context_recall: extract claims
/// from `source`, verify each against the contexts, return the supported
/// fraction.
JudgeOutcome claim_support_ratio(const std::string& source,
                                 const std::vector<std::string>& contexts,
                                 InferenceEngine& judge) {
    const auto extraction = ask(judge, claim_extraction_prompt(source));
    if (!extraction.ok())
        return failed("judge inference failed: " + extraction.error->message);
    const auto claims = parse_numbered_list(extraction.text);
    if (claims.empty()) return failed("no claims parsed from: " + extraction.text);

    const std::string context_text = join_contexts(contexts);
    int supported = 0;
    for (const auto& claim : claims) {
        const auto verdict = ask(judge, claim_check_prompt(claim, context_text));
        if (!verdict.ok())
            return failed("judge inference failed: " + verdict.error->message);
        std::string lowered = verdict.text;
        for (char& c : lowered)
            c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        if (lowered.find("unsupported") != std::string::npos) {
            // counted as not supported
        } else if (lowered.find("supported") != std::string::npos) {
            ++supported;
        } else {
            return failed("unparseable verification reply: " + verdict.text);
        }
    }
    JudgeOutcome out;
    out.score = static_cast<double>(supported) / static_cast<double>(claims.size());
    out.detail = std::to_string(supported) + "/" + std::to_string(claims.size()) +
                 " claims supported";
    return out;
}

}  // namespace

JudgeOutcome faithfulness(const std::string& question, const std::string& answer,
                          const std::vector<std::string>& contexts,
                          InferenceEngine& judge) {
    static_cast<void>(question);
    if (contexts.empty()) return failed("no contexts provided");
    return claim_support_ratio(answer, contexts, judge);
}

JudgeOutcome context_relevance(const std::string& question,
                               const std::vector<std::string>& contexts,
                               InferenceEngine& judge) {
    if (contexts.empty()) return failed("no contexts provided");
    return judge_pointwise(question, join_contexts(contexts),
                           "relevance of the context to the question", judge, 1, 5);
}

double answer_relevance(const std::string& question, const std::string& answer,
                        Embedder& embedder) {
    return cosine_similarity(embedder.embed(question), embedder.embed(answer));
}

double context_precision(const std::vector<int>& chunk_relevance) {
    if (chunk_relevance.empty())
        throw std::invalid_argument("context_precision requires a non-empty list");
    double sum = 0.0;
    int relevant_seen = 0;
    int relevant_positions = 0;
    for (std::size_t k = 0; k < chunk_relevance.size(); ++k) {
        if (chunk_relevance[k]) {
            ++relevant_seen;
            ++relevant_positions;
            sum += static_cast<double>(relevant_seen) / static_cast<double>(k + 1);
        }
    }
    return relevant_positions == 0 ? 0.0 : sum / relevant_positions;
}

JudgeOutcome context_precision_judged(const std::string& question,
                                      const std::vector<std::string>& contexts,
                                      InferenceEngine& judge) {
    if (contexts.empty()) return failed("no contexts provided");
    std::vector<int> relevance;
    relevance.reserve(contexts.size());
    for (const auto& chunk : contexts) {
        const auto response = ask(judge, chunk_relevance_prompt(question, chunk));
        if (!response.ok())
            return failed("judge inference failed: " + response.error->message);
        const auto score = extract_judge_score(response.text, 1, 5);
        if (!score) return failed("unparseable judge reply: " + response.text);
        const double rescaled = (*score - 1) / 4.0;
        relevance.push_back(rescaled >= 0.5 ? 1 : 0);
    }
    JudgeOutcome out;
    out.score = context_precision(relevance);
    return out;
}

JudgeOutcome context_recall(const std::vector<std::string>& contexts,
                            const std::string& ground_truth,
                            InferenceEngine& judge) {
    if (contexts.empty()) return failed("no contexts provided");
    if (ground_truth.empty()) return failed("no ground truth provided");
    auto out = claim_support_ratio(ground_truth, contexts, judge);
    if (!out.parse_failed)
        out.detail += " (attributable to context)";
    return out;
}

}  // namespace evalforge
