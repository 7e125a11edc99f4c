#include <algorithm>
#include <stdexcept>

#include "evalforge/metrics.hpp"

namespace evalforge {

double embedding_similarity(const std::string& pred, const std::string& ref,
                            Embedder& embedder) {
    return cosine_similarity(embedder.embed(pred), embedder.embed(ref));
}

BertScore bertscore(const std::vector<Embedding>& pred_tokens,
                    const std::vector<Embedding>& ref_tokens) {
    if (pred_tokens.empty() || ref_tokens.empty())
        throw std::invalid_argument("bertscore requires non-empty token lists");

    auto best_against = [](const Embedding& probe,
                           const std::vector<Embedding>& pool) {
        double best = -1.0;
        for (const auto& candidate : pool)
            best = std::max(best, cosine_similarity(probe, candidate));
        return best;
    };

    BertScore s;
    for (const auto& t : ref_tokens) s.recall += best_against(t, pred_tokens);
    s.recall /= static_cast<double>(ref_tokens.size());
    for (const auto& t : pred_tokens) s.precision += best_against(t, ref_tokens);
    s.precision /= static_cast<double>(pred_tokens.size());
    s.f1 = (s.precision + s.recall) == 0.0
               ? 0.0
               : 2.0 * s.precision * s.recall / (s.precision + s.recall);
    return s;
}

BertScore bertscore_text(const std::string& pred, const std::string& ref,
                         Embedder& embedder, const NormalizationOptions& opts) {
    const auto pred_tokens = tokenize(pred, opts);
    const auto ref_tokens = tokenize(ref, opts);
    if (pred_tokens.empty() || ref_tokens.empty())
        throw std::invalid_argument("bertscore requires non-empty token lists");
    return bertscore(embedder.embed_tokens(pred_tokens),
                     embedder.embed_tokens(ref_tokens));
}

}  // namespace evalforge
