/// @file metrics.hpp
/// Per-example scorers for the four metric families: lexical string
/// metrics, embedding-based semantic metrics, LLM-as-judge metrics, and
/// RAG metrics. Scorers are pure given fixed judge/embedder behavior.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "evalforge/config.hpp"
#include "evalforge/dataset.hpp"
#include "evalforge/embedder.hpp"
#include "evalforge/provider.hpp"

namespace evalforge {

struct NormalizationOptions {
    bool lowercase = true;
    bool strip_punctuation = true;
    bool collapse_whitespace = true;
    bool strip_articles = true;
};

/// Transform order: lowercase (ASCII), strip Unicode-category-P
/// punctuation, strip English articles (a/an/the as whole tokens),
/// collapse whitespace runs to single spaces and trim.
std::string normalize_text(const std::string& s, const NormalizationOptions& opts = {});

/// Whitespace tokens of the normalized text.
std::vector<std::string> tokenize(const std::string& s,
                                  const NormalizationOptions& opts = {});

double exact_match(const std::string& pred, const std::string& ref,
                   const NormalizationOptions& opts = {});

double contains_match(const std::string& pred, const std::string& ref,
                      const NormalizationOptions& opts = {});

/// Multiset token overlap F1 (SQuAD convention). Both empty -> 1,
/// exactly one empty -> 0.
double token_f1(const std::string& pred, const std::string& ref,
                const NormalizationOptions& opts = {});

/// Sentence BLEU: per-reference clipped modified precisions, geometric
/// mean over n=1..max_n, brevity penalty exp(1-r/c) for c<r with r the
/// closest reference length (ties to the shorter). Zero precisions are
/// floored at eps inside the log-mean, as are orders with no n-grams.
double bleu(const std::string& pred, const std::vector<std::string>& refs,
            int max_n = 4, double eps = 1e-9,
            const NormalizationOptions& opts = {});

/// LCS F1 over normalized token sequences.
double rouge_l(const std::string& pred, const std::string& ref,
               const NormalizationOptions& opts = {});

/// Raw cosine between sentence embeddings.
double embedding_similarity(const std::string& pred, const std::string& ref,
                            Embedder& embedder);

struct BertScore {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

/// Greedy max-cosine matching, no idf weighting: recall averages each
/// reference token's best match among prediction tokens; precision is
/// symmetric. Throws std::invalid_argument on empty token lists.
BertScore bertscore(const std::vector<Embedding>& pred_tokens,
                    const std::vector<Embedding>& ref_tokens);

BertScore bertscore_text(const std::string& pred, const std::string& ref,
                         Embedder& embedder,
                         const NormalizationOptions& opts = {});

/// First match of `Score\s*[:=]?\s*(\d+)` (case-insensitive); absent when
/// nothing matches or the matched value falls outside the scale.
std::optional<int> extract_judge_score(const std::string& text, int scale_min,
                                       int scale_max);

struct JudgeOutcome {
    double score = 0.0;
    bool parse_failed = false;
    std::string detail;
};

enum class PairwiseVerdict { A, B, tie, unparsed };

std::string to_string(PairwiseVerdict v);

/// Prompt templates (judge-prompts v1). Kept as code so tests can pin
/// exact strings.
std::string judge_pointwise_prompt(const std::string& question,
                                   const std::string& answer,
                                   const std::string& rubric, int scale_min,
                                   int scale_max);
std::string judge_pairwise_prompt(const std::string& question,
                                  const std::string& answer_a,
                                  const std::string& answer_b);
std::string claim_extraction_prompt(const std::string& text);
std::string claim_check_prompt(const std::string& claim,
                               const std::string& context_text);
std::string chunk_relevance_prompt(const std::string& question,
                                   const std::string& chunk);

/// Rubric-scored judgment rescaled to [0,1] via (score-min)/(max-min).
JudgeOutcome judge_pointwise(const std::string& question, const std::string& answer,
                             const std::string& rubric, InferenceEngine& judge,
                             int scale_min = 1, int scale_max = 5);

PairwiseVerdict judge_pairwise(const std::string& question,
                               const std::string& answer_a,
                               const std::string& answer_b,
                               InferenceEngine& judge);

/// Lines of the form `<n>. text` (or `<n>) text`) parsed from a judge's
/// numbered-list reply.
std::vector<std::string> parse_numbered_list(const std::string& text);

/// Claim extraction then per-claim verification against the joined
/// contexts; score = supported/total. Zero parsed claims or any
/// unparseable verification -> parse_failed.
JudgeOutcome faithfulness(const std::string& question, const std::string& answer,
                          const std::vector<std::string>& contexts,
                          InferenceEngine& judge);

/// Pointwise 1-5 grading of the joined contexts against the question.
JudgeOutcome context_relevance(const std::string& question,
                               const std::vector<std::string>& contexts,
                               InferenceEngine& judge);

/// Cosine between question and answer embeddings.
double answer_relevance(const std::string& question, const std::string& answer,
                        Embedder& embedder);

/// Mean of precision@k over positions k holding a relevant chunk; 0 when
/// nothing is relevant. Throws std::invalid_argument on an empty list.
double context_precision(const std::vector<int>& chunk_relevance);

/// Judges each chunk's relevance to the question (relevant when the
/// rescaled grade is >= 0.5), then applies context_precision.
JudgeOutcome context_precision_judged(const std::string& question,
                                      const std::vector<std::string>& contexts,
                                      InferenceEngine& judge);

/// Claims extracted from the ground truth, each checked for support by
/// the contexts; score = attributable/total.
JudgeOutcome context_recall(const std::vector<std::string>& contexts,
                            const std::string& ground_truth,
                            InferenceEngine& judge);

struct ScoredExample {
    std::string example_id;
    std::string metric_name;
    double score = 0.0;
    std::optional<std::string> detail;
    bool parse_failed = false;
};

/// Everything a registry-dispatched scorer may need. judge/embedder may
/// be null for families that do not use them.
struct MetricInputs {
    const Example* example = nullptr;
    const InferenceResponse* response = nullptr;
    InferenceEngine* judge = nullptr;
    Embedder* embedder = nullptr;
};

/// Scores one example under the named metric. Missing requirements
/// (reference, contexts, judge, embedder) surface as parse_failed with a
/// reason in detail rather than exceptions, so one bad example cannot
/// abort a run.
ScoredExample score_metric(const MetricConfig& cfg, const MetricInputs& in);

}  // namespace evalforge
