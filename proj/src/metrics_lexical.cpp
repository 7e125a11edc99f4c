#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>

#include "evalforge/metrics.hpp"

namespace evalforge {

namespace {

#include "unicode_punct.inc"

bool is_punct(std::uint32_t cp) {
    std::size_t lo = 0, hi = std::size(kPunctRanges);
    while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (cp < kPunctRanges[mid][0])
            hi = mid;
        else if (cp > kPunctRanges[mid][1])
            lo = mid + 1;
        else
            return true;
    }
    return false;
}

/// Decodes one UTF-8 sequence at s[i]; malformed bytes pass through as
/// single-byte codepoints.
std::pair<std::uint32_t, std::size_t> decode_utf8(const std::string& s, std::size_t i) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    std::size_t len;
    std::uint32_t cp;
    if (b0 < 0x80) return {b0, 1};
    if ((b0 & 0xE0) == 0xC0) {
        len = 2;
        cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
        len = 3;
        cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
        len = 4;
        cp = b0 & 0x07;
    } else {
        return {b0, 1};
    }
    if (i + len > s.size()) return {b0, 1};
    for (std::size_t k = 1; k < len; ++k) {
        const auto bk = static_cast<unsigned char>(s[i + k]);
        if ((bk & 0xC0) != 0x80) return {b0, 1};
        cp = (cp << 6) | (bk & 0x3F);
    }
    return {cp, len};
}

bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

std::string strip_articles_stage(const std::string& s) {
    std::string out;
    std::size_t i = 0;
    while (i < s.size()) {
        if (is_space(s[i])) {
            out += s[i++];
            continue;
        }
        std::size_t j = i;
        while (j < s.size() && !is_space(s[j])) ++j;
        const std::string token = s.substr(i, j - i);
        if (token != "a" && token != "an" && token != "the") out += token;
        i = j;
    }
    return out;
}

std::string collapse_stage(const std::string& s) {
    std::string out;
    bool pending_space = false;
    for (char c : s) {
        if (is_space(c)) {
            pending_space = !out.empty();
        } else {
            if (pending_space) out += ' ';
            pending_space = false;
            out += c;
        }
    }
    return out;
}

using Counts = std::map<std::vector<std::string>, std::int64_t>;

Counts ngram_counts(const std::vector<std::string>& tokens, int n) {
    Counts counts;
    if (static_cast<int>(tokens.size()) < n) return counts;
    for (std::size_t i = 0; i + n <= tokens.size(); ++i)
        ++counts[std::vector<std::string>(tokens.begin() + i, tokens.begin() + i + n)];
    return counts;
}

}  // namespace

std::string normalize_text(const std::string& s, const NormalizationOptions& opts) {
    std::string out;
    out.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
        auto [cp, len] = decode_utf8(s, i);
        if (opts.strip_punctuation && is_punct(cp)) {
            i += len;
            continue;
        }
        if (opts.lowercase && cp >= 'A' && cp <= 'Z') {
            out += static_cast<char>(cp + 32);
        } else {
            out.append(s, i, len);
        }
        i += len;
    }
    if (opts.strip_articles) out = strip_articles_stage(out);
    if (opts.collapse_whitespace) out = collapse_stage(out);
    return out;
}

std::vector<std::string> tokenize(const std::string& s, const NormalizationOptions& opts) {
    const std::string norm = normalize_text(s, opts);
    std::vector<std::string> tokens;
    std::size_t i = 0;
    while (i < norm.size()) {
        if (is_space(norm[i])) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < norm.size() && !is_space(norm[j])) ++j;
        tokens.push_back(norm.substr(i, j - i));
        i = j;
    }
    return tokens;
}

double exact_match(const std::string& pred, const std::string& ref,
                   const NormalizationOptions& opts) {
    return normalize_text(pred, opts) == normalize_text(ref, opts) ? 1.0 : 0.0;
}

double contains_match(const std::string& pred, const std::string& ref,
                      const NormalizationOptions& opts) {
    return normalize_text(pred, opts).find(normalize_text(ref, opts)) !=
                   std::string::npos
               ? 1.0
               : 0.0;
}

double token_f1(const std::string& pred, const std::string& ref,
                const NormalizationOptions& opts) {
    const auto pred_tokens = tokenize(pred, opts);
    const auto ref_tokens = tokenize(ref, opts);
    if (pred_tokens.empty() && ref_tokens.empty()) return 1.0;
    if (pred_tokens.empty() || ref_tokens.empty()) return 0.0;

    std::map<std::string, std::int64_t> ref_counts;
    for (const auto& t : ref_tokens) ++ref_counts[t];
    std::int64_t overlap = 0;
    for (const auto& t : pred_tokens) {
        auto it = ref_counts.find(t);
        if (it != ref_counts.end() && it->second > 0) {
            ++overlap;
            --it->second;
        }
    }
    if (overlap == 0) return 0.0;
    const double precision = static_cast<double>(overlap) / pred_tokens.size();
    const double recall = static_cast<double>(overlap) / ref_tokens.size();
    return 2.0 * precision * recall / (precision + recall);
}

double bleu(const std::string& pred, const std::vector<std::string>& refs, int max_n,
            double eps, const NormalizationOptions& opts) {
    if (max_n < 1) throw std::invalid_argument("max_n must be >= 1");
    const auto pred_tokens = tokenize(pred, opts);
    if (pred_tokens.empty()) return 0.0;
    std::vector<std::vector<std::string>> ref_tokens;
    for (const auto& ref : refs) ref_tokens.push_back(tokenize(ref, opts));
    if (ref_tokens.empty()) return 0.0;

    const auto c = static_cast<std::int64_t>(pred_tokens.size());
    std::int64_t r = static_cast<std::int64_t>(ref_tokens[0].size());
    for (const auto& rt : ref_tokens) {
        const auto len = static_cast<std::int64_t>(rt.size());
        const auto gap = std::llabs(len - c);
        const auto best = std::llabs(r - c);
        if (gap < best || (gap == best && len < r)) r = len;
    }

    double log_sum = 0.0;
    for (int n = 1; n <= max_n; ++n) {
        const Counts pred_counts = ngram_counts(pred_tokens, n);
        Counts max_ref_counts;
        for (const auto& rt : ref_tokens)
            for (const auto& [gram, count] : ngram_counts(rt, n))
                max_ref_counts[gram] = std::max(max_ref_counts[gram], count);

        std::int64_t clipped = 0, total = 0;
        for (const auto& [gram, count] : pred_counts) {
            total += count;
            auto it = max_ref_counts.find(gram);
            if (it != max_ref_counts.end()) clipped += std::min(count, it->second);
        }
        const double p_n =
            (total == 0 || clipped == 0) ? eps
                                         : static_cast<double>(clipped) / total;
        log_sum += std::log(p_n);
    }

    const double bp = c < r ? std::exp(1.0 - static_cast<double>(r) / c) : 1.0;
    return bp * std::exp(log_sum / max_n);
}

double rouge_l(const std::string& pred, const std::string& ref,
               const NormalizationOptions& opts) {
    const auto pred_tokens = tokenize(pred, opts);
    const auto ref_tokens = tokenize(ref, opts);
    if (pred_tokens.empty() && ref_tokens.empty()) return 1.0;
    if (pred_tokens.empty() || ref_tokens.empty()) return 0.0;

    const std::size_t n = pred_tokens.size(), m = ref_tokens.size();
    std::vector<std::int64_t> prev(m + 1, 0), cur(m + 1, 0);
    for (std::size_t i = 1; i <= n; ++i) {
        for (std::size_t j = 1; j <= m; ++j) {
            cur[j] = pred_tokens[i - 1] == ref_tokens[j - 1]
                         ? prev[j - 1] + 1
                         : std::max(prev[j], cur[j - 1]);
        }
        std::swap(prev, cur);
    }
    const auto lcs = static_cast<double>(prev[m]);
    if (lcs == 0) return 0.0;
    const double precision = lcs / n;
    const double recall = lcs / m;
    return 2.0 * precision * recall / (precision + recall);
}

}  // namespace evalforge
