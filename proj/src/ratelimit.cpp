#include "evalforge/ratelimit.hpp"

#include <algorithm>
#include <stdexcept>

namespace evalforge {

namespace {
/// Request-bucket capacity. One request of burst keeps any sliding 60 s
/// window at r + 1 grants or fewer regardless of the request pattern; a
/// full-capacity bucket would allow ~2r in the window covering a cold
/// start or an idle gap.
constexpr double kRequestBurst = 1.0;
}  // namespace

RateLimiter::RateLimiter(double rpm_global, double tpm_global, int num_workers,
                         Clock& clock)
    : clock_(clock) {
    if (num_workers < 1) throw std::invalid_argument("num_workers must be >= 1");
    if (rpm_global < num_workers)
        throw std::invalid_argument("rpm limit below one request/min per worker");
    if (tpm_global < num_workers)
        throw std::invalid_argument("tpm limit below one token/min per worker");
    r_ = rpm_global / num_workers;
    t_ = tpm_global / num_workers;
    request_tokens_ = kRequestBurst;
    token_tokens_ = t_;
    last_update_ = clock_.now_seconds();
}

void RateLimiter::refill() {
    const double now = clock_.now_seconds();
    const double elapsed = now - last_update_;
    if (elapsed > 0) {
        request_tokens_ =
            std::min(kRequestBurst, request_tokens_ + elapsed * r_ / 60.0);
        token_tokens_ = std::min(t_, token_tokens_ + elapsed * t_ / 60.0);
    }
    last_update_ = now;
}

double RateLimiter::acquire(double estimated_tokens) {
    if (estimated_tokens < 0)
        throw std::invalid_argument("estimated_tokens must be >= 0");
    if (estimated_tokens > t_)
        throw std::invalid_argument(
            "estimated request size exceeds the per-worker token capacity; "
            "the request can never be satisfied");

    refill();

    double wait = 0.0;
    if (request_tokens_ < 1.0)
        wait = std::max(wait, (1.0 - request_tokens_) * 60.0 / r_);
    if (token_tokens_ < estimated_tokens)
        wait = std::max(wait, (estimated_tokens - token_tokens_) * 60.0 / t_);

    // The sleep is not credited here; the next acquire's refill covers it
    // (last_update_ stays at the pre-sleep timestamp). Buckets may sit
    // slightly negative between the debit and that refill.
    if (wait > 0) clock_.sleep_for(wait);
    request_tokens_ -= 1.0;
    token_tokens_ -= estimated_tokens;
    return wait;
}

std::int64_t estimate_tokens(const std::string& prompt, int max_tokens) {
    const auto bytes = static_cast<std::int64_t>(prompt.size());
    return (bytes + 3) / 4 + max_tokens;
}

}  // namespace evalforge
