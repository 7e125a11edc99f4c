/// @file ratelimit.hpp
/// Per-worker token-bucket rate limiter bounding both requests/min and
/// tokens/min. Each worker holds an independent limiter with 1/E of the
/// global budget; there is no cross-worker redistribution.

#pragma once

#include <cstdint>
#include <string>

#include "evalforge/clock.hpp"

namespace evalforge {

class RateLimiter {
public:
    /// Splits the global limits evenly: r = rpm_global/num_workers,
    /// t = tpm_global/num_workers (real division, capacity conserved).
    /// The token bucket starts full at capacity t; the request bucket is
    /// capped at one request of burst, so any sliding 60 s window carries
    /// at most r + 1 grants for any request pattern. Throws
    /// std::invalid_argument on zero workers or limits below one per
    /// worker.
    RateLimiter(double rpm_global, double tpm_global, int num_workers, Clock& clock);

    /// Refills both buckets from elapsed time, waits out any shortfall on
    /// the injected clock, then debits one request and estimated_tokens
    /// tokens. Returns the wait in seconds. The sleep happens before the
    /// debit with no second refill, so long sleeps slightly over-wait.
    /// Throws std::invalid_argument when estimated_tokens exceeds the
    /// per-worker token capacity (the request could never be satisfied).
    double acquire(double estimated_tokens);

    double request_limit() const { return r_; }
    double token_limit() const { return t_; }
    double request_tokens() const { return request_tokens_; }
    double token_tokens() const { return token_tokens_; }

private:
    void refill();

    double r_;
    double t_;
    double request_tokens_;
    double token_tokens_;
    double last_update_;
    Clock& clock_;
};

/// Deterministic request-size estimate: ceil(prompt_bytes/4) + max_tokens.
std::int64_t estimate_tokens(const std::string& prompt, int max_tokens);

}  // namespace evalforge
