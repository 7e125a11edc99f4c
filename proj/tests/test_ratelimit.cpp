#include <deque>

#include "evalforge/clock.hpp"
#include "evalforge/ratelimit.hpp"
#include "helpers.hpp"

using namespace evalforge;

TEST_CASE("budget splits evenly across workers; burst is one request") {
    SimulatedClock clock;
    RateLimiter limiter(600.0, 90000.0, 4, clock);
    CHECK(limiter.request_limit() == doctest::Approx(150.0));
    CHECK(limiter.token_limit() == doctest::Approx(22500.0));
    CHECK(limiter.request_tokens() == doctest::Approx(1.0));
    CHECK(limiter.token_tokens() == doctest::Approx(22500.0));

    CHECK_THROWS_AS(RateLimiter(600.0, 90000.0, 0, clock), std::invalid_argument);
    CHECK_THROWS_AS(RateLimiter(3.0, 90000.0, 4, clock), std::invalid_argument);
    CHECK_THROWS_AS(RateLimiter(600.0, 2.0, 4, clock), std::invalid_argument);
}

TEST_CASE("a primed limiter grants once without waiting and debits both budgets") {
    SimulatedClock clock;
    RateLimiter limiter(60.0, 6000.0, 1, clock);
    const double wait = limiter.acquire(100.0);
    CHECK(wait == 0.0);
    CHECK(clock.now_seconds() == 0.0);
    CHECK(limiter.request_tokens() == doctest::Approx(0.0));
    CHECK(limiter.token_tokens() == doctest::Approx(5900.0));
}

TEST_CASE("an empty request bucket forces the refill wait") {
    SimulatedClock clock;
    RateLimiter limiter(60.0, 1e9, 1, clock);  // 1 request/second
    CHECK(limiter.acquire(1.0) == 0.0);
    // The single burst token is spent; the next grant waits a full second.
    const double wait = limiter.acquire(1.0);
    CHECK(wait == doctest::Approx(1.0));
    CHECK(clock.now_seconds() == doctest::Approx(1.0));
}

TEST_CASE("the token bucket can dip negative between debit and refill") {
    SimulatedClock clock;
    RateLimiter limiter(1e9, 600.0, 1, clock);  // 10 tokens/second
    CHECK(limiter.acquire(600.0) == 0.0);       // drain in one grant
    CHECK(limiter.token_tokens() == doctest::Approx(0.0));

    // Needs 50 tokens: waits 5 simulated seconds, then debits while the
    // refill credit lands only on the next acquire.
    const double wait = limiter.acquire(50.0);
    CHECK(wait == doctest::Approx(5.0));
    CHECK(limiter.token_tokens() == doctest::Approx(-50.0));

    const double wait2 = limiter.acquire(1.0);
    // Refill credits the 5 sleeping seconds (+50) before computing the
    // shortfall: bucket sits at 0, so one token costs 0.1 s.
    CHECK(wait2 == doctest::Approx(0.1));
    CHECK(limiter.token_tokens() >= -1.0 - 1e-9);
}

TEST_CASE("waits are proportional to the configured rates") {
    SimulatedClock clock;
    RateLimiter limiter(120.0, 1e9, 1, clock);  // 2 requests/second
    limiter.acquire(1.0);
    CHECK(limiter.acquire(1.0) == doctest::Approx(0.5));

    SimulatedClock tclock;
    RateLimiter tokens(1e9, 1200.0, 1, tclock);  // 20 tokens/second
    tokens.acquire(1200.0);
    CHECK(tokens.acquire(200.0) == doctest::Approx(10.0));
}

TEST_CASE("steady-state throughput converges to the configured rate") {
    SimulatedClock clock;
    RateLimiter limiter(600.0, 1e12, 1, clock);

    // Run for 10 simulated minutes, tracking grants in a sliding 60 s
    // window: one request of burst plus the 600/min refill caps every
    // window at 601.
    std::deque<double> window;
    std::int64_t max_in_window = 0;
    std::int64_t grants = 0;
    while (clock.now_seconds() < 600.0) {
        limiter.acquire(1.0);
        ++grants;
        const double now = clock.now_seconds();
        window.push_back(now);
        while (!window.empty() && window.front() <= now - 60.0) window.pop_front();
        max_in_window =
            std::max(max_in_window, static_cast<std::int64_t>(window.size()));
    }
    CHECK(max_in_window <= 601);
    CHECK(grants >= 600 * 10);

    // Post-burst: a fresh 60 s window should carry roughly r grants.
    std::int64_t steady = 0;
    for (const double t : window)
        if (t > clock.now_seconds() - 60.0) ++steady;
    CHECK(steady <= 601);
    CHECK(steady >= 599);
}

TEST_CASE("acquire rejects requests that can never fit") {
    SimulatedClock clock;
    RateLimiter limiter(60.0, 1000.0, 1, clock);
    CHECK_THROWS_AS(limiter.acquire(1001.0), std::invalid_argument);
    CHECK_THROWS_AS(limiter.acquire(-1.0), std::invalid_argument);
    CHECK_NOTHROW(limiter.acquire(1000.0));
}

TEST_CASE("token estimate is bytes over four plus the completion budget") {
    CHECK(estimate_tokens("", 100) == 100);
    CHECK(estimate_tokens("abcd", 100) == 101);
    CHECK(estimate_tokens("abcde", 100) == 102);  // ceil(5/4) = 2
    CHECK(estimate_tokens(std::string(400, 'x'), 16) == 116);
}

TEST_CASE("workers sharing a budget are independent but capacity-conserving") {
    const int workers = 8;
    const double rpm = 10000.0;
    std::vector<std::unique_ptr<SimulatedClock>> clocks;
    std::vector<std::unique_ptr<RateLimiter>> limiters;
    for (int w = 0; w < workers; ++w) {
        clocks.push_back(std::make_unique<SimulatedClock>());
        limiters.push_back(
            std::make_unique<RateLimiter>(rpm, 1e12, workers, *clocks[w]));
    }

    double per_worker_share = 0.0;
    for (const auto& limiter : limiters) per_worker_share += limiter->request_limit();
    CHECK(per_worker_share == doctest::Approx(rpm));

    // Each worker runs one simulated minute past a warm-up minute; the
    // fleet-wide steady-state grant rate must stay within the global cap.
    std::int64_t steady_grants = 0;
    for (int w = 0; w < workers; ++w) {
        auto& limiter = *limiters[w];
        auto& clock = *clocks[w];
        while (clock.now_seconds() < 60.0) limiter.acquire(1.0);  // warm up
        const double start = clock.now_seconds();
        while (clock.now_seconds() < start + 60.0) {
            limiter.acquire(1.0);
            ++steady_grants;
        }
    }
    CHECK(steady_grants <= static_cast<std::int64_t>(rpm) + workers);
    CHECK(steady_grants >= static_cast<std::int64_t>(rpm) - workers);
}
