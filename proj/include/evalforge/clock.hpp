#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <thread>

namespace evalforge {

/// Injected time source. Rate limiting, retry backoff, and latency
/// injection all run against this interface so tests and throughput
/// simulations can drive a virtual clock.
class Clock {
public:
    virtual ~Clock() = default;

    /// Monotonic time in seconds. Zero point is unspecified.
    virtual double now_seconds() = 0;

    /// Blocks for `seconds` (or advances a simulated clock by that much).
    virtual void sleep_for(double seconds) = 0;

    /// Wall-clock UNIX time in seconds (UTC), used for cache timestamps.
    virtual std::int64_t unix_seconds() = 0;
};

class SystemClock final : public Clock {
public:
    double now_seconds() override {
        using namespace std::chrono;
        return duration<double>(steady_clock::now().time_since_epoch()).count();
    }

    void sleep_for(double seconds) override {
        if (seconds <= 0) return;
        std::this_thread::sleep_for(std::chrono::duration<double>(seconds));
    }

    std::int64_t unix_seconds() override {
        using namespace std::chrono;
        return duration_cast<std::chrono::seconds>(
                   system_clock::now().time_since_epoch())
            .count();
    }
};

/// Virtual clock: sleep() advances time instantly. Confined to one worker
/// (not thread-safe by design; each simulated worker owns its own clock).
class SimulatedClock final : public Clock {
public:
    explicit SimulatedClock(double start = 0.0) : now_(start) {}

    double now_seconds() override { return now_; }

    void sleep_for(double seconds) override {
        if (seconds > 0) now_ += seconds;
    }

    std::int64_t unix_seconds() override {
        return static_cast<std::int64_t>(now_);
    }

    void advance(double seconds) { now_ += seconds; }

private:
    double now_;
};

}  // namespace evalforge
