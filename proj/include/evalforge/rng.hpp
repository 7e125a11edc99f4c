#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace evalforge {

/// Seedable random source with exact, documented draw contracts so that
/// every randomized procedure is bit-reproducible given (seed, call order)
/// regardless of the standard library in use.
///
/// Generator: std::mt19937_64 (bit-identical output across platforms).
/// Distributions are implemented here rather than via <random> adapters,
/// which the standard leaves implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    /// Derives an independent stream for a simulation replicate: the master
    /// seed and stream id are mixed through SplitMix64 so parallel Monte
    /// Carlo replicates get decorrelated, reproducible generators.
    static Rng stream(std::uint64_t master_seed, std::uint64_t stream_id) {
        std::uint64_t x = master_seed + 0x9e3779b97f4a7c15ULL * (stream_id + 1);
        return Rng(splitmix64(x));
    }

    std::uint64_t next_u64() { return gen_(); }

    /// Uniform double in [0, 1): top 53 bits of the raw draw, scaled.
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [0, n). Threshold rejection removes modulo bias;
    /// the exact draw sequence is part of the reproducibility contract.
    std::uint64_t uniform_int(std::uint64_t n) {
        const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
        for (;;) {
            const std::uint64_t x = next_u64();
            if (x >= threshold) return x % n;
        }
    }

    bool bernoulli(double p) { return uniform() < p; }

    /// Standard normal via Marsaglia polar; the second deviate is cached.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double m = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * m;
        has_spare_ = true;
        return u * m;
    }

    double lognormal(double mu, double sigma) {
        return std::exp(mu + sigma * normal());
    }

    double exponential(double rate = 1.0) {
        // -log(1-u) keeps the argument strictly positive.
        return -std::log(1.0 - uniform()) / rate;
    }

private:
    static std::uint64_t splitmix64(std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace evalforge
