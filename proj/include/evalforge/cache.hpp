/// @file cache.hpp
/// Content-addressable response cache: append-only segment files plus a
/// manifest under one directory, guarded by a lock file. Keys are
/// SHA-256 digests of a length-prefixed canonical request string.

#pragma once

#include <atomic>
#include <cstdint>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "evalforge/provider.hpp"

namespace evalforge {

/// Canonical key string: each field rendered as `<byte length>:<bytes>`,
/// in order prompt, model, provider, temperature (exactly 6 fractional
/// digits), max_tokens. Length prefixes make distinct field tuples
/// produce distinct strings.
std::string key_string(const std::string& prompt, const std::string& model_name,
                       const std::string& provider, double temperature,
                       int max_tokens);

/// Lowercase hex SHA-256 of key_string over the same fields.
std::string cache_key(const std::string& prompt, const std::string& model_name,
                      const std::string& provider, double temperature,
                      int max_tokens);

struct CacheEntry {
    std::string prompt_hash;
    std::string model_name;
    std::string provider;
    std::string prompt_text;
    std::string response_text;
    std::int64_t input_tokens = 0;
    std::int64_t output_tokens = 0;
    double latency_ms = 0.0;
    double created_at = 0.0;
    std::optional<std::int64_t> ttl_days;

    bool expired(double now) const {
        return ttl_days && created_at + static_cast<double>(*ttl_days) * 86400.0 < now;
    }
};

struct CacheStats {
    std::int64_t lookups = 0;
    std::int64_t hits = 0;
    std::int64_t misses = 0;
    std::int64_t writes = 0;
    std::int64_t expired_skips = 0;
};

/// One process owns the directory (lock file); within it, any number of
/// concurrent readers and one serialized writer. The in-memory index maps
/// key -> latest record location and is rebuilt by scanning segments on
/// open. Binary layout is documented in docs/cache-format.md.
class CacheStore {
public:
    /// Creates the directory if needed and takes the exclusive lock.
    /// Throws CacheError if another process holds it or on I/O failure.
    explicit CacheStore(const std::string& dir);
    ~CacheStore();

    CacheStore(const CacheStore&) = delete;
    CacheStore& operator=(const CacheStore&) = delete;

    /// Most recent non-expired entry, or nullopt. Thread-safe.
    std::optional<CacheEntry> lookup(const std::string& key, double now);

    /// Durable append; the entry becomes the latest for its key.
    void put(const CacheEntry& entry);

    /// Rewrites the store keeping only the latest non-expired entry per
    /// key. Returns the number of physical records dropped (superseded
    /// plus expired). Requires no concurrent readers or writers.
    std::int64_t purge_expired(double now);

    CacheStats stats() const;

    /// Session counters merged with any counters persisted by previous
    /// sessions (stats.json, written on close).
    CacheStats cumulative_stats() const;

    std::size_t live_entries() const;
    std::int64_t physical_records() const { return physical_records_; }
    const std::string& directory() const { return dir_; }

private:
    struct Location {
        std::size_t segment;
        std::uint64_t offset;
        std::uint32_t length;
    };

    void load_manifest();
    void write_manifest() const;
    void scan_segment(std::size_t segment_index);
    CacheEntry read_at(const Location& loc) const;
    std::string segment_path(const std::string& name) const;
    void open_appender();

    std::string dir_;
    int lock_fd_ = -1;
    std::vector<std::string> segments_;
    std::unordered_map<std::string, Location> index_;
    std::ofstream appender_;
    std::int64_t physical_records_ = 0;

    mutable std::shared_mutex index_mutex_;
    std::mutex write_mutex_;
    mutable std::atomic<std::int64_t> lookups_{0};
    mutable std::atomic<std::int64_t> hits_{0};
    mutable std::atomic<std::int64_t> misses_{0};
    mutable std::atomic<std::int64_t> writes_{0};
    mutable std::atomic<std::int64_t> expired_skips_{0};
    CacheStats persisted_;
};

/// Applies one of the five cache policies around a single inference.
///   enabled    lookup; on miss infer and write back
///   read_only  lookup; on miss infer, never write
///   write_only infer and write, never look up
///   replay     lookup; on miss return a cache_miss failure (no inference)
///   disabled   infer only, no store interaction
/// Cache hits come back with cached=true, cost=0, and the stored latency.
/// store may be null only under `disabled`.
InferenceResponse resolve(CachePolicy policy, CacheStore* store,
                          const ModelConfig& model, const InferenceRequest& request,
                          InferenceEngine& engine, double now_unix,
                          std::optional<std::int64_t> ttl_days = std::nullopt);

}  // namespace evalforge
