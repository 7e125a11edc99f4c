#include "evalforge/cache.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>

#include "evalforge/errors.hpp"
#include "evalforge/sha256.hpp"
#include <json.hpp>

namespace evalforge {

namespace fs = std::filesystem;
using nlohmann::json;

std::string key_string(const std::string& prompt, const std::string& model_name,
                       const std::string& provider, double temperature,
                       int max_tokens) {
    char temp_buf[64];
    std::snprintf(temp_buf, sizeof(temp_buf), "%.6f", temperature);
    const std::string fields[] = {prompt, model_name, provider, temp_buf,
                                  std::to_string(max_tokens)};
    std::string out;
    for (const auto& f : fields) {
        out += std::to_string(f.size());
        out += ':';
        out += f;
    }
    return out;
}

std::string cache_key(const std::string& prompt, const std::string& model_name,
                      const std::string& provider, double temperature,
                      int max_tokens) {
    return sha256_hex(key_string(prompt, model_name, provider, temperature, max_tokens));
}

namespace {

constexpr const char* kManifestName = "manifest";
constexpr const char* kManifestHeader = "evalforge-cache v1";
constexpr const char* kLockName = "LOCK";
constexpr const char* kStatsName = "stats.json";

void append_u32(std::string& buf, std::uint32_t v) {
    char bytes[4];
    std::memcpy(bytes, &v, 4);
    buf.append(bytes, 4);
}

void append_i64(std::string& buf, std::int64_t v) {
    char bytes[8];
    std::memcpy(bytes, &v, 8);
    buf.append(bytes, 8);
}

void append_f64(std::string& buf, double v) {
    char bytes[8];
    std::memcpy(bytes, &v, 8);
    buf.append(bytes, 8);
}

void append_str(std::string& buf, const std::string& s) {
    append_u32(buf, static_cast<std::uint32_t>(s.size()));
    buf += s;
}

class PayloadReader {
public:
    PayloadReader(const char* data, std::size_t size) : data_(data), size_(size) {}

    std::uint32_t u32() {
        need(4);
        std::uint32_t v;
        std::memcpy(&v, data_ + pos_, 4);
        pos_ += 4;
        return v;
    }

    std::int64_t i64() {
        need(8);
        std::int64_t v;
        std::memcpy(&v, data_ + pos_, 8);
        pos_ += 8;
        return v;
    }

    double f64() {
        need(8);
        double v;
        std::memcpy(&v, data_ + pos_, 8);
        pos_ += 8;
        return v;
    }

    std::string str() {
        const std::uint32_t len = u32();
        need(len);
        std::string s(data_ + pos_, len);
        pos_ += len;
        return s;
    }

private:
    void need(std::size_t n) const {
        if (pos_ + n > size_) throw CacheError("truncated cache record");
    }

    const char* data_;
    std::size_t size_;
    std::size_t pos_ = 0;
};

std::string encode_entry(const CacheEntry& e) {
    std::string payload;
    append_str(payload, e.prompt_hash);
    append_str(payload, e.model_name);
    append_str(payload, e.provider);
    append_str(payload, e.prompt_text);
    append_str(payload, e.response_text);
    append_i64(payload, e.input_tokens);
    append_i64(payload, e.output_tokens);
    append_f64(payload, e.latency_ms);
    append_f64(payload, e.created_at);
    append_i64(payload, e.ttl_days ? *e.ttl_days : -1);

    std::string record;
    append_u32(record, static_cast<std::uint32_t>(payload.size()));
    record += payload;
    return record;
}

CacheEntry decode_entry(const std::string& payload) {
    PayloadReader r(payload.data(), payload.size());
    CacheEntry e;
    e.prompt_hash = r.str();
    e.model_name = r.str();
    e.provider = r.str();
    e.prompt_text = r.str();
    e.response_text = r.str();
    e.input_tokens = r.i64();
    e.output_tokens = r.i64();
    e.latency_ms = r.f64();
    e.created_at = r.f64();
    const std::int64_t ttl = r.i64();
    if (ttl >= 0) e.ttl_days = ttl;
    return e;
}

std::string segment_name(std::size_t id) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "segment-%06zu.bin", id);
    return buf;
}

}  // namespace

CacheStore::CacheStore(const std::string& dir) : dir_(dir) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw CacheError("cannot create cache directory " + dir_ + ": " + ec.message());

    const std::string lock_path = dir_ + "/" + kLockName;
    lock_fd_ = ::open(lock_path.c_str(), O_CREAT | O_RDWR, 0644);
    if (lock_fd_ < 0) throw CacheError("cannot open lock file " + lock_path);
    if (::flock(lock_fd_, LOCK_EX | LOCK_NB) != 0) {
        ::close(lock_fd_);
        lock_fd_ = -1;
        throw CacheError("cache directory " + dir_ + " is locked by another process");
    }

    load_manifest();
    for (std::size_t i = 0; i < segments_.size(); ++i) scan_segment(i);
    open_appender();

    std::ifstream stats_in(dir_ + "/" + kStatsName);
    if (stats_in) {
        json doc = json::parse(stats_in, nullptr, false);
        if (doc.is_object()) {
            persisted_.lookups = doc.value("lookups", std::int64_t{0});
            persisted_.hits = doc.value("hits", std::int64_t{0});
            persisted_.misses = doc.value("misses", std::int64_t{0});
            persisted_.writes = doc.value("writes", std::int64_t{0});
            persisted_.expired_skips = doc.value("expired_skips", std::int64_t{0});
        }
    }
}

CacheStore::~CacheStore() {
    const CacheStats total = cumulative_stats();
    json doc{{"lookups", total.lookups},
             {"hits", total.hits},
             {"misses", total.misses},
             {"writes", total.writes},
             {"expired_skips", total.expired_skips}};
    std::ofstream out(dir_ + "/" + kStatsName, std::ios::trunc);
    if (out) out << doc.dump(2) << "\n";

    if (lock_fd_ >= 0) {
        ::flock(lock_fd_, LOCK_UN);
        ::close(lock_fd_);
    }
}

std::string CacheStore::segment_path(const std::string& name) const {
    return dir_ + "/" + name;
}

void CacheStore::load_manifest() {
    const std::string path = dir_ + "/" + kManifestName;
    std::ifstream in(path);
    if (!in) {
        segments_ = {segment_name(1)};
        std::ofstream(segment_path(segments_[0]), std::ios::binary | std::ios::app);
        write_manifest();
        return;
    }
    std::string line;
    if (!std::getline(in, line) || line != kManifestHeader)
        throw CacheError("unrecognized cache manifest in " + dir_);
    while (std::getline(in, line))
        if (!line.empty()) segments_.push_back(line);
    if (segments_.empty()) {
        segments_ = {segment_name(1)};
        std::ofstream(segment_path(segments_[0]), std::ios::binary | std::ios::app);
        write_manifest();
    }
}

void CacheStore::write_manifest() const {
    const std::string path = dir_ + "/" + kManifestName;
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw CacheError("cannot write " + tmp);
        out << kManifestHeader << "\n";
        for (const auto& name : segments_) out << name << "\n";
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) throw CacheError("cannot replace manifest: " + ec.message());
}

void CacheStore::scan_segment(std::size_t segment_index) {
    const std::string path = segment_path(segments_[segment_index]);
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CacheError("missing cache segment " + path);
    std::uint64_t offset = 0;
    for (;;) {
        char len_bytes[4];
        in.read(len_bytes, 4);
        if (in.gcount() == 0) break;
        if (in.gcount() != 4) throw CacheError("truncated record header in " + path);
        std::uint32_t len;
        std::memcpy(&len, len_bytes, 4);
        std::string payload(len, '\0');
        in.read(payload.data(), len);
        if (static_cast<std::uint32_t>(in.gcount()) != len)
            throw CacheError("truncated record in " + path);
        CacheEntry e = decode_entry(payload);
        index_[e.prompt_hash] = Location{segment_index, offset, len};
        ++physical_records_;
        offset += 4 + len;
    }
}

CacheEntry CacheStore::read_at(const Location& loc) const {
    const std::string path = segment_path(segments_[loc.segment]);
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CacheError("missing cache segment " + path);
    in.seekg(static_cast<std::streamoff>(loc.offset + 4));
    std::string payload(loc.length, '\0');
    in.read(payload.data(), loc.length);
    if (static_cast<std::uint32_t>(in.gcount()) != loc.length)
        throw CacheError("truncated record in " + path);
    return decode_entry(payload);
}

void CacheStore::open_appender() {
    appender_.open(segment_path(segments_.back()), std::ios::binary | std::ios::app);
    if (!appender_) throw CacheError("cannot open segment for append");
}

std::optional<CacheEntry> CacheStore::lookup(const std::string& key, double now) {
    lookups_.fetch_add(1);
    std::optional<Location> loc;
    {
        std::shared_lock lk(index_mutex_);
        auto it = index_.find(key);
        if (it != index_.end()) loc = it->second;
    }
    if (!loc) {
        misses_.fetch_add(1);
        return std::nullopt;
    }
    CacheEntry e = read_at(*loc);
    if (e.expired(now)) {
        expired_skips_.fetch_add(1);
        misses_.fetch_add(1);
        return std::nullopt;
    }
    hits_.fetch_add(1);
    return e;
}

void CacheStore::put(const CacheEntry& entry) {
    const std::string record = encode_entry(entry);
    std::scoped_lock wl(write_mutex_);
    const auto offset = static_cast<std::uint64_t>(appender_.tellp());
    appender_.write(record.data(), static_cast<std::streamsize>(record.size()));
    appender_.flush();
    if (!appender_) throw CacheError("cache append failed");
    {
        std::unique_lock lk(index_mutex_);
        index_[entry.prompt_hash] =
            Location{segments_.size() - 1, offset,
                     static_cast<std::uint32_t>(record.size() - 4)};
    }
    ++physical_records_;
    writes_.fetch_add(1);
}

std::int64_t CacheStore::purge_expired(double now) {
    std::scoped_lock wl(write_mutex_);
    std::unique_lock lk(index_mutex_);

    std::vector<CacheEntry> live;
    live.reserve(index_.size());
    for (const auto& [key, loc] : index_) {
        CacheEntry e = read_at(loc);
        if (!e.expired(now)) live.push_back(std::move(e));
    }
    std::sort(live.begin(), live.end(), [](const CacheEntry& a, const CacheEntry& b) {
        return a.prompt_hash < b.prompt_hash;
    });

    appender_.close();
    std::size_t next_id = 1;
    if (!segments_.empty()) {
        const std::string& last = segments_.back();
        next_id = static_cast<std::size_t>(
                      std::atoll(last.substr(8, last.size() - 12).c_str())) +
                  1;
    }
    const std::vector<std::string> old_segments = segments_;
    const std::string fresh = segment_name(next_id);
    {
        std::ofstream out(segment_path(fresh), std::ios::binary | std::ios::trunc);
        if (!out) throw CacheError("cannot create segment " + fresh);
        for (const auto& e : live) {
            const std::string record = encode_entry(e);
            out.write(record.data(), static_cast<std::streamsize>(record.size()));
        }
    }
    segments_ = {fresh};
    write_manifest();
    for (const auto& name : old_segments) {
        std::error_code ec;
        fs::remove(segment_path(name), ec);
    }

    const std::int64_t dropped = physical_records_ - static_cast<std::int64_t>(live.size());
    index_.clear();
    physical_records_ = 0;
    scan_segment(0);
    open_appender();
    return dropped;
}

CacheStats CacheStore::stats() const {
    CacheStats s;
    s.lookups = lookups_.load();
    s.hits = hits_.load();
    s.misses = misses_.load();
    s.writes = writes_.load();
    s.expired_skips = expired_skips_.load();
    return s;
}

CacheStats CacheStore::cumulative_stats() const {
    CacheStats s = stats();
    s.lookups += persisted_.lookups;
    s.hits += persisted_.hits;
    s.misses += persisted_.misses;
    s.writes += persisted_.writes;
    s.expired_skips += persisted_.expired_skips;
    return s;
}

std::size_t CacheStore::live_entries() const {
    std::shared_lock lk(index_mutex_);
    return index_.size();
}

InferenceResponse resolve(CachePolicy policy, CacheStore* store,
                          const ModelConfig& model, const InferenceRequest& request,
                          InferenceEngine& engine, double now_unix,
                          std::optional<std::int64_t> ttl_days) {
    const bool reads = policy == CachePolicy::enabled ||
                       policy == CachePolicy::read_only ||
                       policy == CachePolicy::replay;
    const bool writes = policy == CachePolicy::enabled ||
                        policy == CachePolicy::write_only;

    std::string key;
    if (policy != CachePolicy::disabled) {
        key = cache_key(request.prompt, model.model_name, to_string(model.provider),
                        request.temperature, request.max_tokens);
    }

    if (reads) {
        if (auto entry = store->lookup(key, now_unix)) {
            InferenceResponse response;
            response.text = entry->response_text;
            response.input_tokens = entry->input_tokens;
            response.output_tokens = entry->output_tokens;
            response.latency_ms = entry->latency_ms;
            response.cached = true;
            response.cost = 0.0;
            return response;
        }
        if (policy == CachePolicy::replay) {
            InferenceResponse response;
            FailureRecord failure;
            failure.kind = FailureKind::cache_miss;
            failure.message = "replay cache miss for example " + request.request_id;
            response.error = failure;
            return response;
        }
    }

    InferenceResponse response = engine.infer(request);
    if (writes && response.ok()) {
        CacheEntry entry;
        entry.prompt_hash = key;
        entry.model_name = model.model_name;
        entry.provider = to_string(model.provider);
        entry.prompt_text = request.prompt;
        entry.response_text = response.text;
        entry.input_tokens = response.input_tokens;
        entry.output_tokens = response.output_tokens;
        entry.latency_ms = response.latency_ms;
        entry.created_at = now_unix;
        entry.ttl_days = ttl_days;
        store->put(entry);
    }
    return response;
}

}  // namespace evalforge
