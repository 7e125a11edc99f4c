#include "evalforge/config.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "evalforge/errors.hpp"
#include "evalforge/metrics_registry.hpp"

namespace evalforge {

using nlohmann::json;

namespace {

template <typename E>
struct EnumNames {
    std::vector<std::pair<E, const char*>> entries;

    std::string name(E v) const {
        for (const auto& [e, n] : entries)
            if (e == v) return n;
        return "?";
    }

    E parse(const std::string& s, const std::string& field) const {
        for (const auto& [e, n] : entries)
            if (s == n) return e;
        std::string allowed;
        for (const auto& [e, n] : entries) {
            if (!allowed.empty()) allowed += ", ";
            allowed += n;
        }
        throw ConfigError(field, "unknown value \"" + s + "\" (expected one of: " + allowed + ")");
    }
};

const EnumNames<Provider> kProviders{{{Provider::openai, "openai"},
                                      {Provider::anthropic, "anthropic"},
                                      {Provider::google, "google"},
                                      {Provider::mock, "mock"}}};

const EnumNames<CachePolicy> kPolicies{{{CachePolicy::enabled, "enabled"},
                                        {CachePolicy::read_only, "read_only"},
                                        {CachePolicy::write_only, "write_only"},
                                        {CachePolicy::replay, "replay"},
                                        {CachePolicy::disabled, "disabled"}}};

const EnumNames<CiMethod> kCiMethods{{{CiMethod::percentile, "percentile"},
                                      {CiMethod::bca, "bca"},
                                      {CiMethod::analytical, "analytical"}}};

const EnumNames<DataFormat> kFormats{
    {{DataFormat::jsonl, "jsonl"}, {DataFormat::csv, "csv"}}};

const EnumNames<MetricFamily> kFamilies{{{MetricFamily::lexical, "lexical"},
                                         {MetricFamily::semantic, "semantic"},
                                         {MetricFamily::llm_judge, "llm_judge"},
                                         {MetricFamily::rag, "rag"}}};

/// Cursor over one JSON object: tracks the dotted path for error messages
/// and rejects keys that no field claimed.
class ObjectReader {
public:
    ObjectReader(const json& node, std::string path)
        : node_(node), path_(std::move(path)) {
        if (!node_.is_object())
            throw ConfigError(path_, "expected an object");
    }

    void finish() const {
        for (auto it = node_.begin(); it != node_.end(); ++it) {
            if (!seen_.count(it.key()))
                throw ConfigError(join(it.key()), "unknown field");
        }
    }

    bool has(const std::string& key) {
        seen_.insert(key);
        auto it = node_.find(key);
        return it != node_.end() && !it->is_null();
    }

    const json& at(const std::string& key) {
        if (!has(key)) throw ConfigError(join(key), "missing required field");
        return node_.at(key);
    }

    std::string str(const std::string& key) {
        const json& v = at(key);
        if (!v.is_string()) throw ConfigError(join(key), "expected a string");
        return v.get<std::string>();
    }

    std::string nonempty_str(const std::string& key) {
        std::string s = str(key);
        if (s.empty()) throw ConfigError(join(key), "must be non-empty");
        return s;
    }

    std::optional<std::string> opt_str(const std::string& key) {
        if (!has(key)) return std::nullopt;
        return str(key);
    }

    double number(const std::string& key) {
        const json& v = at(key);
        if (!v.is_number()) throw ConfigError(join(key), "expected a number");
        return v.get<double>();
    }

    std::int64_t integer(const std::string& key) {
        const json& v = at(key);
        if (!v.is_number_integer())
            throw ConfigError(join(key), "expected an integer");
        return v.get<std::int64_t>();
    }

    std::string join(const std::string& key) const {
        return path_.empty() ? key : path_ + "." + key;
    }

    const json& node() const { return node_; }

private:
    const json& node_;
    std::string path_;
    std::set<std::string> seen_;
};

void check_range(bool ok, const std::string& field, const std::string& what) {
    if (!ok) throw ConfigError(field, what);
}

ModelConfig parse_model(const json& node, const std::string& path) {
    ModelConfig m;
    ObjectReader r(node, path);
    m.provider = kProviders.parse(r.nonempty_str("provider"), r.join("provider"));
    m.model_name = r.nonempty_str("model_name");
    if (r.has("temperature")) m.temperature = r.number("temperature");
    check_range(m.temperature >= 0.0, r.join("temperature"), "must be >= 0");
    if (r.has("max_tokens")) m.max_tokens = static_cast<int>(r.integer("max_tokens"));
    check_range(m.max_tokens >= 1, r.join("max_tokens"), "must be >= 1");
    if (r.has("price_per_1m_input")) {
        m.price_per_1m_input = r.number("price_per_1m_input");
        check_range(*m.price_per_1m_input >= 0, r.join("price_per_1m_input"), "must be >= 0");
    }
    if (r.has("price_per_1m_output")) {
        m.price_per_1m_output = r.number("price_per_1m_output");
        check_range(*m.price_per_1m_output >= 0, r.join("price_per_1m_output"), "must be >= 0");
    }
    m.base_url = r.opt_str("base_url");
    if (r.has("timeout_seconds")) m.timeout_seconds = r.number("timeout_seconds");
    check_range(m.timeout_seconds > 0, r.join("timeout_seconds"), "must be > 0");
    r.finish();
    return m;
}

InferenceConfig parse_inference(const json& node, const std::string& path) {
    InferenceConfig c;
    ObjectReader r(node, path);
    if (r.has("batch_size")) c.batch_size = static_cast<int>(r.integer("batch_size"));
    check_range(c.batch_size >= 1, r.join("batch_size"), "must be >= 1");
    if (r.has("max_retries")) c.max_retries = static_cast<int>(r.integer("max_retries"));
    check_range(c.max_retries >= 0, r.join("max_retries"), "must be >= 0");
    if (r.has("retry_delay")) c.retry_delay = r.number("retry_delay");
    check_range(c.retry_delay >= 0, r.join("retry_delay"), "must be >= 0");
    if (r.has("cache_policy"))
        c.cache_policy = kPolicies.parse(r.str("cache_policy"), r.join("cache_policy"));
    if (r.has("cache_dir")) c.cache_dir = r.nonempty_str("cache_dir");
    if (r.has("cache_ttl_days")) {
        c.cache_ttl_days = r.integer("cache_ttl_days");
        check_range(*c.cache_ttl_days >= 1, r.join("cache_ttl_days"), "must be >= 1");
    }
    if (r.has("rate_limit_rpm")) c.rate_limit_rpm = r.integer("rate_limit_rpm");
    check_range(c.rate_limit_rpm >= 1, r.join("rate_limit_rpm"), "must be >= 1");
    if (r.has("rate_limit_tpm")) c.rate_limit_tpm = r.integer("rate_limit_tpm");
    check_range(c.rate_limit_tpm >= 1, r.join("rate_limit_tpm"), "must be >= 1");
    if (r.has("num_workers")) c.num_workers = static_cast<int>(r.integer("num_workers"));
    check_range(c.num_workers >= 1, r.join("num_workers"), "must be >= 1");
    check_range(c.rate_limit_rpm >= c.num_workers, r.join("rate_limit_rpm"),
                "must be >= num_workers (each worker needs a nonzero share)");
    check_range(c.rate_limit_tpm >= c.num_workers, r.join("rate_limit_tpm"),
                "must be >= num_workers (each worker needs a nonzero share)");
    r.finish();
    return c;
}

MetricConfig parse_metric(const json& node, const std::string& path) {
    MetricConfig m;
    ObjectReader r(node, path);
    m.name = r.nonempty_str("name");
    m.type = kFamilies.parse(r.nonempty_str("type"), r.join("type"));
    if (r.has("params")) {
        const json& p = r.at("params");
        if (!p.is_object()) throw ConfigError(r.join("params"), "expected an object");
        for (auto it = p.begin(); it != p.end(); ++it) {
            if (!(it->is_string() || it->is_number() || it->is_boolean()))
                throw ConfigError(r.join("params") + "." + it.key(),
                                  "parameter values must be scalar");
        }
        m.params = p;
    }
    if (!metrics::is_registered(m.name))
        throw ConfigError(r.join("name"), "unknown metric \"" + m.name + "\"");
    const std::string family = metrics::family_of(m.name);
    if (family != to_string(m.type))
        throw ConfigError(r.join("type"), "metric \"" + m.name + "\" has family \"" +
                                              family + "\", not \"" + to_string(m.type) + "\"");
    r.finish();
    return m;
}

StatisticsConfig parse_statistics(const json& node, const std::string& path) {
    StatisticsConfig s;
    ObjectReader r(node, path);
    if (r.has("confidence_level")) s.confidence_level = r.number("confidence_level");
    check_range(s.confidence_level > 0.0 && s.confidence_level < 1.0,
                r.join("confidence_level"), "must be in (0, 1)");
    if (r.has("bootstrap_iterations"))
        s.bootstrap_iterations = static_cast<int>(r.integer("bootstrap_iterations"));
    check_range(s.bootstrap_iterations >= 100, r.join("bootstrap_iterations"),
                "must be >= 100");
    if (r.has("ci_method"))
        s.ci_method = kCiMethods.parse(r.str("ci_method"), r.join("ci_method"));
    if (r.has("significance_alpha")) s.significance_alpha = r.number("significance_alpha");
    check_range(s.significance_alpha > 0.0 && s.significance_alpha < 1.0,
                r.join("significance_alpha"), "must be in (0, 1)");
    if (r.has("rng_seed")) {
        const json& v = r.at("rng_seed");
        if (!v.is_number_integer())
            throw ConfigError(r.join("rng_seed"), "expected an integer");
        s.rng_seed = v.get<std::uint64_t>();
    }
    r.finish();
    return s;
}

DataConfig parse_data(const json& node, const std::string& path) {
    DataConfig d;
    ObjectReader r(node, path);
    d.input_path = r.nonempty_str("input_path");
    if (r.has("input_format"))
        d.input_format = kFormats.parse(r.str("input_format"), r.join("input_format"));
    d.prompt_template = r.nonempty_str("prompt_template");
    d.reference_column = r.opt_str("reference_column");
    d.context_column = r.opt_str("context_column");
    d.id_column = r.opt_str("id_column");
    r.finish();
    return d;
}

/// Line/column of a byte offset, for position-annotated syntax errors.
std::pair<int, int> line_col(const std::string& text, std::size_t byte) {
    int line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

}  // namespace

std::string to_string(Provider p) { return kProviders.name(p); }
std::string to_string(CachePolicy p) { return kPolicies.name(p); }
std::string to_string(CiMethod m) { return kCiMethods.name(m); }
std::string to_string(DataFormat f) { return kFormats.name(f); }
std::string to_string(MetricFamily f) { return kFamilies.name(f); }

std::string MetricConfig::param_str(const std::string& key, const std::string& dflt) const {
    auto it = params.find(key);
    if (it == params.end()) return dflt;
    if (it->is_string()) return it->get<std::string>();
    return it->dump();
}

double MetricConfig::param_double(const std::string& key, double dflt) const {
    auto it = params.find(key);
    if (it == params.end() || !it->is_number()) return dflt;
    return it->get<double>();
}

std::int64_t MetricConfig::param_int(const std::string& key, std::int64_t dflt) const {
    auto it = params.find(key);
    if (it == params.end() || !it->is_number_integer()) return dflt;
    return it->get<std::int64_t>();
}

bool MetricConfig::param_bool(const std::string& key, bool dflt) const {
    auto it = params.find(key);
    if (it == params.end() || !it->is_boolean()) return dflt;
    return it->get<bool>();
}

EvalTask parse_task(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        auto [line, col] = line_col(text, e.byte > 0 ? e.byte - 1 : 0);
        throw ConfigError("", "syntax error at line " + std::to_string(line) +
                                  ", column " + std::to_string(col) + ": " + e.what());
    }

    EvalTask task;
    ObjectReader r(doc, "");
    task.task_id = r.nonempty_str("task_id");
    task.model = parse_model(r.at("model"), "model");
    if (r.has("inference"))
        task.inference = parse_inference(r.at("inference"), "inference");
    const json& metrics_node = r.at("metrics");
    if (!metrics_node.is_array() || metrics_node.empty())
        throw ConfigError("metrics", "must be a non-empty array");
    for (std::size_t i = 0; i < metrics_node.size(); ++i)
        task.metrics.push_back(
            parse_metric(metrics_node[i], "metrics[" + std::to_string(i) + "]"));
    if (r.has("statistics"))
        task.statistics = parse_statistics(r.at("statistics"), "statistics");
    task.data = parse_data(r.at("data"), "data");
    r.finish();
    return task;
}

nlohmann::json task_to_json(const EvalTask& t) {
    auto opt_num = [](const std::optional<double>& v) {
        return v ? json(*v) : json(nullptr);
    };
    auto opt_str = [](const std::optional<std::string>& v) {
        return v ? json(*v) : json(nullptr);
    };

    json model{{"provider", to_string(t.model.provider)},
               {"model_name", t.model.model_name},
               {"temperature", t.model.temperature},
               {"max_tokens", t.model.max_tokens},
               {"price_per_1m_input", opt_num(t.model.price_per_1m_input)},
               {"price_per_1m_output", opt_num(t.model.price_per_1m_output)},
               {"base_url", opt_str(t.model.base_url)},
               {"timeout_seconds", t.model.timeout_seconds}};

    json inference{{"batch_size", t.inference.batch_size},
                   {"max_retries", t.inference.max_retries},
                   {"retry_delay", t.inference.retry_delay},
                   {"cache_policy", to_string(t.inference.cache_policy)},
                   {"cache_dir", t.inference.cache_dir},
                   {"cache_ttl_days", t.inference.cache_ttl_days
                                          ? json(*t.inference.cache_ttl_days)
                                          : json(nullptr)},
                   {"rate_limit_rpm", t.inference.rate_limit_rpm},
                   {"rate_limit_tpm", t.inference.rate_limit_tpm},
                   {"num_workers", t.inference.num_workers}};

    json metrics = json::array();
    for (const auto& m : t.metrics)
        metrics.push_back(json{{"name", m.name},
                               {"type", to_string(m.type)},
                               {"params", m.params}});

    json statistics{{"confidence_level", t.statistics.confidence_level},
                    {"bootstrap_iterations", t.statistics.bootstrap_iterations},
                    {"ci_method", to_string(t.statistics.ci_method)},
                    {"significance_alpha", t.statistics.significance_alpha},
                    {"rng_seed", t.statistics.rng_seed ? json(*t.statistics.rng_seed)
                                                       : json(nullptr)}};

    json data{{"input_path", t.data.input_path},
              {"input_format", to_string(t.data.input_format)},
              {"prompt_template", t.data.prompt_template},
              {"reference_column", opt_str(t.data.reference_column)},
              {"context_column", opt_str(t.data.context_column)},
              {"id_column", opt_str(t.data.id_column)}};

    return json{{"task_id", t.task_id}, {"model", model},
                {"inference", inference}, {"metrics", metrics},
                {"statistics", statistics}, {"data", data}};
}

std::string serialize_task(const EvalTask& task) {
    // nlohmann::json keeps keys in std::map order, so the dump is canonical.
    return task_to_json(task).dump(2) + "\n";
}

}  // namespace evalforge
