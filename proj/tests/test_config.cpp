#include "evalforge/config.hpp"
#include "evalforge/errors.hpp"
#include "helpers.hpp"

using namespace evalforge;

namespace {

nlohmann::json minimal_task() {
    return nlohmann::json{
        {"task_id", "t1"},
        {"model", {{"provider", "mock"}, {"model_name", "m"}}},
        {"metrics", nlohmann::json::array(
                        {{{"name", "exact_match"}, {"type", "lexical"}}})},
        {"data", {{"input_path", "d.jsonl"}, {"prompt_template", "{question}"}}},
    };
}

std::string field_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const ConfigError& e) {
        return e.field();
    }
    return "<no error>";
}

}  // namespace

TEST_CASE("minimal task parses with all defaults materialized") {
    const auto task = parse_task(minimal_task().dump());
    CHECK(task.task_id == "t1");
    CHECK(task.model.provider == Provider::mock);
    CHECK(task.model.model_name == "m");
    CHECK(task.model.temperature == 0.0);
    CHECK(task.model.max_tokens == 1024);
    CHECK_FALSE(task.model.price_per_1m_input.has_value());
    CHECK(task.inference.batch_size == 50);
    CHECK(task.inference.max_retries == 3);
    CHECK(task.inference.retry_delay == 1.0);
    CHECK(task.inference.cache_policy == CachePolicy::enabled);
    CHECK(task.inference.cache_dir == "evalforge_cache");
    CHECK_FALSE(task.inference.cache_ttl_days.has_value());
    CHECK(task.inference.rate_limit_rpm == 10000);
    CHECK(task.inference.rate_limit_tpm == 2000000);
    CHECK(task.inference.num_workers == 8);
    REQUIRE(task.metrics.size() == 1);
    CHECK(task.metrics[0].name == "exact_match");
    CHECK(task.metrics[0].type == MetricFamily::lexical);
    CHECK(task.statistics.confidence_level == 0.95);
    CHECK(task.statistics.bootstrap_iterations == 1000);
    CHECK(task.statistics.ci_method == CiMethod::percentile);
    CHECK(task.statistics.significance_alpha == 0.05);
    CHECK_FALSE(task.statistics.rng_seed.has_value());
    CHECK(task.statistics.effective_seed() == 0);
    CHECK(task.data.input_format == DataFormat::jsonl);
    CHECK(task.data.prompt_template == "{question}");
}

TEST_CASE("full task round-trips through serialization byte-identically") {
    auto doc = minimal_task();
    doc["model"]["temperature"] = 0.7;
    doc["model"]["max_tokens"] = 256;
    doc["model"]["price_per_1m_input"] = 2.5;
    doc["model"]["price_per_1m_output"] = 10.0;
    doc["model"]["base_url"] = "http://localhost:9;json";
    doc["inference"] = {{"batch_size", 10},      {"max_retries", 2},
                        {"retry_delay", 0.5},    {"cache_policy", "replay"},
                        {"cache_dir", "cachex"}, {"cache_ttl_days", 30},
                        {"rate_limit_rpm", 600}, {"rate_limit_tpm", 100000},
                        {"num_workers", 4}};
    doc["metrics"] = nlohmann::json::array(
        {{{"name", "exact_match"}, {"type", "lexical"}},
         {{"name", "bleu"},
          {"type", "lexical"},
          {"params", {{"max_n", 2}, {"eps", 1e-6}, {"lowercase", true}}}},
         {{"name", "judge_pointwise"},
          {"type", "llm_judge"},
          {"params", {{"rubric", "clarity"}}}}});
    doc["statistics"] = {{"confidence_level", 0.9},
                         {"bootstrap_iterations", 500},
                         {"ci_method", "bca"},
                         {"significance_alpha", 0.01},
                         {"rng_seed", 42}};
    doc["data"]["input_format"] = "csv";
    doc["data"]["reference_column"] = "ref";
    doc["data"]["context_column"] = "ctx";
    doc["data"]["id_column"] = "id";

    const auto task = parse_task(doc.dump());
    CHECK(task.statistics.rng_seed == 42);
    CHECK(task.statistics.effective_seed() == 42);
    CHECK(task.inference.cache_policy == CachePolicy::replay);
    CHECK(task.metrics[1].param_int("max_n", 4) == 2);
    CHECK(task.metrics[1].param_double("eps", 1e-9) == doctest::Approx(1e-6));
    CHECK(task.metrics[2].param_str("rubric", "") == "clarity");

    const std::string first = serialize_task(task);
    const auto reparsed = parse_task(first);
    CHECK(reparsed == task);
    CHECK(serialize_task(reparsed) == first);
}

TEST_CASE("metric params fall back on missing or mistyped keys") {
    MetricConfig cfg;
    cfg.params = nlohmann::json{{"s", "text"}, {"d", 2.5}, {"i", 7}, {"b", true}};
    CHECK(cfg.param_str("s", "x") == "text");
    CHECK(cfg.param_str("missing", "x") == "x");
    CHECK(cfg.param_double("d", 0.0) == 2.5);
    CHECK(cfg.param_double("s", 1.5) == 1.5);
    CHECK(cfg.param_int("i", 0) == 7);
    CHECK(cfg.param_int("d", 3) == 3);  // 2.5 is not an integer
    CHECK(cfg.param_bool("b", false));
    CHECK(cfg.param_bool("i", false) == false);
}

TEST_CASE("validation errors carry dotted field paths") {
    auto bad_temp = minimal_task();
    bad_temp["model"]["temperature"] = -1.0;
    CHECK(field_of([&] { parse_task(bad_temp.dump()); }) == "model.temperature");

    auto bad_provider = minimal_task();
    bad_provider["model"]["provider"] = "aws";
    CHECK(field_of([&] { parse_task(bad_provider.dump()); }) == "model.provider");
    try {
        parse_task(bad_provider.dump());
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("expected one of") != std::string::npos);
    }

    auto missing_id = minimal_task();
    missing_id.erase("task_id");
    CHECK(field_of([&] { parse_task(missing_id.dump()); }) == "task_id");

    auto empty_metrics = minimal_task();
    empty_metrics["metrics"] = nlohmann::json::array();
    CHECK(field_of([&] { parse_task(empty_metrics.dump()); }) == "metrics");

    auto unknown_metric = minimal_task();
    unknown_metric["metrics"][0]["name"] = "made_up";
    CHECK(field_of([&] { parse_task(unknown_metric.dump()); }) == "metrics[0].name");

    auto wrong_family = minimal_task();
    wrong_family["metrics"][0]["type"] = "semantic";
    CHECK(field_of([&] { parse_task(wrong_family.dump()); }) == "metrics[0].type");

    auto unknown_key = minimal_task();
    unknown_key["inference"] = {{"batchsize", 10}};
    CHECK(field_of([&] { parse_task(unknown_key.dump()); }) == "inference.batchsize");

    auto bad_params = minimal_task();
    bad_params["metrics"][0]["params"] = {{"list", nlohmann::json::array({1, 2})}};
    CHECK(field_of([&] { parse_task(bad_params.dump()); }) ==
          "metrics[0].params.list");

    auto bad_seed = minimal_task();
    bad_seed["statistics"] = {{"rng_seed", 1.5}};
    CHECK(field_of([&] { parse_task(bad_seed.dump()); }) == "statistics.rng_seed");

    auto bad_level = minimal_task();
    bad_level["statistics"] = {{"confidence_level", 1.0}};
    CHECK(field_of([&] { parse_task(bad_level.dump()); }) ==
          "statistics.confidence_level");

    auto few_boots = minimal_task();
    few_boots["statistics"] = {{"bootstrap_iterations", 50}};
    CHECK(field_of([&] { parse_task(few_boots.dump()); }) ==
          "statistics.bootstrap_iterations");

    auto starved = minimal_task();
    starved["inference"] = {{"rate_limit_rpm", 4}, {"num_workers", 8}};
    CHECK(field_of([&] { parse_task(starved.dump()); }) ==
          "inference.rate_limit_rpm");

    auto bad_ttl = minimal_task();
    bad_ttl["inference"] = {{"cache_ttl_days", 0}};
    CHECK(field_of([&] { parse_task(bad_ttl.dump()); }) ==
          "inference.cache_ttl_days");
}

TEST_CASE("syntax errors report line and column") {
    try {
        parse_task("{\n  \"task_id\": \"x\",\n  broken\n}");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.field().empty());
        CHECK(std::string(e.what()).find("syntax error at line 3") !=
              std::string::npos);
    }
}

TEST_CASE("enum names round-trip") {
    CHECK(to_string(Provider::openai) == "openai");
    CHECK(to_string(Provider::anthropic) == "anthropic");
    CHECK(to_string(Provider::google) == "google");
    CHECK(to_string(Provider::mock) == "mock");
    CHECK(to_string(CachePolicy::enabled) == "enabled");
    CHECK(to_string(CachePolicy::read_only) == "read_only");
    CHECK(to_string(CachePolicy::write_only) == "write_only");
    CHECK(to_string(CachePolicy::replay) == "replay");
    CHECK(to_string(CachePolicy::disabled) == "disabled");
    CHECK(to_string(CiMethod::percentile) == "percentile");
    CHECK(to_string(CiMethod::bca) == "bca");
    CHECK(to_string(CiMethod::analytical) == "analytical");
    CHECK(to_string(MetricFamily::llm_judge) == "llm_judge");
}
