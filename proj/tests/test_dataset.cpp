#include "evalforge/dataset.hpp"
#include "evalforge/errors.hpp"
#include "helpers.hpp"

using namespace evalforge;
using testutil::TempDir;
using testutil::write_file;

TEST_CASE("prompt rendering substitutes fields and escapes braces") {
    const std::map<std::string, std::string> fields{{"q", "Why?"}, {"name", "Ada"}};
    CHECK(render_prompt("Ask {name}: {q}", fields) == "Ask Ada: Why?");
    CHECK(render_prompt("{{literal}} {q}", fields) == "{literal} Why?");
    CHECK(render_prompt("no placeholders", fields) == "no placeholders");
    CHECK(render_prompt("{q}{q}", fields) == "Why?Why?");

    CHECK_THROWS_AS(render_prompt("{missing}", fields), DatasetError);
    CHECK_THROWS_AS(render_prompt("{unclosed", fields), DatasetError);
    CHECK_THROWS_AS(render_prompt("stray } brace", fields), DatasetError);
    CHECK_THROWS_AS(render_prompt("{}", fields), DatasetError);
}

TEST_CASE("template placeholders are listed in order of first use") {
    CHECK(template_placeholders("{b} then {a} then {b}") ==
          std::vector<std::string>{"b", "a"});
    CHECK(template_placeholders("{{x}} none").empty());
    CHECK_THROWS_AS(template_placeholders("{oops"), DatasetError);
}

TEST_CASE("csv parsing follows the quoting rules") {
    const auto rows = parse_csv("a,b,c\n1,\"two, three\",\"say \"\"hi\"\"\"\n");
    REQUIRE(rows.size() == 2);
    CHECK(rows[0] == std::vector<std::string>{"a", "b", "c"});
    CHECK(rows[1] == std::vector<std::string>{"1", "two, three", "say \"hi\""});

    const auto multiline = parse_csv("h1,h2\n\"line\nbreak\",x\n");
    REQUIRE(multiline.size() == 2);
    CHECK(multiline[1][0] == "line\nbreak");

    const auto crlf = parse_csv("a,b\r\n1,2\r\n");
    REQUIRE(crlf.size() == 2);
    CHECK(crlf[1] == std::vector<std::string>{"1", "2"});

    const auto no_trailing_newline = parse_csv("a\nlast");
    REQUIRE(no_trailing_newline.size() == 2);
    CHECK(no_trailing_newline[1][0] == "last");

    const auto empties = parse_csv("a,b\n,\n");
    CHECK(empties[1] == std::vector<std::string>{"", ""});

    CHECK_THROWS_AS(parse_csv("a\n\"unterminated\n"), DatasetError);
    CHECK_THROWS_AS(parse_csv("a\nfoo\"bar\n"), DatasetError);
}

TEST_CASE("jsonl datasets load with ids, references, and contexts") {
    TempDir dir;
    const auto path = write_file(
        dir, "data.jsonl",
        R"({"id": "e1", "question": "Q1", "answer": "A1", "ctx": ["c1", "c2"]})"
        "\n"
        R"({"id": "e2", "question": "Q2", "answer": "A2", "ctx": [], "extra": 7})"
        "\n"
        "\n"  // blank lines are skipped
        R"({"id": "e3", "question": "Q3", "answer": null, "ctx": ["c3"]})"
        "\n");

    DataConfig cfg;
    cfg.input_path = path;
    cfg.input_format = DataFormat::jsonl;
    cfg.prompt_template = "Answer: {question}";
    cfg.id_column = "id";
    cfg.reference_column = "answer";
    cfg.context_column = "ctx";

    SUBCASE("full configuration") {
        // e3's answer is null, so the reference column is missing there.
        CHECK_THROWS_AS(load_dataset(cfg), DatasetError);
    }

    SUBCASE("present columns") {
        cfg.reference_column.reset();
        const auto examples = load_dataset(cfg);
        REQUIRE(examples.size() == 3);
        CHECK(examples[0].example_id == "e1");
        CHECK(examples[0].rendered_prompt == "Answer: Q1");
        REQUIRE(examples[0].contexts.has_value());
        CHECK(*examples[0].contexts == std::vector<std::string>{"c1", "c2"});
        CHECK(examples[1].contexts->empty());
        CHECK(examples[1].fields.at("extra") == "7");  // scalars stringified
        CHECK_FALSE(examples[0].reference.has_value());
    }

    SUBCASE("default row ids") {
        cfg.id_column.reset();
        cfg.reference_column.reset();
        const auto examples = load_dataset(cfg);
        CHECK(examples[0].example_id == "row-0");
        CHECK(examples[2].example_id == "row-2");
    }
}

TEST_CASE("jsonl dataset errors carry line numbers") {
    TempDir dir;
    DataConfig cfg;
    cfg.input_format = DataFormat::jsonl;
    cfg.prompt_template = "{question}";

    cfg.input_path = write_file(dir, "bad.jsonl",
                                "{\"question\": \"ok\"}\nnot json\n");
    try {
        load_dataset(cfg);
        FAIL("expected DatasetError");
    } catch (const DatasetError& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }

    cfg.input_path = write_file(dir, "arr.jsonl", "[1, 2]\n");
    CHECK_THROWS_WITH_AS(load_dataset(cfg),
                         doctest::Contains("not a JSON object"), DatasetError);

    cfg.input_path = write_file(dir, "nested.jsonl",
                                R"({"question": "q", "meta": {"a": 1}})" "\n");
    CHECK_THROWS_WITH_AS(load_dataset(cfg), doctest::Contains("non-scalar"),
                         DatasetError);

    cfg.input_path = write_file(dir, "dupe.jsonl",
                                R"({"id": "x", "question": "q1"})" "\n"
                                R"({"id": "x", "question": "q2"})" "\n");
    cfg.id_column = "id";
    CHECK_THROWS_WITH_AS(load_dataset(cfg),
                         doctest::Contains("duplicate example_id"), DatasetError);
    cfg.id_column.reset();

    cfg.input_path = write_file(dir, "missing.jsonl", R"({"other": "x"})" "\n");
    CHECK_THROWS_WITH_AS(load_dataset(cfg),
                         doctest::Contains("placeholder \"question\""), DatasetError);

    cfg.input_path = write_file(dir, "badctx.jsonl",
                                R"({"question": "q", "ctx": "plain"})" "\n");
    cfg.context_column = "ctx";
    CHECK_THROWS_WITH_AS(load_dataset(cfg),
                         doctest::Contains("array of strings"), DatasetError);
    cfg.context_column.reset();

    cfg.input_path = dir.file("does_not_exist.jsonl");
    CHECK_THROWS_WITH_AS(load_dataset(cfg), doctest::Contains("cannot open"),
                         DatasetError);

    cfg.input_path = write_file(dir, "emptyprompt.jsonl",
                                R"({"question": ""})" "\n");
    CHECK_THROWS_WITH_AS(load_dataset(cfg), doctest::Contains("empty prompt"),
                         DatasetError);
}

TEST_CASE("csv datasets load with json-encoded context columns") {
    TempDir dir;
    const auto path = write_file(
        dir, "data.csv",
        "id,question,answer,ctx\n"
        "e1,What is 2+2?,4,\"[\"\"four is 4\"\", \"\"math\"\"]\"\n"
        "e2,\"Comma, question\",yes,[]\n");

    DataConfig cfg;
    cfg.input_path = path;
    cfg.input_format = DataFormat::csv;
    cfg.prompt_template = "{question}";
    cfg.id_column = "id";
    cfg.reference_column = "answer";
    cfg.context_column = "ctx";

    const auto examples = load_dataset(cfg);
    REQUIRE(examples.size() == 2);
    CHECK(examples[0].example_id == "e1");
    CHECK(examples[0].reference == "4");
    REQUIRE(examples[0].contexts.has_value());
    CHECK(examples[0].contexts->size() == 2);
    CHECK((*examples[0].contexts)[0] == "four is 4");
    CHECK(examples[1].rendered_prompt == "Comma, question");
    CHECK(examples[1].contexts->empty());

    SUBCASE("ragged rows are rejected") {
        cfg.input_path = write_file(dir, "ragged.csv", "a,b\n1\n");
        cfg.prompt_template = "{a}";
        cfg.id_column.reset();
        cfg.reference_column.reset();
        cfg.context_column.reset();
        CHECK_THROWS_WITH_AS(load_dataset(cfg), doctest::Contains("expected 2"),
                             DatasetError);
    }
    SUBCASE("duplicate headers are rejected") {
        cfg.input_path = write_file(dir, "dup.csv", "a,a\n1,2\n");
        CHECK_THROWS_WITH_AS(load_dataset(cfg), doctest::Contains("duplicate column"),
                             DatasetError);
    }
    SUBCASE("missing configured column") {
        cfg.input_path = write_file(dir, "nocol.csv", "question\nq1\n");
        cfg.id_column.reset();
        cfg.reference_column = "answer";
        cfg.context_column.reset();
        CHECK_THROWS_WITH_AS(load_dataset(cfg),
                             doctest::Contains("reference column \"answer\""),
                             DatasetError);
    }
}
