#include "evalforge/dataset.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "evalforge/errors.hpp"
#include <json.hpp>

namespace evalforge {

using nlohmann::json;

std::string render_prompt(const std::string& tmpl,
                          const std::map<std::string, std::string>& fields) {
    std::string out;
    out.reserve(tmpl.size());
    for (std::size_t i = 0; i < tmpl.size(); ++i) {
        char c = tmpl[i];
        if (c == '{') {
            if (i + 1 < tmpl.size() && tmpl[i + 1] == '{') {
                out += '{';
                ++i;
                continue;
            }
            auto end = tmpl.find('}', i + 1);
            if (end == std::string::npos)
                throw DatasetError("unbalanced '{' in template");
            std::string name = tmpl.substr(i + 1, end - i - 1);
            if (name.empty())
                throw DatasetError("empty placeholder '{}' in template");
            auto it = fields.find(name);
            if (it == fields.end())
                throw DatasetError("unknown placeholder \"" + name + "\"");
            out += it->second;
            i = end;
        } else if (c == '}') {
            if (i + 1 < tmpl.size() && tmpl[i + 1] == '}') {
                out += '}';
                ++i;
                continue;
            }
            throw DatasetError("unbalanced '}' in template");
        } else {
            out += c;
        }
    }
    return out;
}

std::vector<std::string> template_placeholders(const std::string& tmpl) {
    std::vector<std::string> names;
    std::set<std::string> seen;
    for (std::size_t i = 0; i < tmpl.size(); ++i) {
        char c = tmpl[i];
        if (c == '{') {
            if (i + 1 < tmpl.size() && tmpl[i + 1] == '{') {
                ++i;
                continue;
            }
            auto end = tmpl.find('}', i + 1);
            if (end == std::string::npos)
                throw DatasetError("unbalanced '{' in template");
            std::string name = tmpl.substr(i + 1, end - i - 1);
            if (!name.empty() && seen.insert(name).second) names.push_back(name);
            i = end;
        } else if (c == '}') {
            if (i + 1 < tmpl.size() && tmpl[i + 1] == '}') ++i;
        }
    }
    return names;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool in_quotes = false;
    bool field_started = false;
    int line = 1;

    auto end_field = [&] {
        row.push_back(std::move(field));
        field.clear();
        field_started = false;
    };
    auto end_row = [&] {
        end_field();
        rows.push_back(std::move(row));
        row.clear();
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') ++line;
                field += c;
            }
        } else if (c == '"') {
            if (field_started && !field.empty())
                throw DatasetError("line " + std::to_string(line) +
                                   ": quote inside unquoted field");
            in_quotes = true;
            field_started = true;
        } else if (c == ',') {
            end_field();
        } else if (c == '\r') {
            // consumed; LF (if any) ends the row
        } else if (c == '\n') {
            end_row();
            ++line;
        } else {
            field += c;
            field_started = true;
        }
    }
    if (in_quotes)
        throw DatasetError("line " + std::to_string(line) + ": unterminated quoted field");
    if (field_started || !row.empty()) end_row();
    return rows;
}

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DatasetError("cannot open input file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string scalar_to_string(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

std::vector<std::string> parse_contexts(const json& arr, const std::string& where) {
    if (!arr.is_array())
        throw DatasetError(where + ": contexts column must be a JSON array of strings");
    std::vector<std::string> out;
    for (const auto& item : arr) {
        if (!item.is_string())
            throw DatasetError(where + ": contexts column must be a JSON array of strings");
        out.push_back(item.get<std::string>());
    }
    return out;
}

std::vector<Example> load_jsonl(const std::string& text, const DataConfig& cfg) {
    std::vector<Example> examples;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::string where = "line " + std::to_string(lineno);
        json rec;
        try {
            rec = json::parse(line);
        } catch (const json::parse_error& e) {
            throw DatasetError(where + ": malformed JSON: " + e.what());
        }
        if (!rec.is_object())
            throw DatasetError(where + ": record is not a JSON object");
        Example ex;
        for (auto it = rec.begin(); it != rec.end(); ++it) {
            if (it->is_null()) continue;
            if (cfg.context_column && it.key() == *cfg.context_column && it->is_array()) {
                ex.contexts = parse_contexts(*it, where);
                ex.fields[it.key()] = it->dump();
                continue;
            }
            if (it->is_object() || it->is_array())
                throw DatasetError(where + ": column \"" + it.key() +
                                   "\" has a non-scalar value");
            ex.fields[it.key()] = scalar_to_string(*it);
        }
        examples.push_back(std::move(ex));
    }
    return examples;
}

std::vector<Example> load_csv(const std::string& text, const DataConfig& cfg) {
    auto rows = parse_csv(text);
    if (rows.empty()) throw DatasetError("CSV file has no header row");
    const auto& header = rows[0];
    std::set<std::string> header_set(header.begin(), header.end());
    if (header_set.size() != header.size())
        throw DatasetError("CSV header has duplicate column names");

    std::vector<Example> examples;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const std::string where = "line " + std::to_string(r + 1);
        if (rows[r].size() != header.size())
            throw DatasetError(where + ": expected " + std::to_string(header.size()) +
                               " fields, got " + std::to_string(rows[r].size()));
        Example ex;
        for (std::size_t c = 0; c < header.size(); ++c)
            ex.fields[header[c]] = rows[r][c];
        if (cfg.context_column) {
            auto it = ex.fields.find(*cfg.context_column);
            if (it != ex.fields.end() && !it->second.empty()) {
                json arr;
                try {
                    arr = json::parse(it->second);
                } catch (const json::parse_error&) {
                    throw DatasetError(where +
                                       ": contexts column must be a JSON array of strings");
                }
                ex.contexts = parse_contexts(arr, where);
            }
        }
        examples.push_back(std::move(ex));
    }
    return examples;
}

}  // namespace

std::vector<Example> load_dataset(const DataConfig& cfg) {
    const std::string text = read_file(cfg.input_path);
    std::vector<Example> examples = cfg.input_format == DataFormat::jsonl
                                        ? load_jsonl(text, cfg)
                                        : load_csv(text, cfg);

    auto require_column = [&](const std::string& col, const char* role) {
        for (std::size_t i = 0; i < examples.size(); ++i) {
            if (!examples[i].fields.count(col))
                throw DatasetError(std::string(role) + " column \"" + col +
                                   "\" not found in record " + std::to_string(i));
        }
    };

    if (cfg.id_column) require_column(*cfg.id_column, "id");
    if (cfg.reference_column) require_column(*cfg.reference_column, "reference");
    if (cfg.context_column) require_column(*cfg.context_column, "context");

    const auto placeholders = template_placeholders(cfg.prompt_template);
    for (const auto& name : placeholders) {
        for (std::size_t i = 0; i < examples.size(); ++i) {
            if (!examples[i].fields.count(name))
                throw DatasetError("template placeholder \"" + name +
                                   "\" not found in record " + std::to_string(i));
        }
    }

    std::set<std::string> ids;
    for (std::size_t i = 0; i < examples.size(); ++i) {
        Example& ex = examples[i];
        ex.example_id = cfg.id_column ? ex.fields.at(*cfg.id_column)
                                      : "row-" + std::to_string(i);
        if (!ids.insert(ex.example_id).second)
            throw DatasetError("duplicate example_id \"" + ex.example_id + "\"");
        if (cfg.reference_column) ex.reference = ex.fields.at(*cfg.reference_column);
        if (cfg.context_column && !ex.contexts) {
            json arr;
            try {
                arr = json::parse(ex.fields.at(*cfg.context_column));
                ex.contexts = parse_contexts(arr, "record " + std::to_string(i));
            } catch (const json::parse_error&) {
                throw DatasetError("record " + std::to_string(i) +
                                   ": contexts column must be a JSON array of strings");
            }
        }
        ex.rendered_prompt = render_prompt(cfg.prompt_template, ex.fields);
        if (ex.rendered_prompt.empty())
            throw DatasetError("record " + std::to_string(i) +
                               " rendered an empty prompt");
    }
    return examples;
}

}  // namespace evalforge
