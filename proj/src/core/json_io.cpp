#include "intentrefine/json_io.hpp"

#include "intentrefine/errors.hpp"
#include "intentrefine/hunk.hpp"
#include "intentrefine/overloaded.hpp"
#include "intentrefine/text.hpp"

#include <fstream>
#include <sstream>

namespace intentrefine {

namespace {

std::string req_string(const json& j, const char* key)
{
    auto it = j.find(key);
    if (it == j.end())
        throw SchemaViolation(std::string("missing field ") + key);
    if (!it->is_string())
        throw SchemaViolation(std::string("field ") + key + " must be a string");
    return it->get<std::string>();
}

std::optional<std::string> opt_string(const json& j, const char* key)
{
    auto it = j.find(key);
    if (it == j.end() || it->is_null())
        return std::nullopt;
    if (!it->is_string())
        throw SchemaViolation(std::string("field ") + key + " must be a string or null");
    return it->get<std::string>();
}

std::uint32_t req_line(const json& j, const char* key)
{
    auto it = j.find(key);
    if (it == j.end())
        throw SchemaViolation(std::string("missing field ") + key);
    if (!it->is_number_integer())
        throw SchemaViolation(std::string("field ") + key + " must be an integer");
    auto v = it->get<long long>();
    if (v < 1 || v > 0xFFFFFFFFll)
        throw SchemaViolation(std::string("field ") + key + " must be >= 1");
    return static_cast<std::uint32_t>(v);
}

std::string nonempty(std::string s, const char* what)
{
    if (trim(s).empty())
        throw SchemaViolation(std::string(what) + " is empty");
    return s;
}

std::string single_line(std::string s, const char* what)
{
    if (s.find('\n') != std::string::npos)
        throw SchemaViolation(std::string(what) + " must be a single line");
    return nonempty(std::move(s), what);
}

json optional_text(const std::optional<std::string>& s) { return s ? json(*s) : json(nullptr); }

}  // namespace

json intention_to_json(const Intention& intention)
{
    return std::visit(
        overloaded{
            [](const ExplicitIntention& e) { return json{{"type", "explicit"}, {"suggestion_code", e.suggestion_code}}; },
            [](const ReversionIntention&) { return json{{"type", "reversion"}}; },
            [](const GeneralIntention& g) {
                json j{{"type", "general"}, {"kind", general_kind_name(g.kind)}};
                std::visit(overloaded{
                               [&](const ChangeWord& k) {
                                   j["from_word"] = k.from_word;
                                   j["to_word"] = k.to_word;
                               },
                               [&](const DeleteWord& k) { j["word"] = k.word; },
                               [&](const ChangeLineCode& k) { j["new_code"] = k.new_code; },
                               [&](const DeleteLineCode& k) { j["code"] = k.code; },
                               [&](const DeleteLines& k) { j["code"] = k.code; },
                               [&](const ChangeLines& k) {
                                   j["old_code"] = k.old_code;
                                   j["new_code"] = k.new_code;
                               },
                           },
                           g.kind);
                return j;
            },
        },
        intention);
}

Intention intention_from_json(const json& j)
{
    if (!j.is_object())
        throw SchemaViolation("intention must be an object");
    auto type = req_string(j, "type");
    if (type == "explicit")
        return ExplicitIntention{nonempty(req_string(j, "suggestion_code"), "suggestion_code")};
    if (type == "reversion")
        return ReversionIntention{};
    if (type != "general")
        throw SchemaViolation("unknown intention type " + type);
    auto kind = req_string(j, "kind");
    if (kind == "change_word")
        return GeneralIntention{ChangeWord{single_line(req_string(j, "from_word"), "from_word"),
                                           single_line(req_string(j, "to_word"), "to_word")}};
    if (kind == "delete_word")
        return GeneralIntention{DeleteWord{single_line(req_string(j, "word"), "word")}};
    if (kind == "change_line_code")
        return GeneralIntention{ChangeLineCode{single_line(req_string(j, "new_code"), "new_code")}};
    if (kind == "delete_line_code")
        return GeneralIntention{DeleteLineCode{single_line(req_string(j, "code"), "code")}};
    if (kind == "delete_lines")
        return GeneralIntention{DeleteLines{nonempty(req_string(j, "code"), "code")}};
    if (kind == "change_lines")
        return GeneralIntention{ChangeLines{nonempty(req_string(j, "old_code"), "old_code"),
                                            nonempty(req_string(j, "new_code"), "new_code")}};
    throw SchemaViolation("unknown general kind " + kind);
}

json case_to_json(const ReviewCase& c)
{
    return json{{"id", c.id},
                {"original_code", c.original_code},
                {"review_comment", c.review_comment},
                {"review_line", c.review_line},
                {"last_diff_hunk", c.last_diff_hunk ? json(render_hunk(*c.last_diff_hunk)) : json(nullptr)},
                {"revised_code", optional_text(c.revised_code)},
                {"language_tag", optional_text(c.language_tag)}};
}

ReviewCase case_from_json(const json& j)
{
    if (!j.is_object())
        throw SchemaViolation("record must be a JSON object");
    ReviewCase c;
    c.id = req_string(j, "id");
    c.original_code = normalize_newlines(req_string(j, "original_code"));
    c.review_comment = normalize_newlines(req_string(j, "review_comment"));
    c.review_line = req_line(j, "review_line");
    if (auto hunk = opt_string(j, "last_diff_hunk")) {
        try {
            c.last_diff_hunk = parse_unified_hunk(*hunk);
        } catch (const MalformedHunk& e) {
            throw SchemaViolation(std::string("last_diff_hunk: ") + e.what());
        }
    }
    if (auto rc = opt_string(j, "revised_code"))
        c.revised_code = normalize_newlines(*rc);
    c.language_tag = opt_string(j, "language_tag");
    validate_case(c);
    return c;
}

json example_to_json(const ExampleRecord& e)
{
    return json{{"id", e.id},
                {"key_text", e.key_text},
                {"original_code", e.original_code},
                {"review_comment", e.review_comment},
                {"intention", intention_to_json(e.intention)},
                {"review_line", e.review_line},
                {"revised_code", e.revised_code}};
}

ExampleRecord example_from_json(const json& j)
{
    ExampleRecord e;
    e.id = req_string(j, "id");
    e.key_text = nonempty(req_string(j, "key_text"), "key_text");
    e.original_code = req_string(j, "original_code");
    e.review_comment = j.value("review_comment", "");
    e.intention = intention_from_json(j.at("intention"));
    e.review_line = req_line(j, "review_line");
    e.revised_code = nonempty(req_string(j, "revised_code"), "revised_code");
    return e;
}

json strategy_to_json(const PromptStrategy& s)
{
    return json{{"kind", to_string(s.kind)},
                {"intention_mode", s.intention_mode},
                {"input_mode", to_string(s.input_mode)},
                {"seed", s.seed}};
}

PromptStrategy strategy_from_json(const json& j)
{
    PromptStrategy s;
    s.kind = parse_strategy_kind(j.at("kind").get<std::string>());
    s.intention_mode = j.at("intention_mode").get<bool>();
    s.input_mode = parse_input_mode(j.at("input_mode").get<std::string>());
    s.seed = j.value("seed", std::uint64_t{0});
    return s;
}

json result_to_json(const RefinementResult& r)
{
    json actions = json::array();
    for (auto a : r.postprocess_actions)
        actions.push_back(to_string(a));
    return json{{"case_id", r.case_id},
                {"intention", r.intention ? intention_to_json(*r.intention) : json(nullptr)},
                {"strategy", strategy_to_json(r.strategy)},
                {"raw_candidate", r.raw_candidate},
                {"revised_code", r.revised_code},
                {"postprocess_actions", actions},
                {"em_against_truth", r.em_against_truth ? json(*r.em_against_truth) : json(nullptr)},
                {"flags", r.flags},
                {"example_ids", r.example_ids},
                {"template_hash", r.template_hash}};
}

RefinementResult result_from_json(const json& j)
{
    RefinementResult r;
    r.case_id = req_string(j, "case_id");
    if (j.contains("intention") && !j.at("intention").is_null())
        r.intention = intention_from_json(j.at("intention"));
    r.strategy = strategy_from_json(j.at("strategy"));
    r.raw_candidate = j.value("raw_candidate", "");
    r.revised_code = req_string(j, "revised_code");
    for (const auto& a : j.value("postprocess_actions", json::array()))
        r.postprocess_actions.push_back(parse_postprocess_action(a.get<std::string>()));
    if (j.contains("em_against_truth") && !j.at("em_against_truth").is_null())
        r.em_against_truth = j.at("em_against_truth").get<bool>();
    r.flags = j.value("flags", std::vector<std::string>{});
    r.example_ids = j.value("example_ids", std::vector<std::string>{});
    r.template_hash = j.value("template_hash", "");
    return r;
}

json intention_record_to_json(const IntentionRecord& r)
{
    return json{{"case_id", r.case_id},
                {"intention", r.intention ? intention_to_json(*r.intention) : json(nullptr)},
                {"flags", r.flags}};
}

IntentionRecord intention_record_from_json(const json& j)
{
    IntentionRecord r;
    r.case_id = req_string(j, "case_id");
    if (j.contains("intention") && !j.at("intention").is_null())
        r.intention = intention_from_json(j.at("intention"));
    r.flags = j.value("flags", std::vector<std::string>{});
    return r;
}

std::vector<json> read_jsonl(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open " + path.string());
    std::vector<json> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty())
            continue;
        try {
            rows.push_back(json::parse(line));
        } catch (const json::exception& e) {
            throw Error(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return rows;
}

void write_jsonl(const std::filesystem::path& path, const std::vector<json>& rows)
{
    std::string out;
    for (const auto& r : rows) {
        out += r.dump();
        out.push_back('\n');
    }
    write_file(path, out);
}

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view content)
{
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error("cannot write " + path.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out)
        throw Error("write failed for " + path.string());
}

std::vector<ExampleRecord> load_store_file(const std::filesystem::path& path)
{
    std::vector<ExampleRecord> out;
    std::size_t row = 0;
    for (const auto& j : read_jsonl(path)) {
        ++row;
        try {
            out.push_back(example_from_json(j));
        } catch (const std::exception& e) {
            throw Error(path.string() + ": record " + std::to_string(row) + ": " + e.what());
        }
    }
    return out;
}

std::vector<IntentionRecord> load_intentions_file(const std::filesystem::path& path)
{
    std::vector<IntentionRecord> out;
    for (const auto& j : read_jsonl(path))
        out.push_back(intention_record_from_json(j));
    return out;
}

}  // namespace intentrefine
