#pragma once

#include "intentrefine/prompting.hpp"
#include "intentrefine/revision.hpp"
#include "intentrefine/types.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace intentrefine {

using nlohmann::json;

// Intentions:
//   {"type":"explicit","suggestion_code":...}
//   {"type":"reversion"}
//   {"type":"general","kind":"change_word","from_word":...,"to_word":...}
json intention_to_json(const Intention& intention);
/// Throws SchemaViolation.
Intention intention_from_json(const json& j);

/// Dataset record; last_diff_hunk is unified-diff text or null.
json case_to_json(const ReviewCase& c);
/// Normalizes line endings and validates. Throws SchemaViolation.
ReviewCase case_from_json(const json& j);

json example_to_json(const ExampleRecord& e);
ExampleRecord example_from_json(const json& j);

json strategy_to_json(const PromptStrategy& s);
PromptStrategy strategy_from_json(const json& j);

json result_to_json(const RefinementResult& r);
RefinementResult result_from_json(const json& j);

/// One line of an intentions file: {"case_id", "intention" (or null), "flags"}.
struct IntentionRecord {
    std::string case_id;
    std::optional<Intention> intention;
    std::vector<std::string> flags;
};
json intention_record_to_json(const IntentionRecord& r);
IntentionRecord intention_record_from_json(const json& j);

/// Reads a JSONL file, skipping blank lines. Throws Error on I/O failure or
/// an unparseable line (with its line number).
std::vector<json> read_jsonl(const std::filesystem::path& path);
void write_jsonl(const std::filesystem::path& path, const std::vector<json>& rows);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

std::vector<ExampleRecord> load_store_file(const std::filesystem::path& path);
std::vector<IntentionRecord> load_intentions_file(const std::filesystem::path& path);

}  // namespace intentrefine
