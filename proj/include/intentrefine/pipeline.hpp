#pragma once

#include "intentrefine/eval.hpp"
#include "intentrefine/ingest.hpp"
#include "intentrefine/json_io.hpp"
#include "intentrefine/llm.hpp"
#include "intentrefine/prompting.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace intentrefine {

enum class BackendKind { Live, Replay, Mock, Record };
const char* to_string(BackendKind k);
BackendKind parse_backend_kind(std::string_view name);

struct BackendOptions {
    BackendKind kind = BackendKind::Replay;
    /// Replay source, or the file a recording run appends to.
    std::optional<std::filesystem::path> fixtures;
    /// Mock reply; empty means echo the first fenced block of the request.
    std::string mock_response;
};

/// Throws Error for a replay/record backend without a fixture path.
std::shared_ptr<LlmBackend> make_backend(const BackendOptions& opts);

/// The default mock reply: the first fenced block of the request's user text
/// (so generation returns the original code), else "6".
std::string echo_mock_reply(const LlmRequest& req);

struct PipelineConfig {
    std::filesystem::path dataset;
    std::filesystem::path output_dir;
    BackendOptions backend;
    std::optional<std::filesystem::path> store;
    /// Precomputed intentions; extraction is skipped when set.
    std::optional<std::filesystem::path> intentions;
    PromptStrategy strategy;
    std::string model = kDefaultModel;
    unsigned jobs = 4;
    EmOptions em;

    /// Every field that can change the outputs. output_dir and jobs are left out.
    nlohmann::json to_json() const;
};

struct CaseError {
    std::string case_id;
    std::string stage;
    std::string message;
    nlohmann::json to_json() const;
};

/// Runs fn(i) for i in [0, n) on up to `jobs` threads. An exception from one
/// item is captured and returned for that index.
std::vector<std::optional<std::string>> parallel_for(std::size_t n, unsigned jobs,
                                                     const std::function<void(std::size_t)>& fn);

struct ExtractionRun {
    std::vector<IntentionRecord> records;  // input order, failed cases omitted
    std::vector<CaseError> errors;
};
ExtractionRun run_extraction(const std::vector<ReviewCase>& cases, LlmBackend& llm, const std::string& model,
                             unsigned jobs);

struct RefinementRun {
    std::vector<RefinementResult> results;  // input order, failed cases omitted
    std::vector<CaseError> errors;
};
/// `intentions` is looked up by case id; cases without an entry get none.
RefinementRun run_refinement(const std::vector<ReviewCase>& cases, const std::vector<IntentionRecord>& intentions,
                             LlmBackend& llm, const PromptStrategy& strategy, const PromptContext& ctx, unsigned jobs);

struct PipelineSummary {
    std::size_t cases = 0;
    std::size_t rejects = 0;
    std::size_t errors = 0;
    std::size_t scored = 0;
    EvalReport report;
};

/// Extract -> refine -> evaluate. Writes into config.output_dir:
///   intentions.jsonl (intention mode only), results.jsonl, metrics.json,
///   manifest.json, errors.jsonl, rejects.jsonl.
/// Per-case failures go to errors.jsonl; only configuration and I/O problems
/// throw.
PipelineSummary run_pipeline(const PipelineConfig& config, LlmBackend& llm);
PipelineSummary run_pipeline(const PipelineConfig& config);

/// SHA-256 of a file's bytes; nullopt when no path is given.
std::optional<std::string> file_hash(const std::optional<std::filesystem::path>& path);

}  // namespace intentrefine
