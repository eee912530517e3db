#pragma once

#include "intentrefine/intent.hpp"
#include "intentrefine/llm.hpp"
#include "intentrefine/revision.hpp"
#include "intentrefine/types.hpp"

#include <nlohmann/json.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace intentrefine {

// Exact match.

struct EmOptions {
    bool normalize_newlines = true;
    bool strip_trailing_whitespace = true;
    bool strip_blank_edges = true;

    /// Byte equality.
    static EmOptions strict() { return {false, false, false}; }
    nlohmann::json to_json() const;
};

std::string normalize_for_em(std::string_view text, const EmOptions& opts = {});
bool exact_match(std::string_view candidate, std::string_view truth, const EmOptions& opts = {});

/// Line diff of two texts as "-old" / "+new" lines from one LCS alignment,
/// after EM normalization. Empty when they match.
std::string line_diff(std::string_view candidate, std::string_view truth, const EmOptions& opts = {});

struct EmBucket {
    std::size_t total = 0;
    std::size_t correct = 0;
    double percent() const { return total ? 100.0 * static_cast<double>(correct) / static_cast<double>(total) : 0.0; }
};

struct EvalReport {
    EmBucket overall;
    /// Keyed by the intention category used at refinement time ("explicit",
    /// "reversion", "general", or "none"). Buckets without cases are absent.
    std::map<std::string, EmBucket> by_category;
    /// Keyed by PromptStrategy::label().
    std::map<std::string, EmBucket> by_strategy;

    /// Overall EM is null for an empty result list.
    nlohmann::json to_json() const;
};

/// Truths are keyed by case id. Throws MissingTruth.
EvalReport evaluate(const std::vector<RefinementResult>& results, const std::map<std::string, std::string>& truths,
                    const EmOptions& opts = {});

// Dataset cleaning.

enum class CleanMethod { IntentionBased, CommentBased };
const char* to_string(CleanMethod m);
CleanMethod parse_clean_method(std::string_view name);

struct CleanVerdict {
    std::string case_id;
    CleanMethod method = CleanMethod::IntentionBased;
    /// Absent when the reply could not be parsed (the case is Unlabeled).
    std::optional<bool> valid;
    std::optional<std::string> rationale_text;
};

inline constexpr const char* kFlagUnlabeled = "unlabeled";

/// VALID / INVALID on the first non-blank line, case-insensitive, trailing
/// punctuation allowed. Throws UnparseableVerdict.
bool parse_verdict(std::string_view reply);

/// Throws Error when the case has no revised code, or when the intention
/// method is used without an intention.
LlmRequest clean_request(const ReviewCase& c, const std::optional<Intention>& intention, CleanMethod method,
                         const std::string& model = kDefaultModel);

/// One retry on an unparseable reply; after that the verdict is Unlabeled.
CleanVerdict clean_case(const ReviewCase& c, const std::optional<Intention>& intention, LlmBackend& llm,
                        CleanMethod method, const std::string& model = kDefaultModel);

nlohmann::json verdict_to_json(const CleanVerdict& v);

struct ConfusionReport {
    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
    /// Verdicts skipped because they are Unlabeled.
    std::size_t unlabeled = 0;
    std::optional<double> accuracy;   // (tp+tn)/all
    std::optional<double> precision;  // tp/(tp+fp)

    nlohmann::json to_json() const;
};

ConfusionReport confusion_from_counts(std::size_t tp, std::size_t fp, std::size_t tn, std::size_t fn);

struct GoldLabel {
    std::string case_id;
    bool valid = false;
};

/// Positive = valid. Verdicts and labels must be aligned by case id; throws
/// LabelMismatch otherwise.
ConfusionReport confusion(const std::vector<CleanVerdict>& verdicts, const std::vector<GoldLabel>& gold);

}  // namespace intentrefine
