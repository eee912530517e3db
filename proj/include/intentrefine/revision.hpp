#pragma once

#include "intentrefine/llm.hpp"
#include "intentrefine/prompting.hpp"
#include "intentrefine/types.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace intentrefine {

/// 2*LCS(a, b) / (|a| + |b|) over bytes; 1.0 for two empty strings.
double line_similarity(std::string_view a, std::string_view b);

/// Minimum mean similarity for a fuzzy suggestion location.
inline constexpr double kLocationThreshold = 0.5;

/// Index pairs (i, j) with a[i] == b[j] along one longest common subsequence
/// of two line lists, ascending in both.
std::vector<std::pair<std::size_t, std::size_t>> lcs_line_matches(const std::vector<std::string>& a,
                                                                  const std::vector<std::string>& b);

/// Code from a model reply: the body of the first fenced block, or else the
/// whole reply minus leading and trailing prose lines.
std::string extract_code(std::string_view completion);

// Comment handling.

struct CommentMarker {
    std::string_view token;
    /// The marker only counts when followed by whitespace or end of line.
    bool needs_space = false;
};

/// Line-comment markers for a language tag; unknown tags get // and "# ".
std::vector<CommentMarker> comment_markers(const std::optional<std::string>& language_tag);

/// Offset of a line comment outside string literals, if any.
std::optional<std::size_t> find_line_comment(std::string_view line, const std::vector<CommentMarker>& markers);

bool contains_comment(std::string_view code, const std::vector<CommentMarker>& markers);

// Post-processing.

enum class PostprocessAction { TrimmedLines, RestoredSuggestion, StrippedComments, RestoredUnchangedLines, None };
const char* to_string(PostprocessAction action);
PostprocessAction parse_postprocess_action(std::string_view name);

struct PostprocessOutcome {
    std::string code;
    std::vector<PostprocessAction> actions;
    /// The suggestion could not be located and was put at the review line.
    bool fell_back = false;
};

/// Undoes the last modification: the span of `original` matching the hunk's
/// post side becomes its pre side. Lines outside the span are untouched.
/// Throws HunkNotAligned.
std::string revert_changes(std::string_view original, const DiffHunk& h, std::uint32_t review_line);

/// Output is always original-prefix + suggestion + original-suffix: the
/// suggestion is located in `raw` (verbatim, else the window of
/// |suggestion| lines with the best mean similarity), lines around it are
/// aligned against the original, stray lines are trimmed and missing ones
/// restored. Falls back to replacing the review line when no window reaches
/// kLocationThreshold.
PostprocessOutcome postprocess_explicit(std::string_view raw, std::string_view original, std::string_view suggestion,
                                        std::uint32_t review_line);

/// Single-line kinds keep every line of `original` except the review line,
/// which takes the matching line of `raw` (DeleteLineCode may drop it).
/// Model-added line comments are stripped when the intention's new code has
/// none. Multi-line kinds only get the comment rule.
PostprocessOutcome postprocess_general(std::string_view raw, std::string_view original, const GeneralKind& kind,
                                       std::uint32_t review_line,
                                       const std::optional<std::string>& language_tag = std::nullopt);

// Generation.

struct GeneratedCandidate {
    std::string code;
    PromptBundle bundle;
};

/// One model completion for the case (after SelfGenerated's example call),
/// with the code extracted. An empty extraction is retried once, then
/// EmptyCompletion is thrown.
GeneratedCandidate generate_candidate(const ReviewCase& c, const std::optional<Intention>& intention, LlmBackend& llm,
                                      const PromptStrategy& strategy, const PromptContext& ctx);

std::string generate_explicit(const ReviewCase& c, const std::string& suggestion_code, LlmBackend& llm,
                              const PromptStrategy& strategy, const PromptContext& ctx = {});
std::string generate_general(const ReviewCase& c, const GeneralKind& kind, LlmBackend& llm,
                             const PromptStrategy& strategy, const PromptContext& ctx = {});

inline constexpr std::string_view kFlagDirectGeneration = "direct_generation";
inline constexpr std::string_view kFlagReversionUnaligned = "reversion_unaligned";
inline constexpr std::string_view kFlagReversionNoHunk = "reversion_without_hunk";
inline constexpr std::string_view kFlagNoPlausibleLocation = "no_plausible_location";

struct RefinementResult {
    std::string case_id;
    /// Intention actually used; absent for direct (comment-only) generation.
    std::optional<Intention> intention;
    PromptStrategy strategy;
    std::string raw_candidate;
    std::string revised_code;
    std::vector<PostprocessAction> postprocess_actions;
    std::optional<bool> em_against_truth;
    std::vector<std::string> flags;
    std::vector<std::string> example_ids;
    std::string template_hash;
};

/// Dispatches on the intention. Reversion is rule-based and never calls the
/// model; when its hunk cannot be aligned the case falls back to the general
/// path. Without an intention, or when the strategy is not intention-guided,
/// the case goes through direct generation. Throws RefinementError.
RefinementResult refine(const ReviewCase& c, const std::optional<Intention>& intention, LlmBackend& llm,
                        const PromptStrategy& strategy, const PromptContext& ctx = {});

}  // namespace intentrefine
