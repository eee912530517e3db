#pragma once

#include "intentrefine/llm.hpp"
#include "intentrefine/types.hpp"

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace intentrefine {

// Agent 1: rule-based detection of explicit code suggestions.

/// Body of the first fenced block whose info string is exactly `suggestion`,
/// without the fence lines. Fences of other kinds are skipped whole, so a
/// suggestion fence nested inside them does not count.
/// Throws UnterminatedFence if a suggestion fence opens and never closes.
std::optional<std::string> detect_explicit(std::string_view comment);

// Agent 2: single-choice reversion classification.

struct ReversionChoice {
    int option_index = 0;
    std::string_view option_text;
    bool reversion = false;
};

/// The six options for a change kind; options 1-5 are reversions, 6 is not.
const std::array<ReversionChoice, 6>& reversion_options(ChangeKind kind);

/// Numbered option list as it appears in the prompt.
std::string format_options(ChangeKind kind);

/// First standalone integer 1..6 in a reply.
std::optional<int> parse_choice(std::string_view reply);

struct ExtractionOptions {
    std::string model = kDefaultModel;
};

LlmRequest reversion_request(const ReviewCase& c, const DiffHunk& hunk, const ExtractionOptions& opts = {});

/// False without any model call when the case has no hunk (or a hunk with no
/// changes). Retries once; throws UnparseableChoice after that.
bool classify_reversion(const ReviewCase& c, LlmBackend& llm, const ExtractionOptions& opts = {});

// Agent 3: general intention templates.

/// Parses a filled template. The earliest template prefix in the reply wins,
/// the longest one on ties. Throws UnparseableIntention for anything that does
/// not yield a kind with all slots filled.
GeneralKind parse_general_reply(std::string_view reply);

LlmRequest general_request(const ReviewCase& c, const ExtractionOptions& opts = {});

/// Retries once; throws UnparseableIntention after that.
GeneralKind extract_general(const ReviewCase& c, LlmBackend& llm, const ExtractionOptions& opts = {});

// Cascade.

inline constexpr std::string_view kFlagUnterminatedFence = "unterminated_suggestion_fence";
inline constexpr std::string_view kFlagEmptySuggestion = "empty_suggestion";
inline constexpr std::string_view kFlagUnparseableChoice = "unparseable_choice";
inline constexpr std::string_view kFlagUnparseableIntention = "unparseable_intention";

struct ExtractionOutcome {
    /// Absent only when the general agent could not be parsed.
    std::optional<Intention> intention;
    std::vector<std::string> flags;
};

/// Agent 1, then Agent 2, then Agent 3; the first positive answer wins.
ExtractionOutcome extract_intention(const ReviewCase& c, LlmBackend& llm, const ExtractionOptions& opts = {});

/// Text of line `review_line` (1-based) of `code`, or empty if out of range.
std::string review_line_text(std::string_view code, std::uint32_t review_line);

}  // namespace intentrefine
