#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace intentrefine {

enum class LineTag { Context, Added, Removed };

struct DiffLine {
    LineTag tag = LineTag::Context;
    std::string content;

    bool operator==(const DiffLine&) const = default;
};

/// One unified-diff hunk. Counts follow the header semantics: the old side is
/// Context + Removed, the new side is Context + Added.
struct DiffHunk {
    std::uint32_t old_start = 0;
    std::uint32_t old_count = 0;
    std::uint32_t new_start = 0;
    std::uint32_t new_count = 0;
    std::vector<DiffLine> lines;
    /// A "\ No newline at end of file" marker was present.
    bool no_newline_at_end = false;

    bool operator==(const DiffHunk&) const = default;
};

enum class ChangeKind { Addition, Deletion, Revision };

/// 1-based inclusive line range.
struct CodeSpan {
    std::uint32_t start_line = 1;
    std::uint32_t end_line = 1;

    std::uint32_t size() const { return end_line - start_line + 1; }
    bool operator==(const CodeSpan&) const = default;
};

// The six general-suggestion templates.
struct ChangeWord {
    std::string from_word;
    std::string to_word;
    bool operator==(const ChangeWord&) const = default;
};
struct DeleteWord {
    std::string word;
    bool operator==(const DeleteWord&) const = default;
};
struct ChangeLineCode {
    std::string new_code;
    bool operator==(const ChangeLineCode&) const = default;
};
struct DeleteLineCode {
    std::string code;
    bool operator==(const DeleteLineCode&) const = default;
};
struct DeleteLines {
    std::string code;
    bool operator==(const DeleteLines&) const = default;
};
struct ChangeLines {
    std::string old_code;
    std::string new_code;
    bool operator==(const ChangeLines&) const = default;
};

using GeneralKind = std::variant<ChangeWord, DeleteWord, ChangeLineCode, DeleteLineCode, DeleteLines, ChangeLines>;

bool is_single_line(const GeneralKind& kind);

struct ExplicitIntention {
    std::string suggestion_code;
    bool operator==(const ExplicitIntention&) const = default;
};
struct ReversionIntention {
    bool operator==(const ReversionIntention&) const = default;
};
struct GeneralIntention {
    GeneralKind kind;
    bool operator==(const GeneralIntention&) const = default;
};

using Intention = std::variant<ExplicitIntention, ReversionIntention, GeneralIntention>;

/// "explicit", "reversion" or "general".
const char* category_name(const Intention& intention);

/// Template sentence with slots inlined, e.g. "Change word (recieve) to (receive)".
std::string render_intention(const Intention& intention);
std::string render_general(const GeneralKind& kind);

/// Snake-case tag of a general kind ("change_word", ...).
const char* general_kind_name(const GeneralKind& kind);

struct ReviewCase {
    std::string id;
    std::string original_code;
    std::string review_comment;
    std::uint32_t review_line = 1;
    std::optional<DiffHunk> last_diff_hunk;
    std::optional<std::string> revised_code;
    std::optional<std::string> language_tag;
};

/// Throws SchemaViolation when the review line is out of range or the hunk
/// cannot be located in the original code.
void validate_case(const ReviewCase& c);

const char* to_string(LineTag tag);
const char* to_string(ChangeKind kind);

}  // namespace intentrefine
