#pragma once

#include "intentrefine/types.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace intentrefine {

enum class HunkParseMode {
    /// Line counts must match the header exactly.
    Strict,
    /// Lines may stop short of the header counts, as in the truncated hunks
    /// attached to review comments. Counts are recomputed from the lines read.
    Partial,
};

/// A hunk as delivered by a review-comment API together with the counts
/// its header declared before truncation.
struct PartialHunk {
    DiffHunk hunk;
    std::uint32_t declared_old_count = 0;
    std::uint32_t declared_new_count = 0;
};

DiffHunk parse_unified_hunk(std::string_view text, HunkParseMode mode = HunkParseMode::Strict);
PartialHunk parse_partial_hunk(std::string_view text);

/// Splits a multi-hunk file patch (optionally preceded by ---/+++ headers)
/// into hunks. Every hunk is parsed strictly.
std::vector<DiffHunk> parse_unified_patch(std::string_view text);

/// Canonical form: "@@ -a,b +c,d @@" then one prefixed line per DiffLine.
/// No trailing newline.
std::string render_hunk(const DiffHunk& h);

std::vector<std::string> pre_side(const DiffHunk& h);
std::vector<std::string> post_side(const DiffHunk& h);

ChangeKind change_kind(const DiffHunk& h);

/// Checks the count and non-emptiness invariants, throwing MalformedHunk.
void check_hunk(const DiffHunk& h);

/// Finds the consecutive lines of `code` equal to post_side(h). With several
/// occurrences, picks the one whose midpoint is nearest `hint_line`, earliest
/// on ties. Throws HunkNotAligned when there is no occurrence.
CodeSpan locate_hunk_in_code(std::string_view code, const DiffHunk& h, std::uint32_t hint_line);

/// Same search over already-split lines.
CodeSpan locate_lines(const std::vector<std::string>& code, const std::vector<std::string>& needle,
                      std::uint32_t hint_line);

}  // namespace intentrefine
