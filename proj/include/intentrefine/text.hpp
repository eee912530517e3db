#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace intentrefine {

/// CRLF and lone CR become LF.
std::string normalize_newlines(std::string_view text);

/// Splits on LF. A single trailing LF does not produce an empty final line,
/// so "a\nb\n" and "a\nb" both give {"a", "b"}. Empty input gives no lines.
std::vector<std::string> split_lines(std::string_view text);

/// Joins with LF, appending a final LF when `trailing_newline` is set.
std::string join_lines(const std::vector<std::string>& lines, bool trailing_newline = false);

inline bool ends_with_newline(std::string_view text) { return !text.empty() && text.back() == '\n'; }

std::string_view trim(std::string_view s);
std::string_view rtrim(std::string_view s);
std::string to_lower(std::string_view s);

}  // namespace intentrefine
