#include "intentrefine/errors.hpp"
#include "intentrefine/intent.hpp"
#include "intentrefine/text.hpp"

namespace intentrefine {

namespace {

struct Fence {
    char ch = 0;
    std::size_t len = 0;
    std::string info;
};

// CommonMark-style opening fence: up to three spaces, then 3+ backticks or tildes.
std::optional<Fence> opening_fence(std::string_view line)
{
    std::size_t indent = 0;
    while (indent < line.size() && line[indent] == ' ')
        ++indent;
    if (indent > 3 || indent >= line.size())
        return std::nullopt;
    char ch = line[indent];
    if (ch != '`' && ch != '~')
        return std::nullopt;
    std::size_t n = indent;
    while (n < line.size() && line[n] == ch)
        ++n;
    std::size_t len = n - indent;
    if (len < 3)
        return std::nullopt;
    std::string_view info = trim(line.substr(n));
    if (ch == '`' && info.find('`') != std::string_view::npos)
        return std::nullopt;
    return Fence{ch, len, std::string(info)};
}

bool closes(std::string_view line, const Fence& open)
{
    std::string_view t = trim(line);
    if (t.size() < open.len)
        return false;
    for (char c : t)
        if (c != open.ch)
            return false;
    return true;
}

}  // namespace

std::optional<std::string> detect_explicit(std::string_view comment)
{
    auto lines = split_lines(normalize_newlines(comment));
    for (std::size_t i = 0; i < lines.size(); ++i) {
        auto fence = opening_fence(lines[i]);
        if (!fence)
            continue;
        std::size_t j = i + 1;
        while (j < lines.size() && !closes(lines[j], *fence))
            ++j;
        if (fence->info == "suggestion") {
            if (j == lines.size())
                throw UnterminatedFence();
            std::vector<std::string> body(lines.begin() + static_cast<std::ptrdiff_t>(i + 1),
                                          lines.begin() + static_cast<std::ptrdiff_t>(j));
            return join_lines(body);
        }
        // Skip over the other block; an unclosed one runs to the end.
        i = j;
    }
    return std::nullopt;
}

std::string review_line_text(std::string_view code, std::uint32_t review_line)
{
    auto lines = split_lines(normalize_newlines(code));
    if (review_line < 1 || review_line > lines.size())
        return {};
    return lines[review_line - 1];
}

}  // namespace intentrefine
