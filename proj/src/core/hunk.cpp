#include "intentrefine/hunk.hpp"

#include "intentrefine/errors.hpp"
#include "intentrefine/text.hpp"

#include <charconv>
#include <cmath>
#include <limits>

namespace intentrefine {

namespace {

constexpr std::string_view kNoNewlineMarker = "\\ No newline at end of file";

bool parse_uint(std::string_view& s, std::uint32_t& out)
{
    auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    if (res.ec != std::errc{} || res.ptr == s.data())
        return false;
    s.remove_prefix(static_cast<std::size_t>(res.ptr - s.data()));
    return true;
}

// "-a[,b]" or "+c[,d]"; a missing count means 1.
bool parse_range(std::string_view& s, char sign, std::uint32_t& start, std::uint32_t& count)
{
    if (s.empty() || s.front() != sign)
        return false;
    s.remove_prefix(1);
    if (!parse_uint(s, start))
        return false;
    count = 1;
    if (!s.empty() && s.front() == ',') {
        s.remove_prefix(1);
        if (!parse_uint(s, count))
            return false;
    }
    return true;
}

void parse_header(std::string_view line, DiffHunk& h)
{
    std::string_view s = line;
    if (!s.starts_with("@@ "))
        throw MalformedHunk("missing @@ header");
    s.remove_prefix(3);
    if (!parse_range(s, '-', h.old_start, h.old_count))
        throw MalformedHunk("bad old range in header: " + std::string(line));
    if (!s.starts_with(" "))
        throw MalformedHunk("bad header: " + std::string(line));
    s.remove_prefix(1);
    if (!parse_range(s, '+', h.new_start, h.new_count))
        throw MalformedHunk("bad new range in header: " + std::string(line));
    if (!s.starts_with(" @@"))
        throw MalformedHunk("unterminated header: " + std::string(line));
}

struct Counts {
    std::uint32_t old_side = 0;
    std::uint32_t new_side = 0;
};

Counts count_sides(const DiffHunk& h)
{
    Counts c;
    for (const auto& l : h.lines) {
        if (l.tag != LineTag::Added)
            ++c.old_side;
        if (l.tag != LineTag::Removed)
            ++c.new_side;
    }
    return c;
}

// Parses body lines [first, last) of `lines` into h. Stops early (returning
// the index it stopped at) when `stop_at_header` and another header starts.
std::size_t parse_body(const std::vector<std::string>& lines, std::size_t first, DiffHunk& h,
                       HunkParseMode mode, bool stop_at_header)
{
    const std::uint32_t want_old = h.old_count;
    const std::uint32_t want_new = h.new_count;
    Counts seen;
    std::size_t trailing_blank = 0;
    std::size_t i = first;
    for (; i < lines.size(); ++i) {
        const std::string& raw = lines[i];
        if (stop_at_header && raw.starts_with("@@ "))
            break;
        if (raw.starts_with("\\")) {
            if (raw != kNoNewlineMarker && !raw.starts_with("\\ "))
                throw MalformedHunk("unknown marker line: " + raw);
            h.no_newline_at_end = true;
            continue;
        }
        if (stop_at_header && mode == HunkParseMode::Strict && seen.old_side == want_old &&
            seen.new_side == want_new) {
            // Counts are satisfied: anything else belongs to the next section of a patch.
            break;
        }
        DiffLine dl;
        if (raw.empty()) {
            // Some tools strip the single space off blank context lines.
            dl.tag = LineTag::Context;
            ++trailing_blank;
        } else {
            trailing_blank = 0;
            switch (raw.front()) {
            case ' ': dl.tag = LineTag::Context; break;
            case '+': dl.tag = LineTag::Added; break;
            case '-': dl.tag = LineTag::Removed; break;
            default: throw MalformedHunk("unknown line prefix in: " + raw);
            }
            dl.content = raw.substr(1);
        }
        if (dl.tag != LineTag::Added)
            ++seen.old_side;
        if (dl.tag != LineTag::Removed)
            ++seen.new_side;
        h.lines.push_back(std::move(dl));
    }

    // Blank lines trailing the body that overflow the header are padding, not context.
    while (trailing_blank > 0 && (seen.old_side > want_old || seen.new_side > want_new)) {
        h.lines.pop_back();
        --seen.old_side;
        --seen.new_side;
        --trailing_blank;
    }

    if (h.lines.empty())
        throw MalformedHunk("hunk has no lines");
    if (mode == HunkParseMode::Strict) {
        if (seen.old_side != want_old || seen.new_side != want_new) {
            throw MalformedHunk("header declares -" + std::to_string(want_old) + " +" + std::to_string(want_new) +
                                " but body has -" + std::to_string(seen.old_side) + " +" +
                                std::to_string(seen.new_side));
        }
    } else {
        if (seen.old_side > want_old || seen.new_side > want_new)
            throw MalformedHunk("partial hunk body is longer than its header declares");
        h.old_count = seen.old_side;
        h.new_count = seen.new_side;
    }
    return i;
}

}  // namespace

DiffHunk parse_unified_hunk(std::string_view text, HunkParseMode mode)
{
    auto lines = split_lines(normalize_newlines(text));
    if (lines.empty())
        throw MalformedHunk("empty text");
    DiffHunk h;
    parse_header(lines.front(), h);
    parse_body(lines, 1, h, mode, false);
    return h;
}

PartialHunk parse_partial_hunk(std::string_view text)
{
    auto lines = split_lines(normalize_newlines(text));
    if (lines.empty())
        throw MalformedHunk("empty text");
    PartialHunk p;
    parse_header(lines.front(), p.hunk);
    p.declared_old_count = p.hunk.old_count;
    p.declared_new_count = p.hunk.new_count;
    parse_body(lines, 1, p.hunk, HunkParseMode::Partial, false);
    return p;
}

std::vector<DiffHunk> parse_unified_patch(std::string_view text)
{
    auto lines = split_lines(normalize_newlines(text));
    std::vector<DiffHunk> hunks;
    std::size_t i = 0;
    while (i < lines.size()) {
        if (!lines[i].starts_with("@@ ")) {
            // File headers and git extended headers.
            ++i;
            continue;
        }
        DiffHunk h;
        parse_header(lines[i], h);
        i = parse_body(lines, i + 1, h, HunkParseMode::Strict, true);
        hunks.push_back(std::move(h));
    }
    return hunks;
}

std::string render_hunk(const DiffHunk& h)
{
    std::string out = "@@ -" + std::to_string(h.old_start) + "," + std::to_string(h.old_count) + " +" +
                      std::to_string(h.new_start) + "," + std::to_string(h.new_count) + " @@";
    for (const auto& l : h.lines) {
        out.push_back('\n');
        switch (l.tag) {
        case LineTag::Context: out.push_back(' '); break;
        case LineTag::Added: out.push_back('+'); break;
        case LineTag::Removed: out.push_back('-'); break;
        }
        out += l.content;
    }
    if (h.no_newline_at_end) {
        out.push_back('\n');
        out += kNoNewlineMarker;
    }
    return out;
}

std::vector<std::string> pre_side(const DiffHunk& h)
{
    std::vector<std::string> out;
    for (const auto& l : h.lines)
        if (l.tag != LineTag::Added)
            out.push_back(l.content);
    return out;
}

std::vector<std::string> post_side(const DiffHunk& h)
{
    std::vector<std::string> out;
    for (const auto& l : h.lines)
        if (l.tag != LineTag::Removed)
            out.push_back(l.content);
    return out;
}

ChangeKind change_kind(const DiffHunk& h)
{
    bool added = false;
    bool removed = false;
    for (const auto& l : h.lines) {
        added |= l.tag == LineTag::Added;
        removed |= l.tag == LineTag::Removed;
    }
    if (added && removed)
        return ChangeKind::Revision;
    if (added)
        return ChangeKind::Addition;
    if (removed)
        return ChangeKind::Deletion;
    throw NoChange();
}

void check_hunk(const DiffHunk& h)
{
    if (h.lines.empty())
        throw MalformedHunk("hunk has no lines");
    auto c = count_sides(h);
    if (c.old_side != h.old_count || c.new_side != h.new_count)
        throw MalformedHunk("counts disagree with lines");
    for (const auto& l : h.lines)
        if (l.content.find('\n') != std::string::npos)
            throw MalformedHunk("line content contains a newline");
}

CodeSpan locate_lines(const std::vector<std::string>& code, const std::vector<std::string>& needle,
                      std::uint32_t hint_line)
{
    if (needle.empty())
        throw HunkNotAligned("hunk has no post-modification lines to align");
    if (needle.size() > code.size())
        throw HunkNotAligned("hunk is longer than the code");

    std::optional<CodeSpan> best;
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + needle.size() <= code.size(); ++i) {
        bool match = true;
        for (std::size_t j = 0; j < needle.size() && match; ++j)
            match = code[i + j] == needle[j];
        if (!match)
            continue;
        CodeSpan span{static_cast<std::uint32_t>(i + 1), static_cast<std::uint32_t>(i + needle.size())};
        double mid = (static_cast<double>(span.start_line) + span.end_line) / 2.0;
        double dist = std::fabs(mid - static_cast<double>(hint_line));
        if (dist < best_dist) {
            best_dist = dist;
            best = span;
        }
    }
    if (!best)
        throw HunkNotAligned("post-modification lines do not occur in the code");
    return *best;
}

CodeSpan locate_hunk_in_code(std::string_view code, const DiffHunk& h, std::uint32_t hint_line)
{
    if (code.empty())
        throw HunkNotAligned("code is empty");
    return locate_lines(split_lines(normalize_newlines(code)), post_side(h), hint_line);
}

}  // namespace intentrefine
