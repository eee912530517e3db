#include "intentrefine/errors.hpp"
#include "intentrefine/hunk.hpp"
#include "intentrefine/overloaded.hpp"
#include "intentrefine/revision.hpp"
#include "intentrefine/text.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <set>

namespace intentrefine {

namespace {

using Lines = std::vector<std::string>;

Lines slice(const Lines& v, std::size_t from, std::size_t to)
{
    return Lines(v.begin() + static_cast<std::ptrdiff_t>(from), v.begin() + static_cast<std::ptrdiff_t>(to));
}

std::size_t lcs_length(const Lines& a, const Lines& b) { return lcs_line_matches(a, b).size(); }

// Cost of explaining `raw` by `orig[s..p)` for the cheapest free start s,
// for every p: each unmatched raw line costs 1 (trimmed), each unmatched
// original line after s costs 1 (restored). Original lines before the first
// one the raw text covers are free, since models often omit leading context.
std::vector<std::size_t> prefix_costs(const Lines& raw, const Lines& orig)
{
    const std::size_t n = orig.size();
    std::vector<std::size_t> prev(n + 1, 0), cur(n + 1, 0);
    for (std::size_t i = 1; i <= raw.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= n; ++j) {
            std::size_t best = std::min(prev[j] + 1, cur[j - 1] + 1);
            if (raw[i - 1] == orig[j - 1])
                best = std::min(best, prev[j - 1]);
            cur[j] = best;
        }
        std::swap(prev, cur);
    }
    return prev;
}

// Mirror of prefix_costs for the text after the suggestion: entry q is the
// cost of explaining `raw` by `orig[q..e)` with a free end e.
std::vector<std::size_t> suffix_costs(const Lines& raw, const Lines& orig)
{
    Lines r(raw.rbegin(), raw.rend());
    Lines o(orig.rbegin(), orig.rend());
    auto rev = prefix_costs(r, o);
    std::vector<std::size_t> out(orig.size() + 1);
    for (std::size_t q = 0; q <= orig.size(); ++q)
        out[q] = rev[orig.size() - q];
    return out;
}

struct Location {
    std::size_t start = 0;
    bool verbatim = false;
};

std::optional<std::size_t> find_verbatim(const Lines& hay, const Lines& needle)
{
    if (needle.empty() || needle.size() > hay.size())
        return std::nullopt;
    for (std::size_t i = 0; i + needle.size() <= hay.size(); ++i)
        if (std::equal(needle.begin(), needle.end(), hay.begin() + static_cast<std::ptrdiff_t>(i)))
            return i;
    return std::nullopt;
}

Location locate_suggestion(const Lines& raw, const Lines& sugg)
{
    if (auto at = find_verbatim(raw, sugg))
        return {*at, true};
    if (raw.empty())
        throw NoPlausibleLocation(0.0);

    std::vector<double> best_line(raw.size(), 0.0);
    for (std::size_t i = 0; i < raw.size(); ++i)
        for (const auto& s : sugg)
            best_line[i] = std::max(best_line[i], line_similarity(raw[i], s));

    const std::size_t window = std::min(sugg.size(), raw.size());
    double best_mean = -1.0;
    std::size_t best_start = 0;
    for (std::size_t i = 0; i + window <= raw.size(); ++i) {
        double sum = 0.0;
        for (std::size_t k = 0; k < window; ++k)
            sum += best_line[i + k];
        double mean = sum / static_cast<double>(window);
        if (mean > best_mean) {
            best_mean = mean;
            best_start = i;
        }
    }
    if (best_mean < kLocationThreshold)
        throw NoPlausibleLocation(best_mean);
    return {best_start, false};
}

std::string finish(const Lines& out, std::string_view original)
{
    return join_lines(out, ends_with_newline(original));
}

void mark_unchanged(PostprocessOutcome& o, std::string_view raw)
{
    if (o.actions.empty() && split_lines(normalize_newlines(raw)) == split_lines(o.code))
        o.actions.push_back(PostprocessAction::None);
}

}  // namespace

const char* to_string(PostprocessAction action)
{
    switch (action) {
    case PostprocessAction::TrimmedLines: return "TrimmedLines";
    case PostprocessAction::RestoredSuggestion: return "RestoredSuggestion";
    case PostprocessAction::StrippedComments: return "StrippedComments";
    case PostprocessAction::RestoredUnchangedLines: return "RestoredUnchangedLines";
    case PostprocessAction::None: return "None";
    }
    return "?";
}

PostprocessAction parse_postprocess_action(std::string_view name)
{
    for (auto a : {PostprocessAction::TrimmedLines, PostprocessAction::RestoredSuggestion,
                   PostprocessAction::StrippedComments, PostprocessAction::RestoredUnchangedLines,
                   PostprocessAction::None})
        if (name == to_string(a))
            return a;
    throw Error("unknown post-processing action: " + std::string(name));
}

std::string revert_changes(std::string_view original, const DiffHunk& h, std::uint32_t review_line)
{
    auto lines = split_lines(original);
    auto span = locate_lines(lines, post_side(h), review_line);
    auto pre = pre_side(h);
    Lines out = slice(lines, 0, span.start_line - 1);
    out.insert(out.end(), pre.begin(), pre.end());
    out.insert(out.end(), lines.begin() + span.end_line, lines.end());
    return join_lines(out, ends_with_newline(original));
}

PostprocessOutcome postprocess_explicit(std::string_view raw, std::string_view original, std::string_view suggestion,
                                        std::uint32_t review_line)
{
    const Lines orig = split_lines(normalize_newlines(original));
    const Lines sugg = split_lines(normalize_newlines(suggestion));
    const Lines rawl = split_lines(normalize_newlines(raw));
    if (sugg.empty())
        throw Error("suggestion code is empty");

    const std::size_t n = orig.size();
    const std::size_t anchor = std::clamp<std::size_t>(review_line, 1, std::max<std::size_t>(n, 1)) - 1;

    PostprocessOutcome outcome;
    Location loc;
    try {
        loc = locate_suggestion(rawl, sugg);
    } catch (const NoPlausibleLocation&) {
        Lines out = slice(orig, 0, std::min(anchor, n));
        out.insert(out.end(), sugg.begin(), sugg.end());
        if (anchor < n)
            out.insert(out.end(), orig.begin() + static_cast<std::ptrdiff_t>(anchor + 1), orig.end());
        outcome.code = finish(out, original);
        outcome.actions = {PostprocessAction::RestoredSuggestion};
        outcome.fell_back = true;
        return outcome;
    }

    const std::size_t region = loc.verbatim ? sugg.size() : std::min(sugg.size(), rawl.size());
    const Lines before = slice(rawl, 0, loc.start);
    const Lines after = slice(rawl, loc.start + region, rawl.size());

    auto pc = prefix_costs(before, orig);
    auto sc = suffix_costs(after, orig);

    // Cheapest split p <= q; ties go to the split nearest the reviewed line,
    // which is the line a suggestion replaces by default.
    std::size_t best_p = 0, best_q = n;
    std::size_t best_cost = std::numeric_limits<std::size_t>::max();
    std::size_t best_dist = std::numeric_limits<std::size_t>::max();
    for (std::size_t p = 0; p <= n; ++p) {
        for (std::size_t q = p; q <= n; ++q) {
            std::size_t cost = pc[p] + sc[q];
            std::size_t dist = static_cast<std::size_t>(std::labs(static_cast<long>(p) - static_cast<long>(anchor))) +
                               static_cast<std::size_t>(std::labs(static_cast<long>(q) - static_cast<long>(anchor + 1)));
            if (cost < best_cost || (cost == best_cost && dist < best_dist)) {
                best_cost = cost;
                best_dist = dist;
                best_p = p;
                best_q = q;
            }
        }
    }

    const Lines head = slice(orig, 0, best_p);
    const Lines tail = slice(orig, best_q, n);
    Lines out = head;
    out.insert(out.end(), sugg.begin(), sugg.end());
    out.insert(out.end(), tail.begin(), tail.end());
    outcome.code = finish(out, original);

    const std::size_t kept = lcs_length(before, head) + lcs_length(after, tail);
    if (!loc.verbatim)
        outcome.actions.push_back(PostprocessAction::RestoredSuggestion);
    if (kept < before.size() + after.size())
        outcome.actions.push_back(PostprocessAction::TrimmedLines);
    if (kept < head.size() + tail.size())
        outcome.actions.push_back(PostprocessAction::RestoredUnchangedLines);
    mark_unchanged(outcome, raw);
    return outcome;
}

namespace {

// New code carried by the intention; empty for pure deletions.
std::string intention_new_code(const GeneralKind& kind)
{
    return std::visit(overloaded{
                          [](const ChangeWord& k) { return k.to_word; },
                          [](const DeleteWord&) { return std::string(); },
                          [](const ChangeLineCode& k) { return k.new_code; },
                          [](const DeleteLineCode&) { return std::string(); },
                          [](const DeleteLines&) { return std::string(); },
                          [](const ChangeLines& k) { return k.new_code; },
                      },
                      kind);
}

std::set<std::string> original_comments(const Lines& orig, const std::vector<CommentMarker>& markers)
{
    std::set<std::string> out;
    for (const auto& l : orig)
        if (auto at = find_line_comment(l, markers))
            out.emplace(trim(std::string_view(l).substr(*at)));
    return out;
}

enum class Strip { Kept, Stripped, WholeLine };

// Removes a line comment the original code does not already contain.
Strip strip_added_comment(std::string& line, const std::vector<CommentMarker>& markers,
                          const std::set<std::string>& known)
{
    auto at = find_line_comment(line, markers);
    if (!at)
        return Strip::Kept;
    if (known.count(std::string(trim(std::string_view(line).substr(*at)))))
        return Strip::Kept;
    bool whole = trim(std::string_view(line).substr(0, *at)).empty();
    line = std::string(rtrim(std::string_view(line).substr(0, *at)));
    return whole ? Strip::WholeLine : Strip::Stripped;
}

}  // namespace

PostprocessOutcome postprocess_general(std::string_view raw, std::string_view original, const GeneralKind& kind,
                                       std::uint32_t review_line, const std::optional<std::string>& language_tag)
{
    const Lines orig = split_lines(normalize_newlines(original));
    const Lines rawl = split_lines(normalize_newlines(raw));
    const auto markers = comment_markers(language_tag);
    const bool strip_comments = !contains_comment(intention_new_code(kind), markers);
    const auto known = original_comments(orig, markers);

    PostprocessOutcome outcome;

    if (!is_single_line(kind)) {
        Lines out;
        bool stripped = false;
        std::vector<bool> matched(rawl.size(), false);
        for (auto [i, j] : lcs_line_matches(orig, rawl))
            matched[j] = true;
        for (std::size_t j = 0; j < rawl.size(); ++j) {
            std::string line = rawl[j];
            if (strip_comments && !matched[j]) {
                auto s = strip_added_comment(line, markers, known);
                stripped |= s != Strip::Kept;
                if (s == Strip::WholeLine)
                    continue;
            }
            out.push_back(std::move(line));
        }
        outcome.code = finish(out, original);
        if (stripped)
            outcome.actions.push_back(PostprocessAction::StrippedComments);
        mark_unchanged(outcome, raw);
        return outcome;
    }

    if (orig.empty()) {
        outcome.code = std::string(original);
        outcome.actions.push_back(PostprocessAction::RestoredUnchangedLines);
        return outcome;
    }

    const std::size_t r = std::min<std::size_t>(std::max<std::uint32_t>(review_line, 1), orig.size()) - 1;
    const bool is_delete_line = std::holds_alternative<DeleteLineCode>(kind);

    // Where the reviewed line sits in raw: its own match if it has one,
    // else offset from the nearest matched line above it.
    auto matches = lcs_line_matches(orig, rawl);
    std::vector<std::optional<std::size_t>> raw_owner(rawl.size());
    for (auto [i, j] : matches)
        raw_owner[j] = i;
    long aligned = static_cast<long>(r);
    for (auto [i, j] : matches) {
        if (i > r)
            break;
        aligned = static_cast<long>(j) + static_cast<long>(r - i);
    }

    // Candidates: raw lines within ±3 of the aligned position that do not
    // belong to some other original line.
    std::optional<std::size_t> pick;
    double pick_sim = -1.0;
    long pick_dist = 0;
    for (long j = aligned - 3; j <= aligned + 3; ++j) {
        if (j < 0 || j >= static_cast<long>(rawl.size()))
            continue;
        auto ju = static_cast<std::size_t>(j);
        if (raw_owner[ju] && *raw_owner[ju] != r)
            continue;
        double sim = line_similarity(rawl[ju], orig[r]);
        long dist = std::labs(j - aligned);
        if (sim > pick_sim || (sim == pick_sim && dist < pick_dist)) {
            pick = ju;
            pick_sim = sim;
            pick_dist = dist;
        }
    }

    bool delete_line = false;
    std::string new_line = orig[r];
    bool stripped = false;
    if (is_delete_line && trim(std::get<DeleteLineCode>(kind).code) == trim(orig[r]))
        delete_line = true;
    if (!delete_line && pick) {
        new_line = rawl[*pick];
        if (strip_comments && new_line != orig[r]) {
            auto s = strip_added_comment(new_line, markers, known);
            stripped = s != Strip::Kept;
            if (s == Strip::WholeLine)
                new_line = is_delete_line ? std::string() : orig[r];
        }
        if (is_delete_line && trim(new_line).empty() && !trim(orig[r]).empty())
            delete_line = true;
    } else if (!pick && is_delete_line) {
        delete_line = true;
    }

    Lines out = slice(orig, 0, r);
    if (!delete_line)
        out.push_back(new_line);
    out.insert(out.end(), orig.begin() + static_cast<std::ptrdiff_t>(r + 1), orig.end());
    outcome.code = finish(out, original);

    if (stripped)
        outcome.actions.push_back(PostprocessAction::StrippedComments);
    // Raw differs from the output somewhere other than the comment we removed.
    Lines expected_raw = slice(orig, 0, r);
    if (!delete_line)
        expected_raw.push_back(pick ? rawl[*pick] : orig[r]);
    expected_raw.insert(expected_raw.end(), orig.begin() + static_cast<std::ptrdiff_t>(r + 1), orig.end());
    if (expected_raw != rawl)
        outcome.actions.push_back(PostprocessAction::RestoredUnchangedLines);
    mark_unchanged(outcome, raw);
    return outcome;
}

}  // namespace intentrefine
