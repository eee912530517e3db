#include "intentrefine/errors.hpp"
#include "intentrefine/hunk.hpp"
#include "intentrefine/intent.hpp"
#include "intentrefine/templates.hpp"
#include "intentrefine/text.hpp"

namespace intentrefine {

namespace {

enum class Template { ChangeWord, DeleteWord, ChangeLineCode, DeleteLineCode, DeleteLines, ChangeLines };

struct Prefix {
    std::string_view text;  // lowercase
    Template kind;
};

constexpr Prefix kPrefixes[] = {
    {"change word (", Template::ChangeWord},
    {"delete word (", Template::DeleteWord},
    {"change the code to <code>", Template::ChangeLineCode},
    {"delete code <code>", Template::DeleteLineCode},
    {"delete code lines <code>", Template::DeleteLines},
    {"change the code lines <code>", Template::ChangeLines},
};

constexpr std::string_view kCodeClose = "</code>";

[[noreturn]] void fail(std::string_view reply) { throw UnparseableIntention(std::string(reply)); }

std::string word_slot(std::string_view s, std::string_view reply)
{
    auto t = trim(s);
    if (t.empty() || t.find('\n') != std::string_view::npos)
        fail(reply);
    return std::string(t);
}

std::string single_line_code_slot(std::string_view s, std::string_view reply) { return word_slot(s, reply); }

std::string multi_line_code_slot(std::string_view s, std::string_view reply)
{
    while (!s.empty() && s.front() == '\n')
        s.remove_prefix(1);
    while (!s.empty() && s.back() == '\n')
        s.remove_suffix(1);
    if (trim(s).empty())
        fail(reply);
    return std::string(s);
}

// Text of `rest` up to the first </code>, case-insensitive; advances `rest` past it.
std::string_view take_code(std::string_view& rest, std::string_view lower_rest, std::string_view reply)
{
    auto end = lower_rest.find(kCodeClose);
    if (end == std::string_view::npos)
        fail(reply);
    auto slot = rest.substr(0, end);
    rest.remove_prefix(end + kCodeClose.size());
    return slot;
}

// Up to the last ')' on the current line.
std::string_view take_paren_to_eol(std::string_view rest, std::string_view reply)
{
    auto eol = rest.find('\n');
    auto line = rest.substr(0, eol);
    auto close = line.rfind(')');
    if (close == std::string_view::npos)
        fail(reply);
    return line.substr(0, close);
}

}  // namespace

GeneralKind parse_general_reply(std::string_view reply)
{
    const std::string norm = normalize_newlines(reply);
    const std::string lower = to_lower(norm);

    const Prefix* best = nullptr;
    std::size_t best_pos = std::string::npos;
    for (const auto& p : kPrefixes) {
        auto pos = lower.find(p.text);
        if (pos == std::string::npos)
            continue;
        if (pos < best_pos || (pos == best_pos && p.text.size() > best->text.size())) {
            best = &p;
            best_pos = pos;
        }
    }
    if (!best)
        fail(reply);

    std::size_t start = best_pos + best->text.size();
    std::string_view rest = std::string_view(norm).substr(start);
    std::string_view lower_rest = std::string_view(lower).substr(start);

    switch (best->kind) {
    case Template::ChangeWord: {
        auto eol = rest.find('\n');
        auto sep = lower_rest.substr(0, eol).find(") to (");
        if (sep == std::string_view::npos)
            fail(reply);
        auto from = rest.substr(0, sep);
        auto to = take_paren_to_eol(rest.substr(sep + 6), reply);
        return ChangeWord{word_slot(from, reply), word_slot(to, reply)};
    }
    case Template::DeleteWord:
        return DeleteWord{word_slot(take_paren_to_eol(rest, reply), reply)};
    case Template::ChangeLineCode:
        return ChangeLineCode{single_line_code_slot(take_code(rest, lower_rest, reply), reply)};
    case Template::DeleteLineCode:
        return DeleteLineCode{single_line_code_slot(take_code(rest, lower_rest, reply), reply)};
    case Template::DeleteLines:
        return DeleteLines{multi_line_code_slot(take_code(rest, lower_rest, reply), reply)};
    case Template::ChangeLines: {
        auto before = rest.size();
        auto old_code = take_code(rest, lower_rest, reply);
        lower_rest.remove_prefix(before - rest.size());
        // Expect: <ws> to <ws> <code>
        auto t = lower_rest.find_first_not_of(" \t\n");
        if (t == std::string_view::npos || lower_rest.substr(t, 2) != "to")
            fail(reply);
        auto o = lower_rest.find_first_not_of(" \t\n", t + 2);
        if (o == std::string_view::npos || lower_rest.substr(o, 6) != "<code>")
            fail(reply);
        rest.remove_prefix(o + 6);
        lower_rest.remove_prefix(o + 6);
        auto new_code = take_code(rest, lower_rest, reply);
        return ChangeLines{multi_line_code_slot(old_code, reply), multi_line_code_slot(new_code, reply)};
    }
    }
    fail(reply);
}

LlmRequest general_request(const ReviewCase& c, const ExtractionOptions& opts)
{
    TemplateVars vars{{"original_code", fence_body(c.original_code)},
                      {"review_line", std::to_string(c.review_line)},
                      {"review_line_text", review_line_text(c.original_code, c.review_line)},
                      {"review_comment", c.review_comment}};
    if (c.last_diff_hunk)
        vars["last_diff_hunk"] = render_hunk(*c.last_diff_hunk);
    LlmRequest req;
    req.model_name = opts.model;
    req.system_text = std::string(trim(template_text("agent3_system")));
    req.user_text = std::string(rtrim(render_template(template_text("agent3_user"), vars)));
    req.tag = "agent3/" + c.id;
    return req;
}

GeneralKind extract_general(const ReviewCase& c, LlmBackend& llm, const ExtractionOptions& opts)
{
    auto req = general_request(c, opts);
    auto reply = llm.complete(req).text;
    try {
        return parse_general_reply(reply);
    } catch (const UnparseableIntention&) {
    }
    req.user_text += "\n\n" + std::string(trim(template_text("agent3_retry")));
    req.tag += "/retry";
    return parse_general_reply(llm.complete(req).text);
}

ExtractionOutcome extract_intention(const ReviewCase& c, LlmBackend& llm, const ExtractionOptions& opts)
{
    ExtractionOutcome out;
    try {
        if (auto suggestion = detect_explicit(c.review_comment)) {
            if (!suggestion->empty()) {
                out.intention = ExplicitIntention{*suggestion};
                return out;
            }
            out.flags.emplace_back(kFlagEmptySuggestion);
        }
    } catch (const UnterminatedFence&) {
        out.flags.emplace_back(kFlagUnterminatedFence);
    }

    try {
        if (classify_reversion(c, llm, opts)) {
            out.intention = ReversionIntention{};
            return out;
        }
    } catch (const UnparseableChoice&) {
        out.flags.emplace_back(kFlagUnparseableChoice);
    }

    try {
        out.intention = GeneralIntention{extract_general(c, llm, opts)};
    } catch (const UnparseableIntention&) {
        out.flags.emplace_back(kFlagUnparseableIntention);
    }
    return out;
}

}  // namespace intentrefine
