#include "intentrefine/errors.hpp"
#include "intentrefine/hunk.hpp"
#include "intentrefine/intent.hpp"
#include "intentrefine/templates.hpp"
#include "intentrefine/text.hpp"

#include <cctype>

namespace intentrefine {

namespace {

// Deletion options are the reviewer intents observed for deleted code; the
// addition and revision sets mirror them with the same five-plus-one layout.
constexpr std::array<ReversionChoice, 6> kDeletion{{
    {1, "Expressing an opinion: You shouldn't delete this code.", true},
    {2, "Expressing an opinion: You still need this code.", true},
    {3, "Expressing an opinion: Change the code back.", true},
    {4, "Raising a question: Why delete this code?", true},
    {5, "Raising a question: Why did you do this?", true},
    {6, "Giving a suggestion: You should add another piece of code.", false},
}};

constexpr std::array<ReversionChoice, 6> kAddition{{
    {1, "Expressing an opinion: You shouldn't add this code.", true},
    {2, "Expressing an opinion: This code is unnecessary.", true},
    {3, "Expressing an opinion: Change the code back.", true},
    {4, "Raising a question: Why add this code?", true},
    {5, "Raising a question: Why did you do this?", true},
    {6, "Giving a suggestion: You should modify the added code.", false},
}};

constexpr std::array<ReversionChoice, 6> kRevision{{
    {1, "Expressing an opinion: You shouldn't change this code.", true},
    {2, "Expressing an opinion: The previous code was better.", true},
    {3, "Expressing an opinion: Change the code back.", true},
    {4, "Raising a question: Why change this code?", true},
    {5, "Raising a question: Why did you do this?", true},
    {6, "Giving a suggestion: You should modify the changed code further.", false},
}};

bool is_word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

}  // namespace

const std::array<ReversionChoice, 6>& reversion_options(ChangeKind kind)
{
    switch (kind) {
    case ChangeKind::Addition: return kAddition;
    case ChangeKind::Deletion: return kDeletion;
    case ChangeKind::Revision: return kRevision;
    }
    return kRevision;
}

std::string format_options(ChangeKind kind)
{
    std::string out;
    for (const auto& o : reversion_options(kind)) {
        out += std::to_string(o.option_index) + ". ";
        out += o.option_text;
        out.push_back('\n');
    }
    return out;
}

std::optional<int> parse_choice(std::string_view reply)
{
    std::size_t i = 0;
    while (i < reply.size()) {
        if (!std::isdigit(static_cast<unsigned char>(reply[i]))) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < reply.size() && std::isdigit(static_cast<unsigned char>(reply[j])))
            ++j;
        bool standalone = (i == 0 || !is_word_char(reply[i - 1])) && (j == reply.size() || !is_word_char(reply[j]));
        if (standalone && j - i == 1 && reply[i] >= '1' && reply[i] <= '6')
            return reply[i] - '0';
        i = j;
    }
    return std::nullopt;
}

LlmRequest reversion_request(const ReviewCase& c, const DiffHunk& hunk, const ExtractionOptions& opts)
{
    auto kind = change_kind(hunk);
    LlmRequest req;
    req.model_name = opts.model;
    req.system_text = std::string(trim(template_text("agent2_system")));
    req.user_text = std::string(rtrim(render_template(template_text("agent2_user"),
                                                      {{"change_kind", to_string(kind)},
                                                       {"last_diff_hunk", render_hunk(hunk)},
                                                       {"review_comment", c.review_comment},
                                                       {"options", format_options(kind)}})));
    req.tag = "agent2/" + c.id;
    return req;
}

bool classify_reversion(const ReviewCase& c, LlmBackend& llm, const ExtractionOptions& opts)
{
    if (!c.last_diff_hunk)
        return false;
    ChangeKind kind;
    try {
        kind = change_kind(*c.last_diff_hunk);
    } catch (const NoChange&) {
        return false;
    }

    auto req = reversion_request(c, *c.last_diff_hunk, opts);
    auto reply = llm.complete(req).text;
    auto choice = parse_choice(reply);
    if (!choice) {
        req.user_text += "\n\n" + std::string(trim(template_text("agent2_retry")));
        req.tag += "/retry";
        reply = llm.complete(req).text;
        choice = parse_choice(reply);
    }
    if (!choice)
        throw UnparseableChoice(reply);
    return reversion_options(kind)[static_cast<std::size_t>(*choice - 1)].reversion;
}

}  // namespace intentrefine
