#include "intentrefine/types.hpp"

#include "intentrefine/errors.hpp"
#include "intentrefine/hunk.hpp"
#include "intentrefine/overloaded.hpp"
#include "intentrefine/text.hpp"

namespace intentrefine {

namespace {

std::string code_slot(const std::string& code) { return "<code>" + code + "</code>"; }

}  // namespace

bool is_single_line(const GeneralKind& kind)
{
    return std::holds_alternative<ChangeWord>(kind) || std::holds_alternative<DeleteWord>(kind) ||
           std::holds_alternative<ChangeLineCode>(kind) || std::holds_alternative<DeleteLineCode>(kind);
}

const char* category_name(const Intention& intention)
{
    return std::visit(overloaded{
                          [](const ExplicitIntention&) { return "explicit"; },
                          [](const ReversionIntention&) { return "reversion"; },
                          [](const GeneralIntention&) { return "general"; },
                      },
                      intention);
}

const char* general_kind_name(const GeneralKind& kind)
{
    return std::visit(overloaded{
                          [](const ChangeWord&) { return "change_word"; },
                          [](const DeleteWord&) { return "delete_word"; },
                          [](const ChangeLineCode&) { return "change_line_code"; },
                          [](const DeleteLineCode&) { return "delete_line_code"; },
                          [](const DeleteLines&) { return "delete_lines"; },
                          [](const ChangeLines&) { return "change_lines"; },
                      },
                      kind);
}

std::string render_general(const GeneralKind& kind)
{
    return std::visit(overloaded{
                          [](const ChangeWord& k) { return "Change word (" + k.from_word + ") to (" + k.to_word + ")"; },
                          [](const DeleteWord& k) { return "Delete word (" + k.word + ")"; },
                          [](const ChangeLineCode& k) { return "Change the code to " + code_slot(k.new_code); },
                          [](const DeleteLineCode& k) { return "Delete code " + code_slot(k.code); },
                          [](const DeleteLines& k) { return "Delete code lines " + code_slot(k.code); },
                          [](const ChangeLines& k) {
                              return "Change the code lines " + code_slot(k.old_code) + " to " + code_slot(k.new_code);
                          },
                      },
                      kind);
}

std::string render_intention(const Intention& intention)
{
    return std::visit(overloaded{
                          [](const ExplicitIntention& i) { return "Apply the suggestion code " + code_slot(i.suggestion_code); },
                          [](const ReversionIntention&) { return std::string("Revert the previous modification"); },
                          [](const GeneralIntention& i) { return render_general(i.kind); },
                      },
                      intention);
}

void validate_case(const ReviewCase& c)
{
    if (c.id.empty())
        throw SchemaViolation("id is empty");
    auto lines = split_lines(c.original_code);
    if (c.review_line < 1 || c.review_line > lines.size())
        throw SchemaViolation("review_line " + std::to_string(c.review_line) + " outside 1.." +
                              std::to_string(lines.size()));
    if (c.last_diff_hunk) {
        try {
            check_hunk(*c.last_diff_hunk);
            locate_lines(lines, post_side(*c.last_diff_hunk), c.review_line);
        } catch (const Error& e) {
            throw SchemaViolation(std::string("last_diff_hunk: ") + e.what());
        }
    }
}

const char* to_string(LineTag tag)
{
    switch (tag) {
    case LineTag::Context: return "context";
    case LineTag::Added: return "added";
    case LineTag::Removed: return "removed";
    }
    return "?";
}

const char* to_string(ChangeKind kind)
{
    switch (kind) {
    case ChangeKind::Addition: return "addition";
    case ChangeKind::Deletion: return "deletion";
    case ChangeKind::Revision: return "revision";
    }
    return "?";
}

}  // namespace intentrefine
