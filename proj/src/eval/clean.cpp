#include "intentrefine/errors.hpp"
#include "intentrefine/eval.hpp"
#include "intentrefine/templates.hpp"
#include "intentrefine/text.hpp"

#include <cctype>

namespace intentrefine {

const char* to_string(CleanMethod m)
{
    return m == CleanMethod::IntentionBased ? "intention" : "comment";
}

CleanMethod parse_clean_method(std::string_view name)
{
    auto n = to_lower(trim(name));
    if (n == "intention" || n == "intention_based")
        return CleanMethod::IntentionBased;
    if (n == "comment" || n == "comment_based")
        return CleanMethod::CommentBased;
    throw Error("unknown cleaning method " + std::string(name));
}

bool parse_verdict(std::string_view reply)
{
    for (const auto& line : split_lines(normalize_newlines(reply))) {
        auto t = trim(line);
        if (t.empty())
            continue;
        // Markdown emphasis or quoting around the word is tolerated.
        std::size_t b = 0;
        while (b < t.size() && (t[b] == '*' || t[b] == '`' || t[b] == '_'))
            ++b;
        std::size_t e = b;
        while (e < t.size() && std::isalpha(static_cast<unsigned char>(t[e])))
            ++e;
        bool bounded = e == t.size() || !std::isalnum(static_cast<unsigned char>(t[e]));
        auto word = to_lower(t.substr(b, e - b));
        if (bounded && word == "valid")
            return true;
        if (bounded && word == "invalid")
            return false;
        break;
    }
    throw UnparseableVerdict(std::string(reply));
}

LlmRequest clean_request(const ReviewCase& c, const std::optional<Intention>& intention, CleanMethod method,
                         const std::string& model)
{
    if (!c.revised_code)
        throw Error("case " + c.id + " has no revised code to judge");
    TemplateVars vars{{"original_code", fence_body(c.original_code)},
                      {"review_line", std::to_string(c.review_line)},
                      {"review_line_text", review_line_text(c.original_code, c.review_line)},
                      {"revised_code", fence_body(*c.revised_code)}};
    std::string_view tmpl;
    if (method == CleanMethod::IntentionBased) {
        if (!intention)
            throw Error("case " + c.id + " has no intention for intention-based cleaning");
        vars["intention"] = render_intention(*intention);
        tmpl = template_text("clean_intention_user");
    } else {
        vars["review_comment"] = c.review_comment;
        tmpl = template_text("clean_comment_user");
    }
    LlmRequest req;
    req.system_text = std::string(trim(template_text("clean_system")));
    req.user_text = std::string(trim(render_template(tmpl, vars)));
    req.model_name = model;
    req.max_output_tokens = 256;
    req.tag = std::string("clean/") + to_string(method) + "/" + c.id;
    return req;
}

CleanVerdict clean_case(const ReviewCase& c, const std::optional<Intention>& intention, LlmBackend& llm,
                        CleanMethod method, const std::string& model)
{
    CleanVerdict v;
    v.case_id = c.id;
    v.method = method;
    auto req = clean_request(c, intention, method, model);
    for (int attempt = 0; attempt < 2; ++attempt) {
        auto reply = llm.complete(req).text;
        v.rationale_text = reply;
        try {
            v.valid = parse_verdict(reply);
            return v;
        } catch (const UnparseableVerdict&) {
            req.user_text += "\n\n" + std::string(trim(template_text("clean_retry")));
            req.tag += "/retry";
        }
    }
    return v;
}

nlohmann::json verdict_to_json(const CleanVerdict& v)
{
    nlohmann::json j{{"case_id", v.case_id},
                     {"method", to_string(v.method)},
                     {"valid", v.valid ? nlohmann::json(*v.valid) : nlohmann::json(nullptr)},
                     {"rationale_text", v.rationale_text ? nlohmann::json(*v.rationale_text) : nlohmann::json(nullptr)}};
    if (!v.valid)
        j["flags"] = {kFlagUnlabeled};
    return j;
}

nlohmann::json ConfusionReport::to_json() const
{
    auto opt = [](const std::optional<double>& d) { return d ? nlohmann::json(*d) : nlohmann::json(nullptr); };
    return {{"tp", tp},
            {"fp", fp},
            {"tn", tn},
            {"fn", fn},
            {"unlabeled", unlabeled},
            {"accuracy", opt(accuracy)},
            {"precision", opt(precision)}};
}

ConfusionReport confusion_from_counts(std::size_t tp, std::size_t fp, std::size_t tn, std::size_t fn)
{
    ConfusionReport r;
    r.tp = tp;
    r.fp = fp;
    r.tn = tn;
    r.fn = fn;
    auto all = tp + fp + tn + fn;
    if (all)
        r.accuracy = static_cast<double>(tp + tn) / static_cast<double>(all);
    if (tp + fp)
        r.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    return r;
}

ConfusionReport confusion(const std::vector<CleanVerdict>& verdicts, const std::vector<GoldLabel>& gold)
{
    if (verdicts.size() != gold.size())
        throw LabelMismatch(std::to_string(verdicts.size()) + " verdicts vs " + std::to_string(gold.size()) +
                            " labels");
    std::size_t tp = 0, fp = 0, tn = 0, fn = 0, unlabeled = 0;
    for (std::size_t i = 0; i < verdicts.size(); ++i) {
        if (verdicts[i].case_id != gold[i].case_id)
            throw LabelMismatch("position " + std::to_string(i) + ": verdict for " + verdicts[i].case_id +
                                ", label for " + gold[i].case_id);
        if (!verdicts[i].valid) {
            ++unlabeled;
            continue;
        }
        bool predicted = *verdicts[i].valid;
        bool actual = gold[i].valid;
        if (predicted && actual)
            ++tp;
        else if (predicted)
            ++fp;
        else if (actual)
            ++fn;
        else
            ++tn;
    }
    auto r = confusion_from_counts(tp, fp, tn, fn);
    r.unlabeled = unlabeled;
    return r;
}

}  // namespace intentrefine
