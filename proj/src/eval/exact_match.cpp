#include "intentrefine/errors.hpp"
#include "intentrefine/eval.hpp"
#include "intentrefine/overloaded.hpp"
#include "intentrefine/text.hpp"

namespace intentrefine {

namespace {

// Every piece between LFs, including an empty last one.
std::vector<std::string> raw_lines(std::string_view text)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        auto nl = text.find('\n', start);
        if (nl == std::string_view::npos) {
            out.emplace_back(text.substr(start));
            return out;
        }
        out.emplace_back(text.substr(start, nl - start));
        start = nl + 1;
    }
}

std::vector<std::string> em_lines(std::string_view text, const EmOptions& opts)
{
    auto lines = raw_lines(opts.normalize_newlines ? normalize_newlines(text) : std::string(text));
    if (opts.strip_trailing_whitespace)
        for (auto& l : lines)
            l = std::string(rtrim(l));
    if (opts.strip_blank_edges) {
        std::size_t b = 0, e = lines.size();
        while (b < e && trim(lines[b]).empty())
            ++b;
        while (e > b && trim(lines[e - 1]).empty())
            --e;
        lines = std::vector<std::string>(lines.begin() + static_cast<std::ptrdiff_t>(b),
                                         lines.begin() + static_cast<std::ptrdiff_t>(e));
    }
    return lines;
}

}  // namespace

nlohmann::json EmOptions::to_json() const
{
    return {{"normalize_newlines", normalize_newlines},
            {"strip_trailing_whitespace", strip_trailing_whitespace},
            {"strip_blank_edges", strip_blank_edges}};
}

std::string normalize_for_em(std::string_view text, const EmOptions& opts)
{
    auto lines = em_lines(text, opts);
    std::string out;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (i)
            out.push_back('\n');
        out += lines[i];
    }
    return out;
}

bool exact_match(std::string_view candidate, std::string_view truth, const EmOptions& opts)
{
    return normalize_for_em(candidate, opts) == normalize_for_em(truth, opts);
}

std::string line_diff(std::string_view candidate, std::string_view truth, const EmOptions& opts)
{
    auto a = em_lines(candidate, opts);
    auto b = em_lines(truth, opts);
    if (a == b)
        return {};
    std::string out;
    std::size_t i = 0, j = 0;
    auto flush = [&](std::size_t to_i, std::size_t to_j) {
        for (; i < to_i; ++i)
            out += "-" + a[i] + "\n";
        for (; j < to_j; ++j)
            out += "+" + b[j] + "\n";
    };
    for (auto [mi, mj] : lcs_line_matches(a, b)) {
        flush(mi, mj);
        ++i;
        ++j;
    }
    flush(a.size(), b.size());
    return out;
}

nlohmann::json EvalReport::to_json() const
{
    auto bucket = [](const EmBucket& b) {
        return nlohmann::json{{"total", b.total}, {"correct", b.correct}, {"em", b.percent()}};
    };
    nlohmann::json cats = nlohmann::json::object();
    for (const auto& [k, b] : by_category)
        cats[k] = bucket(b);
    nlohmann::json strats = nlohmann::json::object();
    for (const auto& [k, b] : by_strategy)
        strats[k] = bucket(b);
    return {{"total", overall.total},
            {"correct", overall.correct},
            {"em", overall.total ? nlohmann::json(overall.percent()) : nlohmann::json(nullptr)},
            {"by_category", cats},
            {"by_strategy", strats}};
}

EvalReport evaluate(const std::vector<RefinementResult>& results, const std::map<std::string, std::string>& truths,
                    const EmOptions& opts)
{
    EvalReport report;
    for (const auto& r : results) {
        auto it = truths.find(r.case_id);
        if (it == truths.end())
            throw MissingTruth(r.case_id);
        bool ok = exact_match(r.revised_code, it->second, opts);
        std::string cat = r.intention ? category_name(*r.intention) : "none";
        for (EmBucket* b : {&report.overall, &report.by_category[cat], &report.by_strategy[r.strategy.label()]}) {
            ++b->total;
            if (ok)
                ++b->correct;
        }
    }
    return report;
}

}  // namespace intentrefine
