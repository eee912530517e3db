#include "intentrefine/errors.hpp"
#include "intentrefine/ingest.hpp"

#include <cstdio>

namespace intentrefine {

std::optional<double> CategoryHistogram::percent(std::size_t count) const
{
    std::size_t labeled = total - unlabeled;
    if (labeled == 0)
        return std::nullopt;
    return 100.0 * static_cast<double>(count) / static_cast<double>(labeled);
}

nlohmann::json CategoryHistogram::to_json() const
{
    auto pct = [&](std::size_t n) { return percent(n) ? nlohmann::json(*percent(n)) : nlohmann::json(nullptr); };
    nlohmann::json kinds = nlohmann::json::object();
    for (const auto& [name, n] : general_kinds)
        kinds[name] = n;
    return {
        {"total", total},
        {"unlabeled", unlabeled},
        {"counts", {{"explicit", explicit_count}, {"reversion", reversion_count}, {"general", general_count}}},
        {"percent", {{"explicit", pct(explicit_count)}, {"reversion", pct(reversion_count)}, {"general", pct(general_count)}}},
        {"general_kinds", kinds},
    };
}

std::string CategoryHistogram::to_text() const
{
    std::string out;
    auto row = [&](const char* name, std::size_t n) {
        char buf[96];
        auto p = percent(n);
        if (p)
            std::snprintf(buf, sizeof buf, "%-10s %6zu  %6.2f%%\n", name, n, *p);
        else
            std::snprintf(buf, sizeof buf, "%-10s %6zu       -\n", name, n);
        out += buf;
    };
    row("explicit", explicit_count);
    row("reversion", reversion_count);
    row("general", general_count);
    out += "unlabeled  " + std::to_string(unlabeled) + "\ntotal      " + std::to_string(total) + "\n";
    return out;
}

CategoryHistogram dataset_stats(const std::vector<ReviewCase>& cases,
                                const std::vector<std::optional<Intention>>& intentions)
{
    if (cases.size() != intentions.size())
        throw SchemaViolation("intentions (" + std::to_string(intentions.size()) + ") not aligned with cases (" +
                              std::to_string(cases.size()) + ")");
    CategoryHistogram h;
    h.total = cases.size();
    const char* kind_order[] = {"change_word", "delete_word", "change_line_code",
                                "delete_line_code", "delete_lines", "change_lines"};
    for (const char* k : kind_order)
        h.general_kinds.emplace_back(k, 0);

    for (const auto& i : intentions) {
        if (!i) {
            ++h.unlabeled;
            continue;
        }
        if (std::holds_alternative<ExplicitIntention>(*i)) {
            ++h.explicit_count;
        } else if (std::holds_alternative<ReversionIntention>(*i)) {
            ++h.reversion_count;
        } else {
            ++h.general_count;
            std::string name = general_kind_name(std::get<GeneralIntention>(*i).kind);
            for (auto& [k, n] : h.general_kinds)
                if (k == name)
                    ++n;
        }
    }
    return h;
}

}  // namespace intentrefine
