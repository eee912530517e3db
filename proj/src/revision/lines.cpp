#include "intentrefine/revision.hpp"
#include "intentrefine/text.hpp"

#include <algorithm>
#include <cstdint>

namespace intentrefine {

double line_similarity(std::string_view a, std::string_view b)
{
    if (a.empty() && b.empty())
        return 1.0;
    if (a.empty() || b.empty())
        return 0.0;
    std::vector<std::uint32_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
    for (std::size_t i = 1; i <= a.size(); ++i) {
        for (std::size_t j = 1; j <= b.size(); ++j)
            cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
        std::swap(prev, cur);
    }
    return 2.0 * prev[b.size()] / static_cast<double>(a.size() + b.size());
}

std::vector<std::pair<std::size_t, std::size_t>> lcs_line_matches(const std::vector<std::string>& a,
                                                                  const std::vector<std::string>& b)
{
    std::vector<std::pair<std::size_t, std::size_t>> out;
    std::size_t pre = 0;
    while (pre < a.size() && pre < b.size() && a[pre] == b[pre]) {
        out.emplace_back(pre, pre);
        ++pre;
    }
    std::size_t suf = 0;
    while (suf < a.size() - pre && suf < b.size() - pre && a[a.size() - 1 - suf] == b[b.size() - 1 - suf])
        ++suf;

    const std::size_t n = a.size() - pre - suf;
    const std::size_t m = b.size() - pre - suf;
    if (n && m) {
        // dp[i][j] = LCS of a[pre+i..] and b[pre+j..] within the middle block.
        std::vector<std::uint32_t> dp((n + 1) * (m + 1), 0);
        auto at = [&](std::size_t i, std::size_t j) -> std::uint32_t& { return dp[i * (m + 1) + j]; };
        for (std::size_t i = n; i-- > 0;)
            for (std::size_t j = m; j-- > 0;)
                at(i, j) = a[pre + i] == b[pre + j] ? at(i + 1, j + 1) + 1 : std::max(at(i + 1, j), at(i, j + 1));
        std::size_t i = 0, j = 0;
        while (i < n && j < m) {
            if (a[pre + i] == b[pre + j]) {
                out.emplace_back(pre + i, pre + j);
                ++i;
                ++j;
            } else if (at(i + 1, j) >= at(i, j + 1)) {
                ++i;
            } else {
                ++j;
            }
        }
    }
    for (std::size_t k = suf; k-- > 0;)
        out.emplace_back(a.size() - 1 - k, b.size() - 1 - k);
    return out;
}

namespace {

struct OpenFence {
    char ch;
    std::size_t len;
};

std::optional<OpenFence> fence_open(std::string_view line)
{
    auto t = trim(line);
    if (t.size() < 3 || (t[0] != '`' && t[0] != '~'))
        return std::nullopt;
    std::size_t n = 0;
    while (n < t.size() && t[n] == t[0])
        ++n;
    if (n < 3)
        return std::nullopt;
    return OpenFence{t[0], n};
}

bool fence_close(std::string_view line, const OpenFence& f)
{
    auto t = trim(line);
    return t.size() >= f.len && std::all_of(t.begin(), t.end(), [&](char c) { return c == f.ch; });
}

bool is_prose(std::string_view line)
{
    auto t = trim(line);
    if (t.empty())
        return true;
    static constexpr std::string_view kCodePunct = "{}()[];=<>\"`";
    if (t.find_first_of(kCodePunct) != std::string_view::npos)
        return false;
    return t.back() == '.' || t.back() == ':';
}

}  // namespace

std::string extract_code(std::string_view completion)
{
    auto lines = split_lines(normalize_newlines(completion));
    for (std::size_t i = 0; i < lines.size(); ++i) {
        auto f = fence_open(lines[i]);
        if (!f)
            continue;
        std::vector<std::string> body;
        for (std::size_t j = i + 1; j < lines.size() && !fence_close(lines[j], *f); ++j)
            body.push_back(lines[j]);
        return join_lines(body);
    }
    std::size_t first = 0, last = lines.size();
    while (first < last && is_prose(lines[first]))
        ++first;
    while (last > first && is_prose(lines[last - 1]))
        --last;
    return join_lines({lines.begin() + static_cast<std::ptrdiff_t>(first),
                       lines.begin() + static_cast<std::ptrdiff_t>(last)});
}

}  // namespace intentrefine
