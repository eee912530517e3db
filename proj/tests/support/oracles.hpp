#pragma once

// Independent reference implementations used as test oracles. Nothing here
// calls into the library except for plain data types.

#include "intentrefine/types.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace oracle {

using intentrefine::DiffHunk;
using intentrefine::DiffLine;
using intentrefine::LineTag;

// A contiguous edit: delete `del` lines at 0-based `pos`, insert `ins` there.
struct Edit {
    std::size_t pos = 0;
    std::size_t del = 0;
    std::vector<std::string> ins;
};

inline std::vector<std::string> apply_edit(const std::vector<std::string>& p, const Edit& e)
{
    std::vector<std::string> q(p.begin(), p.begin() + static_cast<long>(e.pos));
    q.insert(q.end(), e.ins.begin(), e.ins.end());
    q.insert(q.end(), p.begin() + static_cast<long>(e.pos + e.del), p.end());
    return q;
}

// Unified-diff hunk P -> Q for the edit, with up to `context` lines each side.
inline DiffHunk hunk_for_edit(const std::vector<std::string>& p, const Edit& e, std::size_t context = 3)
{
    std::size_t before = std::min(context, e.pos);
    std::size_t after = std::min(context, p.size() - e.pos - e.del);
    DiffHunk h;
    for (std::size_t i = e.pos - before; i < e.pos; ++i)
        h.lines.push_back({LineTag::Context, p[i]});
    for (std::size_t i = e.pos; i < e.pos + e.del; ++i)
        h.lines.push_back({LineTag::Removed, p[i]});
    for (const auto& s : e.ins)
        h.lines.push_back({LineTag::Added, s});
    for (std::size_t i = e.pos + e.del; i < e.pos + e.del + after; ++i)
        h.lines.push_back({LineTag::Context, p[i]});
    h.old_count = static_cast<std::uint32_t>(before + e.del + after);
    h.new_count = static_cast<std::uint32_t>(before + e.ins.size() + after);
    // Unified diff: a zero-length side starts at the line before the change.
    h.old_start = static_cast<std::uint32_t>(h.old_count ? e.pos - before + 1 : e.pos);
    h.new_start = static_cast<std::uint32_t>(h.new_count ? e.pos - before + 1 : e.pos);
    return h;
}

inline std::string random_line(std::mt19937_64& rng)
{
    static const char* kinds[] = {"int v%d = f%d(x);", "if (a%d > %d) {", "return r%d + %d;", "log(\"m%d %d\");",
                                  "    call%d(%d);"};
    std::uniform_int_distribution<int> k(0, 4), n(0, 999999);
    char buf[96];
    std::snprintf(buf, sizeof buf, kinds[k(rng)], n(rng), n(rng));
    return buf;
}

// Code with mostly distinct lines plus some braces and blanks, as real files have.
inline std::vector<std::string> random_code(std::mt19937_64& rng, std::size_t n)
{
    std::vector<std::string> out;
    std::uniform_int_distribution<int> pick(0, 9);
    for (std::size_t i = 0; i < n; ++i) {
        int r = pick(rng);
        if (r == 0)
            out.emplace_back("}");
        else if (r == 1)
            out.emplace_back("");
        else
            out.push_back(random_line(rng));
    }
    return out;
}

inline std::string join(const std::vector<std::string>& lines, bool trailing = true)
{
    std::string s;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        s += lines[i];
        if (i + 1 < lines.size() || trailing)
            s += '\n';
    }
    return s;
}

inline std::vector<std::string> split(const std::string& text)
{
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (c == '\n') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty())
        out.push_back(cur);
    return out;
}

// All 1-based start lines where `needle` occurs contiguously in `hay`.
inline std::vector<std::size_t> occurrences(const std::vector<std::string>& hay, const std::vector<std::string>& needle)
{
    std::vector<std::size_t> out;
    if (needle.empty() || needle.size() > hay.size())
        return out;
    for (std::size_t s = 0; s + needle.size() <= hay.size(); ++s)
        if (std::equal(needle.begin(), needle.end(), hay.begin() + static_cast<long>(s)))
            out.push_back(s + 1);
    return out;
}

// Nearest-midpoint occurrence, earliest on ties; 0 if none.
inline std::size_t brute_locate(const std::vector<std::string>& hay, const std::vector<std::string>& needle,
                                std::size_t hint)
{
    std::size_t best = 0;
    double best_d = 0;
    for (auto s : occurrences(hay, needle)) {
        double mid = static_cast<double>(s) + (static_cast<double>(needle.size()) - 1) / 2.0;
        double d = std::fabs(mid - static_cast<double>(hint));
        if (best == 0 || d < best_d) {
            best = s;
            best_d = d;
        }
    }
    return best;
}

// Textbook BM25 over whole documents, recomputing everything per query.
inline std::vector<std::string> tokens(const std::string& text)
{
    std::vector<std::string> out;
    std::string cur;
    for (unsigned char c : text) {
        if (std::isalnum(c) || c >= 0x80) {
            cur.push_back(static_cast<char>(std::tolower(c)));
        } else if (!cur.empty()) {
            out.push_back(cur);
            cur.clear();
        }
    }
    if (!cur.empty())
        out.push_back(cur);
    return out;
}

inline std::vector<double> bm25_scores(const std::vector<std::string>& docs, const std::string& query,
                                       double k1 = 1.2, double b = 0.75)
{
    std::vector<std::vector<std::string>> toks;
    double total = 0;
    for (const auto& d : docs) {
        toks.push_back(tokens(d));
        total += static_cast<double>(toks.back().size());
    }
    const double n = static_cast<double>(docs.size());
    const double avg = total / n;
    std::vector<double> scores(docs.size(), 0.0);
    for (const auto& q : tokens(query)) {
        double df = 0;
        for (const auto& t : toks)
            if (std::find(t.begin(), t.end(), q) != t.end())
                df += 1;
        double idf = std::log(1.0 + (n - df + 0.5) / (df + 0.5));
        for (std::size_t i = 0; i < docs.size(); ++i) {
            double tf = static_cast<double>(std::count(toks[i].begin(), toks[i].end(), q));
            double len = static_cast<double>(toks[i].size());
            scores[i] += idf * tf * (k1 + 1) / (tf + k1 * (1 - b + b * len / avg));
        }
    }
    return scores;
}

// Indices of the top-k documents: score descending, lower index first on ties.
inline std::vector<std::size_t> bm25_top(const std::vector<std::string>& docs, const std::string& query, std::size_t k)
{
    auto s = bm25_scores(docs, query);
    std::vector<std::size_t> idx(docs.size());
    for (std::size_t i = 0; i < idx.size(); ++i)
        idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return s[a] > s[b]; });
    idx.resize(std::min(k, idx.size()));
    return idx;
}

}  // namespace oracle
