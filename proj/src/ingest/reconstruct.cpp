#include "intentrefine/errors.hpp"
#include "intentrefine/ingest.hpp"

#include <algorithm>

namespace intentrefine {

std::uint32_t infer_review_line(const DiffHunk& partial)
{
    if (partial.lines.empty())
        throw MalformedHunk("partial hunk has no lines");
    if (partial.lines.back().tag == LineTag::Removed)
        throw ReviewedLineDeleted();
    std::uint32_t before = 0;
    for (std::size_t i = 0; i + 1 < partial.lines.size(); ++i)
        if (partial.lines[i].tag != LineTag::Removed)
            ++before;
    // new_start is 0 only for a hunk that creates an empty file, which has no lines.
    return std::max<std::uint32_t>(partial.new_start, 1) + before;
}

std::uint32_t infer_review_line(const PartialHunk& partial) { return infer_review_line(partial.hunk); }

namespace {

bool near(const DiffHunk& h, std::uint32_t review_line)
{
    std::int64_t lo = static_cast<std::int64_t>(review_line) - kNearWindow;
    std::int64_t hi = static_cast<std::int64_t>(review_line) + kNearWindow;
    std::int64_t start = h.new_start;
    // A pure deletion occupies no new lines; treat it as the point new_start.
    std::int64_t end = h.new_count == 0 ? start : start + h.new_count - 1;
    return start <= hi && end >= lo;
}

// Post side of the candidate, cut after the review line when the hunk spans it.
std::vector<std::string> post_through(const DiffHunk& h, std::uint32_t review_line)
{
    auto post = post_side(h);
    if (review_line >= h.new_start && review_line < h.new_start + post.size())
        post.resize(review_line - h.new_start + 1);
    return post;
}

bool ends_with(const std::vector<std::string>& hay, const std::vector<std::string>& tail)
{
    if (tail.size() > hay.size())
        return false;
    return std::equal(tail.begin(), tail.end(), hay.end() - static_cast<std::ptrdiff_t>(tail.size()));
}

const nlohmann::json* find_file(const nlohmann::json& compare, const std::string& file_path)
{
    auto files = compare.find("files");
    if (files == compare.end() || !files->is_array())
        return nullptr;
    for (const auto& f : *files)
        if (f.value("filename", "") == file_path)
            return &f;
    return nullptr;
}

}  // namespace

ReconstructedHunk reconstruct_last_hunk(const PullRequestRef& pr, const PartialHunk& partial, HostClient& api)
{
    const auto n = pr.commit_shas.size();
    if (n < 2)
        throw NoMatchingHunk();
    const auto review_line = infer_review_line(partial);
    const auto tail = post_side(partial.hunk);

    ReconstructedHunk out;
    for (std::size_t m = n - 1; m >= 1; --m) {
        std::string path = "/repos/" + pr.owner + "/" + pr.repo + "/compare/" + pr.commit_shas[m - 1] + "..." +
                           pr.commit_shas[n - 1];
        auto compare = api.get(path);
        ++out.fetches;
        if (const auto* file = find_file(compare, pr.file_path); file && file->contains("patch")) {
            std::vector<DiffHunk> hunks;
            try {
                hunks = parse_unified_patch(file->at("patch").get<std::string>());
            } catch (const MalformedHunk& e) {
                throw ApiError(std::string("unparseable patch from ") + path + ": " + e.what());
            }
            for (auto& h : hunks) {
                if (!near(h, review_line))
                    continue;
                if (ends_with(post_through(h, review_line), tail)) {
                    out.hunk = std::move(h);
                    out.base_commit = m;
                    return out;
                }
            }
        }
    }
    throw NoMatchingHunk();
}

}  // namespace intentrefine
