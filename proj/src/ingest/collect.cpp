#include "intentrefine/errors.hpp"
#include "intentrefine/ingest.hpp"
#include "intentrefine/text.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <map>

namespace intentrefine {

namespace {

constexpr int kPerPage = 100;

std::string base64_decode(std::string_view in)
{
    std::string clean;
    for (char c : in)
        if (c != '\n' && c != '\r' && c != ' ')
            clean.push_back(c);
    if (clean.size() % 4 != 0)
        throw ApiError("base64 content has bad length");
    std::string out(clean.size() / 4 * 3, '\0');
    int n = EVP_DecodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                            reinterpret_cast<const unsigned char*>(clean.data()), static_cast<int>(clean.size()));
    if (n < 0)
        throw ApiError("invalid base64 content");
    // EVP_DecodeBlock keeps the zero bytes produced by padding.
    std::size_t pad = 0;
    if (!clean.empty() && clean.back() == '=')
        pad = (clean.size() >= 2 && clean[clean.size() - 2] == '=') ? 2 : 1;
    out.resize(static_cast<std::size_t>(n) - pad);
    return out;
}

nlohmann::json get_all_pages(HostClient& api, const std::string& path)
{
    nlohmann::json all = nlohmann::json::array();
    for (int page = 1;; ++page) {
        auto chunk = api.get(path + "?per_page=" + std::to_string(kPerPage) + "&page=" + std::to_string(page));
        if (!chunk.is_array())
            throw ApiError("expected an array from " + path);
        for (auto& item : chunk)
            all.push_back(std::move(item));
        if (chunk.size() < static_cast<std::size_t>(kPerPage))
            break;
    }
    return all;
}

std::string file_at(HostClient& api, const std::string& base, const std::string& file, const std::string& sha)
{
    auto j = api.get(base + "/contents/" + file + "?ref=" + sha);
    if (j.value("encoding", "") != "base64" || !j.contains("content"))
        throw ApiError("contents of " + file + "@" + sha + " are not base64");
    return normalize_newlines(base64_decode(j.at("content").get<std::string>()));
}

}  // namespace

std::optional<std::string> language_from_path(std::string_view path)
{
    static const std::map<std::string, std::string, std::less<>> by_ext{
        {"c", "c"},       {"h", "c"},        {"cc", "cpp"},   {"cpp", "cpp"},   {"cxx", "cpp"},
        {"hpp", "cpp"},   {"java", "java"},  {"js", "js"},    {"jsx", "js"},    {"ts", "ts"},
        {"tsx", "ts"},    {"py", "python"},  {"rb", "ruby"},  {"go", "go"},     {"cs", "csharp"},
        {"rs", "rust"},   {"kt", "kotlin"},  {"swift", "swift"}, {"scala", "scala"}, {"php", "php"},
        {"sh", "sh"},     {"sql", "sql"},    {"lua", "lua"},  {"pl", "perl"},   {"dart", "dart"},
    };
    auto slash = path.find_last_of('/');
    auto name = slash == std::string_view::npos ? path : path.substr(slash + 1);
    auto dot = name.find_last_of('.');
    if (dot == std::string_view::npos || dot == 0)
        return std::nullopt;
    auto it = by_ext.find(to_lower(name.substr(dot + 1)));
    if (it == by_ext.end())
        return std::nullopt;
    return it->second;
}

CollectResult collect_pull_request(const std::string& owner, const std::string& repo, std::uint64_t pr_number,
                                   HostClient& api)
{
    const std::string base = "/repos/" + owner + "/" + repo;
    const std::string pr_path = base + "/pulls/" + std::to_string(pr_number);

    std::vector<std::string> commits;
    for (const auto& c : get_all_pages(api, pr_path + "/commits"))
        commits.push_back(c.at("sha").get<std::string>());

    CollectResult out;
    for (const auto& comment : get_all_pages(api, pr_path + "/comments")) {
        std::string id = std::to_string(comment.value("id", 0ull));
        RejectedRecord skip{0, owner + "/" + repo + "#" + std::to_string(pr_number) + "/" + id, ""};
        try {
            // Replies inherit the thread's anchor; only top-level comments become cases.
            if (comment.contains("in_reply_to_id") && !comment["in_reply_to_id"].is_null())
                continue;
            auto partial = parse_partial_hunk(normalize_newlines(comment.at("diff_hunk").get<std::string>()));
            auto review_line = infer_review_line(partial);
            auto file = comment.at("path").get<std::string>();
            auto sha = comment.at("commit_id").get<std::string>();

            auto pos = std::find(commits.begin(), commits.end(), sha);
            if (pos == commits.end())
                throw ApiError("comment commit " + sha + " is not part of the pull request");

            CollectResult::Item item;
            auto& c = item.review_case;
            c.id = skip.case_id;
            c.original_code = file_at(api, base, file, sha);
            c.review_comment = normalize_newlines(comment.value("body", ""));
            c.review_line = review_line;
            c.language_tag = language_from_path(file);

            // The next commit in the pull request is taken as the revision.
            if (pos + 1 != commits.end()) {
                auto revised = file_at(api, base, file, *(pos + 1));
                if (revised != c.original_code)
                    c.revised_code = std::move(revised);
            }
            if (!c.revised_code)
                item.flags.emplace_back(kFlagNoRevision);

            PullRequestRef pr{owner, repo, pr_number, std::vector<std::string>(commits.begin(), pos + 1), file};
            try {
                c.last_diff_hunk = reconstruct_last_hunk(pr, partial, api).hunk;
            } catch (const NoMatchingHunk&) {
                item.flags.emplace_back(kFlagNoMatchingHunk);
            }
            validate_case(c);
            out.cases.push_back(std::move(item));
        } catch (const Error& e) {
            skip.reason = e.what();
            out.skipped.push_back(std::move(skip));
        } catch (const nlohmann::json::exception& e) {
            skip.reason = e.what();
            out.skipped.push_back(std::move(skip));
        }
    }
    return out;
}

}  // namespace intentrefine
