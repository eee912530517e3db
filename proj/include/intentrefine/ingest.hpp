#pragma once

#include "intentrefine/hunk.hpp"
#include "intentrefine/types.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace intentrefine {

// Loading.

struct RejectedRecord {
    std::size_t line_number = 0;  // 1-based line in the JSONL file
    std::string case_id;          // empty when the record had no usable id
    std::string reason;
};

struct LoadedDataset {
    std::vector<ReviewCase> cases;
    std::vector<RejectedRecord> rejects;
};

/// Never aborts on a bad record; only I/O failure throws.
LoadedDataset load_dataset(const std::filesystem::path& path);

void write_dataset(const std::filesystem::path& path, const std::vector<ReviewCase>& cases);

// Review line and hunk reconstruction.

struct PullRequestRef {
    std::string owner;
    std::string repo;
    std::uint64_t pr_number = 0;
    /// commit_1 .. commit_n, where commit_n is the commit under review.
    std::vector<std::string> commit_shas;
    std::string file_path;
};

/// new_start + number of post-side lines before the last line.
/// Throws ReviewedLineDeleted when that line is a removal, MalformedHunk when
/// the hunk is empty.
std::uint32_t infer_review_line(const PartialHunk& partial);
std::uint32_t infer_review_line(const DiffHunk& partial);

/// Read-only access to the code-hosting REST API. Paths are relative to the
/// API root and may carry a query string.
class HostClient {
public:
    virtual ~HostClient() = default;

    nlohmann::json get(const std::string& path);
    std::vector<std::string> call_log() const;
    std::size_t call_count() const;

protected:
    virtual nlohmann::json do_get(const std::string& path) = 0;

private:
    mutable std::mutex mu_;
    std::vector<std::string> log_;
};

/// Serves recorded responses from a flat directory. The file for a path is
/// fixture_file_name(path).
class FixtureHostClient final : public HostClient {
public:
    explicit FixtureHostClient(std::filesystem::path dir);
    static std::string fixture_file_name(const std::string& path);

protected:
    nlohmann::json do_get(const std::string& path) override;

private:
    std::filesystem::path dir_;
};

struct HostConfig {
    std::string api_base = "https://api.github.com";
    std::string token;
    int max_attempts = 4;
    std::chrono::milliseconds min_interval{100};
    /// Upper bound on one rate-limit wait.
    std::chrono::seconds max_wait{120};

    /// Reads GITHUB_TOKEN and, if set, INTENTREFINE_HOST_API.
    static HostConfig from_env();
};

/// Live client; waits out rate limits using Retry-After / X-RateLimit-Reset.
class LiveHostClient final : public HostClient {
public:
    explicit LiveHostClient(HostConfig config);
    ~LiveHostClient() override;

protected:
    nlohmann::json do_get(const std::string& path) override;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

struct ReconstructedHunk {
    DiffHunk hunk;
    /// 1-based index of the base commit that produced the match.
    std::size_t base_commit = 0;
    std::size_t fetches = 0;
};

/// Hunks whose new-file range meets [review_line - 5, review_line + 5].
inline constexpr std::uint32_t kNearWindow = 5;

/// Walks m = n-1 .. 1, diffing commit_m against commit_n for the file, and
/// returns the first nearby hunk whose post side ends with the partial hunk's
/// post side (contents only). Throws NoMatchingHunk, ApiError.
ReconstructedHunk reconstruct_last_hunk(const PullRequestRef& pr, const PartialHunk& partial, HostClient& api);

/// One case per review comment in a pull request, plus the reason for each
/// comment that could not become a case.
struct CollectResult {
    struct Item {
        ReviewCase review_case;
        std::vector<std::string> flags;
    };
    std::vector<Item> cases;
    std::vector<RejectedRecord> skipped;
};

inline constexpr const char* kFlagNoMatchingHunk = "no_matching_hunk";
inline constexpr const char* kFlagNoRevision = "no_revision";

CollectResult collect_pull_request(const std::string& owner, const std::string& repo, std::uint64_t pr_number,
                                   HostClient& api);

/// Language tag from a file extension ("py", "java", ...), if any.
std::optional<std::string> language_from_path(std::string_view path);

// Statistics.

struct CategoryHistogram {
    std::size_t total = 0;
    std::size_t explicit_count = 0;
    std::size_t reversion_count = 0;
    std::size_t general_count = 0;
    std::size_t unlabeled = 0;
    /// Per general template, keyed by general_kind_name.
    std::vector<std::pair<std::string, std::size_t>> general_kinds;

    /// Share of labeled cases; nullopt when none are labeled.
    std::optional<double> percent(std::size_t count) const;
    nlohmann::json to_json() const;
    std::string to_text() const;
};

/// Throws SchemaViolation when the lists are not the same length.
CategoryHistogram dataset_stats(const std::vector<ReviewCase>& cases,
                                const std::vector<std::optional<Intention>>& intentions);

}  // namespace intentrefine
