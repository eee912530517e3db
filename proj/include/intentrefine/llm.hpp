#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

namespace intentrefine {

std::string sha256_hex(std::string_view data);

inline constexpr const char* kDefaultModel = "gpt-4o-2024-05-13";

struct LlmRequest {
    std::string system_text;
    std::string user_text;
    std::string model_name = kDefaultModel;
    double temperature = 0.0;
    std::uint32_t max_output_tokens = 1024;
    /// Caller role label such as "agent2/case-7". Not part of the hash.
    std::string tag;

    /// SHA-256 over the canonical (key-sorted) JSON of every field except `tag`.
    std::string request_hash() const;
};

enum class BackendTag { Live, Replay, Mock };
const char* to_string(BackendTag tag);

struct LlmResponse {
    std::string text;
    double latency_ms = 0.0;
    BackendTag backend = BackendTag::Mock;
};

struct CallRecord {
    std::string request_hash;
    std::string tag;
};

/// Completion interface shared by all backends. complete() is thread-safe and
/// appends to a call log that tests use to count model calls.
class LlmBackend {
public:
    virtual ~LlmBackend() = default;

    LlmResponse complete(const LlmRequest& req);

    std::vector<CallRecord> call_log() const;
    std::size_t call_count() const;

protected:
    virtual LlmResponse do_complete(const LlmRequest& req) = 0;

private:
    mutable std::mutex log_mutex_;
    std::vector<CallRecord> log_;
};

class MockBackend final : public LlmBackend {
public:
    using Responder = std::function<std::string(const LlmRequest&)>;

    explicit MockBackend(std::string constant);
    explicit MockBackend(Responder responder);

protected:
    LlmResponse do_complete(const LlmRequest& req) override;

private:
    Responder responder_;
};

/// One recorded exchange. Stored one per line as JSON.
struct FixtureEntry {
    std::string request_hash;
    std::string system_text;
    std::string user_text;
    std::string model_name;
    std::string response_text;
    std::string tag;
};

std::vector<FixtureEntry> load_fixtures(const std::filesystem::path& path);

/// Serves recorded responses by request hash. Read-only after construction.
class ReplayBackend final : public LlmBackend {
public:
    explicit ReplayBackend(const std::vector<FixtureEntry>& entries);
    static std::unique_ptr<ReplayBackend> from_file(const std::filesystem::path& path);

    std::size_t size() const { return responses_.size(); }

protected:
    LlmResponse do_complete(const LlmRequest& req) override;

private:
    std::unordered_map<std::string, std::string> responses_;
};

/// Forwards to another backend and appends each new exchange to a fixture file.
class RecordingBackend final : public LlmBackend {
public:
    RecordingBackend(std::shared_ptr<LlmBackend> inner, std::filesystem::path fixture_path);

protected:
    LlmResponse do_complete(const LlmRequest& req) override;

private:
    std::shared_ptr<LlmBackend> inner_;
    std::filesystem::path path_;
    std::mutex write_mutex_;
    std::unordered_map<std::string, bool> recorded_;
};

struct LiveConfig {
    /// e.g. "https://api.openai.com/v1"; requests go to <base_url>/chat/completions.
    std::string base_url = "https://api.openai.com/v1";
    std::string api_key;
    int max_attempts = 3;
    int initial_backoff_ms = 500;
    int max_in_flight = 4;
    /// Token bucket refill rate; 0 disables rate limiting.
    double requests_per_second = 0.0;
    int timeout_seconds = 120;

    /// Reads INTENTREFINE_API_BASE / INTENTREFINE_API_KEY, falling back to
    /// OPENAI_BASE_URL / OPENAI_API_KEY.
    static LiveConfig from_env();
};

/// OpenAI-compatible chat completions over HTTP(S).
class LiveBackend final : public LlmBackend {
public:
    explicit LiveBackend(LiveConfig config);
    ~LiveBackend() override;

protected:
    LlmResponse do_complete(const LlmRequest& req) override;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Request body sent by LiveBackend.
std::string chat_payload(const LlmRequest& req);

}  // namespace intentrefine
