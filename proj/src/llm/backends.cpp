#include "intentrefine/errors.hpp"
#include "intentrefine/llm.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <fstream>

namespace intentrefine {

using nlohmann::json;

namespace {

json entry_to_json(const FixtureEntry& e)
{
    return json{{"request_hash", e.request_hash}, {"system_text", e.system_text}, {"user_text", e.user_text},
                {"model_name", e.model_name},     {"response_text", e.response_text}, {"tag", e.tag}};
}

}  // namespace

std::string LlmRequest::request_hash() const
{
    // json objects keep keys sorted, so dump() is a canonical encoding.
    json canonical{{"system_text", system_text},
                   {"user_text", user_text},
                   {"model_name", model_name},
                   {"temperature", temperature},
                   {"max_output_tokens", max_output_tokens}};
    return sha256_hex(canonical.dump());
}

const char* to_string(BackendTag tag)
{
    switch (tag) {
    case BackendTag::Live: return "live";
    case BackendTag::Replay: return "replay";
    case BackendTag::Mock: return "mock";
    }
    return "?";
}

LlmResponse LlmBackend::complete(const LlmRequest& req)
{
    {
        std::lock_guard lock(log_mutex_);
        log_.push_back({req.request_hash(), req.tag});
    }
    return do_complete(req);
}

std::vector<CallRecord> LlmBackend::call_log() const
{
    std::lock_guard lock(log_mutex_);
    return log_;
}

std::size_t LlmBackend::call_count() const
{
    std::lock_guard lock(log_mutex_);
    return log_.size();
}

MockBackend::MockBackend(std::string constant)
    : responder_([text = std::move(constant)](const LlmRequest&) { return text; })
{
}

MockBackend::MockBackend(Responder responder) : responder_(std::move(responder)) {}

LlmResponse MockBackend::do_complete(const LlmRequest& req)
{
    return LlmResponse{responder_(req), 0.0, BackendTag::Mock};
}

std::vector<FixtureEntry> load_fixtures(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open fixture file " + path.string());
    std::vector<FixtureEntry> entries;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        try {
            auto j = json::parse(line);
            FixtureEntry e;
            e.request_hash = j.at("request_hash").get<std::string>();
            e.system_text = j.value("system_text", "");
            e.user_text = j.value("user_text", "");
            e.model_name = j.value("model_name", "");
            e.response_text = j.at("response_text").get<std::string>();
            e.tag = j.value("tag", "");
            entries.push_back(std::move(e));
        } catch (const json::exception& ex) {
            throw Error(path.string() + ":" + std::to_string(lineno) + ": " + ex.what());
        }
    }
    return entries;
}

ReplayBackend::ReplayBackend(const std::vector<FixtureEntry>& entries)
{
    for (const auto& e : entries)
        responses_.emplace(e.request_hash, e.response_text);
}

std::unique_ptr<ReplayBackend> ReplayBackend::from_file(const std::filesystem::path& path)
{
    return std::make_unique<ReplayBackend>(load_fixtures(path));
}

LlmResponse ReplayBackend::do_complete(const LlmRequest& req)
{
    auto hash = req.request_hash();
    auto it = responses_.find(hash);
    if (it == responses_.end())
        throw FixtureMiss(hash);
    return LlmResponse{it->second, 0.0, BackendTag::Replay};
}

RecordingBackend::RecordingBackend(std::shared_ptr<LlmBackend> inner, std::filesystem::path fixture_path)
    : inner_(std::move(inner)), path_(std::move(fixture_path))
{
    if (std::filesystem::exists(path_)) {
        for (const auto& e : load_fixtures(path_))
            recorded_[e.request_hash] = true;
    }
}

LlmResponse RecordingBackend::do_complete(const LlmRequest& req)
{
    auto resp = inner_->complete(req);
    auto hash = req.request_hash();
    std::lock_guard lock(write_mutex_);
    if (recorded_.emplace(hash, true).second) {
        std::ofstream out(path_, std::ios::app);
        if (!out)
            throw Error("cannot append to fixture file " + path_.string());
        FixtureEntry e{hash, req.system_text, req.user_text, req.model_name, resp.text, req.tag};
        out << entry_to_json(e).dump() << '\n';
    }
    return resp;
}

std::string chat_payload(const LlmRequest& req)
{
    json body{{"model", req.model_name},
              {"temperature", req.temperature},
              {"max_tokens", req.max_output_tokens},
              {"messages",
               json::array({json{{"role", "system"}, {"content", req.system_text}},
                            json{{"role", "user"}, {"content", req.user_text}}})}};
    return body.dump();
}

}  // namespace intentrefine
