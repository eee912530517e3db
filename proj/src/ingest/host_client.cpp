#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include "../net/url.hpp"
#include "intentrefine/errors.hpp"
#include "intentrefine/ingest.hpp"
#include "intentrefine/json_io.hpp"

#include <cstdlib>
#include <ctime>
#include <thread>

namespace intentrefine {

nlohmann::json HostClient::get(const std::string& path)
{
    {
        std::lock_guard lock(mu_);
        log_.push_back(path);
    }
    return do_get(path);
}

std::vector<std::string> HostClient::call_log() const
{
    std::lock_guard lock(mu_);
    return log_;
}

std::size_t HostClient::call_count() const
{
    std::lock_guard lock(mu_);
    return log_.size();
}

FixtureHostClient::FixtureHostClient(std::filesystem::path dir) : dir_(std::move(dir)) {}

std::string FixtureHostClient::fixture_file_name(const std::string& path)
{
    std::string name;
    for (char c : path) {
        bool keep = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '.' ||
                    c == '_' || c == '-';
        name.push_back(keep ? c : '_');
    }
    return name + ".json";
}

nlohmann::json FixtureHostClient::do_get(const std::string& path)
{
    auto file = dir_ / fixture_file_name(path);
    if (!std::filesystem::exists(file))
        throw ApiError("no recorded API response for " + path + " (expected " + file.string() + ")");
    try {
        return nlohmann::json::parse(read_file(file));
    } catch (const nlohmann::json::exception& e) {
        throw ApiError("bad fixture " + file.string() + ": " + e.what());
    }
}

HostConfig HostConfig::from_env()
{
    HostConfig c;
    if (const char* t = std::getenv("GITHUB_TOKEN"); t && *t)
        c.token = t;
    if (const char* b = std::getenv("INTENTREFINE_HOST_API"); b && *b)
        c.api_base = b;
    return c;
}

struct LiveHostClient::Impl {
    HostConfig config;
    net::SplitUrl url;
    std::mutex pace_mu;
    std::chrono::steady_clock::time_point next_slot = std::chrono::steady_clock::now();

    // Global request budget: one request per min_interval across threads.
    void pace()
    {
        std::chrono::steady_clock::time_point slot;
        {
            std::lock_guard lock(pace_mu);
            auto now = std::chrono::steady_clock::now();
            slot = std::max(now, next_slot);
            next_slot = slot + config.min_interval;
        }
        std::this_thread::sleep_until(slot);
    }

    std::chrono::seconds rate_limit_wait(const httplib::Response& res) const
    {
        std::chrono::seconds wait{1};
        if (res.has_header("Retry-After")) {
            wait = std::chrono::seconds(std::atol(res.get_header_value("Retry-After").c_str()));
        } else if (res.get_header_value("X-RateLimit-Remaining") == "0" && res.has_header("X-RateLimit-Reset")) {
            auto reset = std::atoll(res.get_header_value("X-RateLimit-Reset").c_str());
            auto now = static_cast<long long>(std::time(nullptr));
            wait = std::chrono::seconds(std::max(1LL, reset - now));
        }
        return std::min(wait, config.max_wait);
    }
};

LiveHostClient::LiveHostClient(HostConfig config) : impl_(std::make_unique<Impl>())
{
    impl_->config = std::move(config);
    impl_->url = net::split_url(impl_->config.api_base);
}

LiveHostClient::~LiveHostClient() = default;

nlohmann::json LiveHostClient::do_get(const std::string& path)
{
    auto& cfg = impl_->config;
    httplib::Headers headers{{"Accept", "application/vnd.github+json"}, {"User-Agent", "intentrefine"}};
    if (!cfg.token.empty())
        headers.emplace("Authorization", "Bearer " + cfg.token);

    for (int attempt = 1; attempt <= cfg.max_attempts; ++attempt) {
        impl_->pace();
        httplib::Client client(impl_->url.origin);
        client.set_read_timeout(60, 0);
        auto res = client.Get(impl_->url.path + path, headers);
        if (!res)
            throw ApiError("GET " + path + " failed: " + httplib::to_string(res.error()));
        bool limited = res->status == 429 ||
                       (res->status == 403 && (res->get_header_value("X-RateLimit-Remaining") == "0" ||
                                               res->has_header("Retry-After")));
        if (limited || res->status >= 500) {
            if (attempt == cfg.max_attempts)
                throw ApiError("GET " + path + ": status " + std::to_string(res->status) + " after " +
                               std::to_string(attempt) + " attempts");
            auto wait = limited ? impl_->rate_limit_wait(*res) : std::chrono::seconds(1 << (attempt - 1));
            std::this_thread::sleep_for(wait);
            continue;
        }
        if (res->status != 200)
            throw ApiError("GET " + path + ": status " + std::to_string(res->status) + ": " + res->body.substr(0, 200));
        try {
            return nlohmann::json::parse(res->body);
        } catch (const nlohmann::json::exception& e) {
            throw ApiError("GET " + path + ": " + e.what());
        }
    }
    throw ApiError("GET " + path + ": no attempts made");
}

}  // namespace intentrefine
