#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include "../net/url.hpp"
#include "intentrefine/errors.hpp"
#include "intentrefine/llm.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <semaphore>
#include <thread>

namespace intentrefine {

namespace {

std::string env_or(const char* primary, const char* fallback, std::string def)
{
    if (const char* v = std::getenv(primary); v && *v)
        return v;
    if (const char* v = std::getenv(fallback); v && *v)
        return v;
    return def;
}

class TokenBucket {
public:
    explicit TokenBucket(double rate) : rate_(rate), tokens_(std::max(1.0, rate)), last_(Clock::now()) {}

    void acquire()
    {
        if (rate_ <= 0.0)
            return;
        for (;;) {
            std::chrono::duration<double> wait{};
            {
                std::lock_guard lock(mutex_);
                auto now = Clock::now();
                tokens_ = std::min(std::max(1.0, rate_),
                                   tokens_ + std::chrono::duration<double>(now - last_).count() * rate_);
                last_ = now;
                if (tokens_ >= 1.0) {
                    tokens_ -= 1.0;
                    return;
                }
                wait = std::chrono::duration<double>((1.0 - tokens_) / rate_);
            }
            std::this_thread::sleep_for(wait);
        }
    }

private:
    using Clock = std::chrono::steady_clock;
    double rate_;
    double tokens_;
    Clock::time_point last_;
    std::mutex mutex_;
};

}  // namespace

LiveConfig LiveConfig::from_env()
{
    LiveConfig c;
    c.base_url = env_or("INTENTREFINE_API_BASE", "OPENAI_BASE_URL", c.base_url);
    c.api_key = env_or("INTENTREFINE_API_KEY", "OPENAI_API_KEY", "");
    return c;
}

struct LiveBackend::Impl {
    LiveConfig config;
    net::SplitUrl url;
    std::counting_semaphore<1024> in_flight;
    TokenBucket bucket;

    explicit Impl(LiveConfig c)
        : config(std::move(c)), url(net::split_url(config.base_url)),
          in_flight(std::clamp(config.max_in_flight, 1, 1024)), bucket(config.requests_per_second)
    {
    }
};

LiveBackend::LiveBackend(LiveConfig config) : impl_(std::make_unique<Impl>(std::move(config))) {}

LiveBackend::~LiveBackend() = default;

LlmResponse LiveBackend::do_complete(const LlmRequest& req)
{
    auto& cfg = impl_->config;
    const std::string body = chat_payload(req);
    const std::string path = impl_->url.path + "/chat/completions";

    httplib::Headers headers;
    if (!cfg.api_key.empty())
        headers.emplace("Authorization", "Bearer " + cfg.api_key);

    int backoff_ms = cfg.initial_backoff_ms;
    for (int attempt = 1; attempt <= cfg.max_attempts; ++attempt) {
        impl_->bucket.acquire();
        impl_->in_flight.acquire();
        auto start = std::chrono::steady_clock::now();
        httplib::Result res{nullptr, httplib::Error::Unknown};
        {
            httplib::Client client(impl_->url.origin);
            client.set_read_timeout(cfg.timeout_seconds, 0);
            client.set_write_timeout(cfg.timeout_seconds, 0);
            res = client.Post(path, headers, body, "application/json");
        }
        impl_->in_flight.release();
        double latency =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

        if (!res)
            throw HttpError(0, "request failed: " + httplib::to_string(res.error()));
        if (res->status == 429 || res->status >= 500) {
            if (attempt == cfg.max_attempts) {
                if (res->status == 429)
                    throw RateLimited(attempt);
                throw HttpError(res->status, res->body);
            }
            std::this_thread::sleep_for(std::chrono::milliseconds(backoff_ms));
            backoff_ms *= 2;
            continue;
        }
        if (res->status != 200)
            throw HttpError(res->status, res->body);

        try {
            auto j = nlohmann::json::parse(res->body);
            auto text = j.at("choices").at(0).at("message").at("content").get<std::string>();
            return LlmResponse{std::move(text), latency, BackendTag::Live};
        } catch (const nlohmann::json::exception& e) {
            throw HttpError(res->status, std::string("unexpected response body: ") + e.what());
        }
    }
    throw RateLimited(cfg.max_attempts);
}

}  // namespace intentrefine
