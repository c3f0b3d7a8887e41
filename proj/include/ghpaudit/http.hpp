#pragma once

#include <atomic>
#include <chrono>
#include <cstddef>
#include <mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace ghpaudit {

enum class HttpErrorClass { None, Timeout, Dns, Tls, Connection, TooManyRedirects };

std::string_view to_string(HttpErrorClass e);

struct HttpResponse {
    int status{0};  // 0 when the transport failed
    std::vector<std::pair<std::string, std::string>> headers;
    std::string body;
    HttpErrorClass error{HttpErrorClass::None};
    std::string error_detail;
    std::string final_url;  // set by get() after redirects

    bool transport_ok() const { return error == HttpErrorClass::None; }
    // First header value matching `name`, case-insensitive; empty if absent.
    std::string header(std::string_view name) const;
};

struct HttpOptions {
    int timeout_ms{30000};
    int retries{2};               // extra attempts on timeout/connection failures
    int backoff_base_ms{500};
    int max_redirects{10};        // only used by get()
    int per_host_interval_ms{0};  // politeness budget, 0 = unthrottled
    std::string user_agent{"ghpaudit/0.1"};
    std::size_t body_cap_bytes{1 << 20};  // stop buffering past this
    bool offline{false};  // every request fails immediately, nothing leaves the process
};

// Enforces a minimum spacing between requests to the same host.
class RateLimiter {
public:
    explicit RateLimiter(int interval_ms) : interval_ms_(interval_ms) {}
    void acquire(const std::string& host_port);

private:
    std::mutex mu_;
    int interval_ms_;
    std::unordered_map<std::string, std::chrono::steady_clock::time_point> next_slot_;
};

using HeaderList = std::vector<std::pair<std::string, std::string>>;

// Shared client: politeness, retries with exponential backoff, and
// 429-aware waiting live here so every caller behaves the same way.
class HttpEngine {
public:
    explicit HttpEngine(HttpOptions opts);

    // One request, redirects not followed. Transport failures are retried
    // per options; the outcome is always encoded in the response.
    HttpResponse request(const std::string& url, const HeaderList& extra_headers = {});

    // Follows redirects up to options().max_redirects and retries 429
    // responses with jittered backoff (honoring Retry-After).
    HttpResponse get(const std::string& url, const HeaderList& extra_headers = {});

    const HttpOptions& options() const { return opts_; }
    std::size_t requests_made() const { return request_count_.load(); }

private:
    HttpResponse single_attempt(const std::string& url, const HeaderList& extra_headers);

    HttpOptions opts_;
    RateLimiter limiter_;
    std::atomic<std::size_t> request_count_{0};
};

}  // namespace ghpaudit
