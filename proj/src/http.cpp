#include "ghpaudit/http.hpp"

#include <netdb.h>

#include <algorithm>
#include <cctype>
#include <random>
#include <thread>

#include "httplib.h"

#include "ghpaudit/url.hpp"

namespace ghpaudit {

namespace {

bool iequals(std::string_view a, std::string_view b) {
    return a.size() == b.size() &&
           std::equal(a.begin(), a.end(), b.begin(), [](unsigned char x, unsigned char y) {
               return std::tolower(x) == std::tolower(y);
           });
}

bool host_resolves(const std::string& host) {
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* result = nullptr;
    int rc = getaddrinfo(host.c_str(), nullptr, &hints, &result);
    if (result)
        freeaddrinfo(result);
    return rc == 0;
}

HttpErrorClass classify_error(httplib::Error err, const std::string& host) {
    switch (err) {
        case httplib::Error::ConnectionTimeout:
        case httplib::Error::Read:
        case httplib::Error::Write:
            return HttpErrorClass::Timeout;
        case httplib::Error::SSLConnection:
        case httplib::Error::SSLLoadingCerts:
        case httplib::Error::SSLServerVerification:
            return HttpErrorClass::Tls;
        case httplib::Error::Connection:
            return host_resolves(host) ? HttpErrorClass::Connection : HttpErrorClass::Dns;
        default:
            return HttpErrorClass::Connection;
    }
}

}  // namespace

std::string_view to_string(HttpErrorClass e) {
    switch (e) {
        case HttpErrorClass::None: return "none";
        case HttpErrorClass::Timeout: return "timeout";
        case HttpErrorClass::Dns: return "dns";
        case HttpErrorClass::Tls: return "tls";
        case HttpErrorClass::Connection: return "connection";
        case HttpErrorClass::TooManyRedirects: return "too_many_redirects";
    }
    return "?";
}

std::string HttpResponse::header(std::string_view name) const {
    for (const auto& [key, value] : headers)
        if (iequals(key, name))
            return value;
    return {};
}

void RateLimiter::acquire(const std::string& host_port) {
    if (interval_ms_ <= 0)
        return;
    std::chrono::steady_clock::time_point slot;
    {
        std::lock_guard lock(mu_);
        auto now = std::chrono::steady_clock::now();
        auto& next = next_slot_[host_port];
        if (next < now)
            next = now;
        slot = next;
        next += std::chrono::milliseconds(interval_ms_);
    }
    std::this_thread::sleep_until(slot);
}

HttpEngine::HttpEngine(HttpOptions opts) : opts_(std::move(opts)), limiter_(opts_.per_host_interval_ms) {}

HttpResponse HttpEngine::single_attempt(const std::string& url, const HeaderList& extra_headers) {
    HttpResponse out;
    auto split = split_url(url);
    if (!split) {
        out.error = HttpErrorClass::Connection;
        out.error_detail = "unparseable URL: " + url;
        return out;
    }

    limiter_.acquire(split->host_port());
    request_count_.fetch_add(1);

    httplib::Client client(split->origin());
    client.set_connection_timeout(std::chrono::milliseconds(opts_.timeout_ms));
    client.set_read_timeout(std::chrono::milliseconds(opts_.timeout_ms));
    client.set_write_timeout(std::chrono::milliseconds(opts_.timeout_ms));
    client.set_follow_location(false);
#ifdef CPPHTTPLIB_OPENSSL_SUPPORT
    client.enable_server_certificate_verification(true);
#endif

    httplib::Headers headers{{"User-Agent", opts_.user_agent}, {"Accept", "*/*"}};
    for (const auto& [key, value] : extra_headers)
        headers.emplace(key, value);

    std::string body;
    bool capped = false;
    auto receiver = [&](const char* data, std::size_t len) {
        if (body.size() < opts_.body_cap_bytes)
            body.append(data, std::min(len, opts_.body_cap_bytes - body.size()));
        else
            capped = true;  // keep draining; only the status matters
        return true;
    };

    auto result = client.Get(split->request_target(), headers, receiver);
    if (!result) {
        out.error = classify_error(result.error(), split->host);
        out.error_detail = httplib::to_string(result.error());
        return out;
    }
    out.status = result->status;
    out.body = std::move(body);
    (void)capped;
    for (const auto& [key, value] : result->headers)
        out.headers.emplace_back(key, value);
    return out;
}

HttpResponse HttpEngine::request(const std::string& url, const HeaderList& extra_headers) {
    HttpResponse out;
    if (opts_.offline) {
        out.error = HttpErrorClass::Connection;
        out.error_detail = "offline mode";
        return out;
    }
    for (int attempt = 0; attempt <= opts_.retries; ++attempt) {
        if (attempt > 0) {
            auto delay = std::chrono::milliseconds(opts_.backoff_base_ms << (attempt - 1));
            std::this_thread::sleep_for(delay);
        }
        out = single_attempt(url, extra_headers);
        if (out.transport_ok())
            return out;
        // Transient faults must not masquerade as link rot.
        bool retryable = out.error == HttpErrorClass::Timeout || out.error == HttpErrorClass::Connection ||
                         out.error == HttpErrorClass::Dns;
        if (!retryable)
            return out;
    }
    return out;
}

HttpResponse HttpEngine::get(const std::string& url, const HeaderList& extra_headers) {
    static thread_local std::mt19937 jitter_rng{std::random_device{}()};

    std::string current = url;
    HttpResponse response;
    for (int hop = 0; hop <= opts_.max_redirects; ++hop) {
        response = request(current, extra_headers);
        response.final_url = current;
        if (!response.transport_ok())
            return response;

        if (response.status == 429) {
            int waited = 0;
            for (int attempt = 0; attempt < 4 && response.status == 429; ++attempt) {
                int delay_ms = opts_.backoff_base_ms << attempt;
                auto retry_after = response.header("Retry-After");
                if (!retry_after.empty()) {
                    char* end = nullptr;
                    long secs = std::strtol(retry_after.c_str(), &end, 10);
                    if (end && *end == '\0' && secs >= 0)
                        delay_ms = static_cast<int>(secs * 1000);
                }
                delay_ms += std::uniform_int_distribution<int>(0, opts_.backoff_base_ms / 2 + 1)(jitter_rng);
                std::this_thread::sleep_for(std::chrono::milliseconds(delay_ms));
                waited += delay_ms;
                response = request(current, extra_headers);
                response.final_url = current;
                if (!response.transport_ok())
                    return response;
            }
            (void)waited;
        }

        if (response.status < 300 || response.status > 399)
            return response;
        std::string location = response.header("Location");
        if (location.empty())
            return response;
        auto split = split_url(current);
        if (!split)
            return response;
        current = resolve_reference(*split, location);
    }
    response.error = HttpErrorClass::TooManyRedirects;
    response.status = 0;
    return response;
}

}  // namespace ghpaudit
