#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace ghpaudit {

// Decomposed http(s) URL. Scheme and host are lowercased; the host is
// percent-decoded, stripped of userinfo, and stripped of a default port.
// The path is kept verbatim (no percent-decoding).
struct SplitUrl {
    std::string scheme;    // "http" or "https"
    std::string host;      // lowercase
    std::string port;      // empty unless a non-default port was given
    std::string path;      // always starts with '/'
    std::string query;     // without the '?'
    std::string fragment;  // without the '#'

    std::string host_port() const;       // "host" or "host:port"
    std::string origin() const;          // "scheme://host[:port]"
    std::string request_target() const;  // path plus "?query" when present
    std::string str() const;             // full URL without fragment
};

// Splits a URL. When the input carries no scheme, `default_scheme` is
// assumed; if that is empty too, the input is rejected.
std::optional<SplitUrl> split_url(std::string_view raw, std::string_view default_scheme = "");

// Resolves a Location header value against a base URL (absolute,
// scheme-relative, absolute-path, and relative-path forms).
std::string resolve_reference(const SplitUrl& base, std::string_view location);

}  // namespace ghpaudit
