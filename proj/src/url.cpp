#include "ghpaudit/url.hpp"

#include <algorithm>
#include <cctype>
#include <vector>

namespace ghpaudit {

namespace {

std::string lowercase(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

int hex_value(char c) {
    if (c >= '0' && c <= '9')
        return c - '0';
    if (c >= 'a' && c <= 'f')
        return c - 'a' + 10;
    if (c >= 'A' && c <= 'F')
        return c - 'A' + 10;
    return -1;
}

std::string percent_decode(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '%' && i + 2 < s.size()) {
            int hi = hex_value(s[i + 1]);
            int lo = hex_value(s[i + 2]);
            if (hi >= 0 && lo >= 0) {
                out.push_back(static_cast<char>(hi * 16 + lo));
                i += 2;
                continue;
            }
        }
        out.push_back(s[i]);
    }
    return out;
}

// Collapses "." and ".." segments in an absolute path.
std::string normalize_dots(std::string_view path) {
    std::vector<std::string_view> kept;
    std::size_t i = 0;
    bool trailing_slash = !path.empty() && path.back() == '/';
    while (i < path.size()) {
        while (i < path.size() && path[i] == '/')
            ++i;
        std::size_t start = i;
        while (i < path.size() && path[i] != '/')
            ++i;
        std::string_view seg = path.substr(start, i - start);
        if (seg.empty() || seg == ".")
            continue;
        if (seg == "..") {
            if (!kept.empty())
                kept.pop_back();
            continue;
        }
        kept.push_back(seg);
    }
    std::string out;
    for (auto seg : kept) {
        out.push_back('/');
        out.append(seg);
    }
    if (out.empty())
        return "/";
    if (trailing_slash)
        out.push_back('/');
    return out;
}

}  // namespace

std::string SplitUrl::host_port() const {
    return port.empty() ? host : host + ":" + port;
}

std::string SplitUrl::origin() const {
    return scheme + "://" + host_port();
}

std::string SplitUrl::request_target() const {
    std::string t = path.empty() ? "/" : path;
    if (!query.empty())
        t += "?" + query;
    return t;
}

std::string SplitUrl::str() const {
    return origin() + request_target();
}

std::optional<SplitUrl> split_url(std::string_view raw, std::string_view default_scheme) {
    // Trim surrounding whitespace.
    while (!raw.empty() && std::isspace(static_cast<unsigned char>(raw.front())))
        raw.remove_prefix(1);
    while (!raw.empty() && std::isspace(static_cast<unsigned char>(raw.back())))
        raw.remove_suffix(1);
    if (raw.empty())
        return std::nullopt;

    SplitUrl url;
    auto scheme_end = raw.find("://");
    if (scheme_end != std::string_view::npos) {
        std::string_view scheme = raw.substr(0, scheme_end);
        if (scheme.empty() ||
            !std::all_of(scheme.begin(), scheme.end(), [](unsigned char c) {
                return std::isalnum(c) || c == '+' || c == '-' || c == '.';
            }))
            return std::nullopt;
        url.scheme = lowercase(scheme);
        raw.remove_prefix(scheme_end + 3);
    } else {
        // Reject non-authority schemes like "mailto:".
        auto colon = raw.find(':');
        auto slash = raw.find('/');
        if (colon != std::string_view::npos && (slash == std::string_view::npos || colon < slash)) {
            std::string_view after = raw.substr(colon + 1);
            if (after.empty() || !std::isdigit(static_cast<unsigned char>(after.front())))
                return std::nullopt;
        }
        if (default_scheme.empty())
            return std::nullopt;
        url.scheme = lowercase(default_scheme);
    }
    if (url.scheme != "http" && url.scheme != "https")
        return std::nullopt;

    auto authority_end = raw.find_first_of("/?#");
    std::string_view authority = raw.substr(0, authority_end);
    std::string_view rest = authority_end == std::string_view::npos ? std::string_view{} : raw.substr(authority_end);

    auto at = authority.rfind('@');
    if (at != std::string_view::npos)
        authority.remove_prefix(at + 1);
    if (authority.empty())
        return std::nullopt;

    auto colon = authority.rfind(':');
    if (colon != std::string_view::npos && colon + 1 < authority.size() &&
        std::all_of(authority.begin() + static_cast<long>(colon) + 1, authority.end(),
                    [](unsigned char c) { return std::isdigit(c); })) {
        url.port = std::string(authority.substr(colon + 1));
        authority = authority.substr(0, colon);
    } else if (colon != std::string_view::npos && colon + 1 == authority.size()) {
        authority = authority.substr(0, colon);
    }
    if (authority.empty())
        return std::nullopt;

    url.host = lowercase(percent_decode(authority));
    if (url.host.find('/') != std::string::npos || url.host.find(' ') != std::string::npos)
        return std::nullopt;
    if ((url.scheme == "http" && url.port == "80") || (url.scheme == "https" && url.port == "443"))
        url.port.clear();

    std::string_view path = rest;
    auto hash = path.find('#');
    if (hash != std::string_view::npos) {
        url.fragment = std::string(path.substr(hash + 1));
        path = path.substr(0, hash);
    }
    auto question = path.find('?');
    if (question != std::string_view::npos) {
        url.query = std::string(path.substr(question + 1));
        path = path.substr(0, question);
    }
    url.path = path.empty() ? "/" : std::string(path);
    return url;
}

std::string resolve_reference(const SplitUrl& base, std::string_view location) {
    while (!location.empty() && std::isspace(static_cast<unsigned char>(location.front())))
        location.remove_prefix(1);
    while (!location.empty() && std::isspace(static_cast<unsigned char>(location.back())))
        location.remove_suffix(1);
    if (location.empty())
        return base.str();
    if (location.find("://") != std::string_view::npos)
        return std::string(location);
    if (location.rfind("//", 0) == 0)
        return base.scheme + ":" + std::string(location);

    SplitUrl out = base;
    out.query.clear();
    out.fragment.clear();
    std::string_view path = location;
    auto hash = path.find('#');
    if (hash != std::string_view::npos)
        path = path.substr(0, hash);
    auto question = path.find('?');
    if (question != std::string_view::npos) {
        out.query = std::string(path.substr(question + 1));
        path = path.substr(0, question);
    }
    if (!path.empty() && path.front() == '/') {
        out.path = normalize_dots(path);
    } else {
        std::string_view dir = base.path;
        auto slash = dir.rfind('/');
        dir = slash == std::string_view::npos ? "/" : dir.substr(0, slash + 1);
        out.path = normalize_dots(std::string(dir) + std::string(path));
    }
    std::string s = out.origin() + out.path;
    if (!out.query.empty())
        s += "?" + out.query;
    return s;
}

}  // namespace ghpaudit
