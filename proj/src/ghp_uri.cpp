#include "ghpaudit/ghp_uri.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "ghpaudit/url.hpp"

namespace ghpaudit {

namespace {

std::string lowercase(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::vector<std::string> path_segments(std::string_view path) {
    std::vector<std::string> segs;
    std::size_t i = 0;
    while (i < path.size()) {
        while (i < path.size() && path[i] == '/')
            ++i;
        std::size_t start = i;
        while (i < path.size() && path[i] != '/')
            ++i;
        if (i > start)
            segs.emplace_back(path.substr(start, i - start));
    }
    return segs;
}

void strip_git_suffix(std::string& seg) {
    if (seg.size() > 4 && seg.ends_with(".git"))
        seg.resize(seg.size() - 4);
}

std::string strip_www(std::string host) {
    if (host.rfind("www.", 0) == 0)
        host.erase(0, 4);
    return host;
}

std::string join_path(const std::vector<std::string>& segs) {
    std::string out;
    for (const auto& s : segs) {
        out.push_back('/');
        out.append(s);
    }
    return out;
}

// GitLab sub-resource markers; anything at or past one of these segments is
// below the repository level. Scanning starts at segment index 2 so a
// two-segment project may itself be named e.g. "issues".
constexpr std::array<std::string_view, 7> kGitlabMarkers = {"-",      "blob",           "tree", "issues",
                                                            "merge_requests", "wikis", "raw"};

// sourceforge.net subdomains that never name a project.
constexpr std::array<std::string_view, 5> kSourceForgeInfra = {"downloads", "prdownloads", "lists", "mirrors",
                                                               "ftp"};

GhpParse not_ghp(std::string reason, std::string normalized = {}) {
    GhpParse out;
    out.status = GhpParse::Status::NotGhp;
    out.reason = std::move(reason);
    out.normalized_original = std::move(normalized);
    return out;
}

GhpParse not_repository(Platform platform, std::string normalized, std::string reason) {
    GhpParse out;
    out.status = GhpParse::Status::NotRepository;
    out.platform = platform;
    out.normalized_original = std::move(normalized);
    out.reason = std::move(reason);
    return out;
}

GhpParse repository(GhpUri uri) {
    GhpParse out;
    out.status = GhpParse::Status::Repository;
    out.platform = uri.platform;
    out.normalized_original = uri.original_uri;
    out.uri = std::move(uri);
    return out;
}

GhpParse parse_two_segment(Platform platform, const SplitUrl& url, std::string normalized) {
    auto segs = path_segments(url.path);
    if (segs.size() < 2)
        return not_repository(platform, std::move(normalized), "no repository in path");
    std::vector<std::string> repo{segs[0], segs[1]};
    strip_git_suffix(repo[1]);
    GhpUri uri;
    uri.original_uri = std::move(normalized);
    uri.platform = platform;
    uri.canonical_repo_uri = url.scheme + "://" + strip_www(url.host_port()) + join_path(repo);
    uri.is_deep = segs.size() > 2;
    uri.repo_path = std::move(repo);
    return repository(uri);
}

GhpParse parse_gitlab(const SplitUrl& url, std::string normalized) {
    auto segs = path_segments(url.path);
    std::size_t cut = segs.size();
    for (std::size_t i = 2; i < segs.size(); ++i) {
        if (std::find(kGitlabMarkers.begin(), kGitlabMarkers.end(), segs[i]) != kGitlabMarkers.end()) {
            cut = i;
            break;
        }
    }
    std::vector<std::string> repo(segs.begin(), segs.begin() + static_cast<long>(cut));
    if (repo.size() < 2)
        return not_repository(Platform::GitLab, std::move(normalized), "no repository in path");
    strip_git_suffix(repo.back());
    GhpUri uri;
    uri.original_uri = std::move(normalized);
    uri.platform = Platform::GitLab;
    uri.canonical_repo_uri = url.scheme + "://" + strip_www(url.host_port()) + join_path(repo);
    uri.is_deep = cut < segs.size();
    uri.repo_path = std::move(repo);
    return repository(uri);
}

GhpParse parse_sourceforge(const SplitUrl& url, std::string normalized, std::string host) {
    auto segs = path_segments(url.path);
    std::string project;
    bool deep = false;

    if (host == "sourceforge.net") {
        std::string marker = segs.empty() ? std::string() : lowercase(segs[0]);
        if (segs.size() >= 2 && (marker == "projects" || marker == "p")) {
            // project unix names are lowercase; the router is case-insensitive
            project = lowercase(segs[1]);
            deep = segs.size() > 2;
        } else {
            return not_repository(Platform::SourceForge, std::move(normalized),
                                  "sourceforge URI without a project path");
        }
    } else {
        // "<project>.sourceforge.net"
        std::string sub = host.substr(0, host.size() - std::string(".sourceforge.net").size());
        if (sub.empty() || sub.find('.') != std::string::npos ||
            std::find(kSourceForgeInfra.begin(), kSourceForgeInfra.end(), sub) != kSourceForgeInfra.end())
            return not_repository(Platform::SourceForge, std::move(normalized),
                                  "sourceforge subdomain does not name a project");
        project = sub;  // DNS labels are case-insensitive; host already lowercased
        deep = !segs.empty();
    }
    strip_git_suffix(project);
    GhpUri uri;
    uri.original_uri = std::move(normalized);
    uri.platform = Platform::SourceForge;
    uri.canonical_repo_uri = "https://sourceforge.net/projects/" + project;
    uri.is_deep = deep;
    uri.repo_path = {project};
    return repository(uri);
}

}  // namespace

std::string_view platform_name(Platform p) {
    switch (p) {
        case Platform::GitHub: return "GitHub";
        case Platform::GitLab: return "GitLab";
        case Platform::Bitbucket: return "Bitbucket";
        case Platform::SourceForge: return "SourceForge";
    }
    return "?";
}

std::string_view platform_key(Platform p) {
    switch (p) {
        case Platform::GitHub: return "github";
        case Platform::GitLab: return "gitlab";
        case Platform::Bitbucket: return "bitbucket";
        case Platform::SourceForge: return "sourceforge";
    }
    return "?";
}

std::optional<Platform> platform_from_name(std::string_view name) {
    for (Platform p : {Platform::GitHub, Platform::GitLab, Platform::Bitbucket, Platform::SourceForge})
        if (name == platform_name(p) || name == platform_key(p))
            return p;
    return std::nullopt;
}

GhpParse parse_ghp_uri(std::string_view raw) {
    auto url = split_url(raw, "https");
    if (!url)
        return not_ghp("unparseable URI syntax");

    std::string normalized = url->str();
    std::string host = strip_www(url->host);

    bool ghp_host = host == "github.com" || host == "bitbucket.org" || host == "gitlab.com" ||
                    host == "sourceforge.net" || host.ends_with(".sourceforge.net");
    if (!ghp_host)
        return not_ghp("host is not a recognized GHP", normalized);
    if (!url->port.empty())
        return not_ghp("GHP host with a non-default port", normalized);

    if (host == "github.com")
        return parse_two_segment(Platform::GitHub, *url, std::move(normalized));
    if (host == "bitbucket.org")
        return parse_two_segment(Platform::Bitbucket, *url, std::move(normalized));
    if (host == "gitlab.com")
        return parse_gitlab(*url, std::move(normalized));
    return parse_sourceforge(*url, std::move(normalized), host);
}

const std::string& canonicalize(const GhpUri& uri) {
    return uri.canonical_repo_uri;
}

std::string group_key(const GhpUri& uri) {
    if (uri.platform == Platform::GitLab)
        return uri.canonical_repo_uri;
    return lowercase(uri.canonical_repo_uri);
}

}  // namespace ghpaudit
