#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ghpaudit {

enum class Platform { GitHub, GitLab, Bitbucket, SourceForge };

std::string_view platform_name(Platform p);  // display name, e.g. "GitHub"
std::string_view platform_key(Platform p);   // machine name, e.g. "github"
std::optional<Platform> platform_from_name(std::string_view name);

// A recognized Git Hosting Platform URI together with its repository-level
// canonical form.
struct GhpUri {
    std::string original_uri;            // trimmed input, scheme added if absent
    Platform platform{Platform::GitHub};
    std::vector<std::string> repo_path;  // path segments identifying the repository
    std::string canonical_repo_uri;      // repository-level URI
    bool is_deep{false};                 // original pointed below the repository level
};

struct GhpParse {
    enum class Status {
        Repository,     // recognized, repository identified
        NotGhp,         // host is not one of the four platforms (or URI unparseable)
        NotRepository,  // platform host, but no repository can be identified
    };

    Status status{Status::NotGhp};
    std::optional<GhpUri> uri;           // engaged iff status == Repository
    std::optional<Platform> platform;    // engaged for Repository and NotRepository
    std::string normalized_original;     // absolute form of the input when parseable
    std::string reason;                  // for NotGhp / NotRepository

    bool is_repository() const { return status == Status::Repository; }
};

// Recognizes github.com, gitlab.com, bitbucket.org, sourceforge.net (with
// "www." variants) and "<project>.sourceforge.net" subdomains. A missing
// scheme is read as https.
GhpParse parse_ghp_uri(std::string_view raw);

// Repository-level URI per platform: GitHub/Bitbucket keep the first two
// path segments, GitLab truncates at the first sub-resource marker,
// SourceForge maps to https://sourceforge.net/projects/<name>.
const std::string& canonicalize(const GhpUri& uri);

// Comparison key for grouping canonical URIs: path case-folded for
// GitHub/Bitbucket/SourceForge, preserved for GitLab.
std::string group_key(const GhpUri& uri);

}  // namespace ghpaudit
