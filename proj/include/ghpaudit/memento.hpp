#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ghpaudit/cache.hpp"
#include "ghpaudit/dates.hpp"
#include "ghpaudit/http.hpp"

namespace ghpaudit {

// One web archive queried for TimeMaps. The template carries exactly one
// "{uri}" slot for the URI-R.
struct ArchiveEndpoint {
    std::string id;
    std::string display_name;
    std::string timemap_template;
};

// The twelve archives the default aggregation queries.
const std::vector<ArchiveEndpoint>& default_archive_registry();

// Tab-separated registry file: id, display name, template. '#' comments and
// blank lines ignored. Throws on unreadable files or malformed templates.
std::vector<ArchiveEndpoint> load_archive_registry(const std::filesystem::path& path);

std::string expand_template(const ArchiveEndpoint& endpoint, const std::string& uri_r);

// One parsed web-linking entry: <uri>; key="value"; ...
struct LinkEntry {
    std::string uri;
    std::set<std::string> rels;  // lowercased rel tokens ("first memento" -> {"first","memento"})
    std::map<std::string, std::string> attributes;
};

struct LinkParseResult {
    std::vector<LinkEntry> entries;
    std::vector<std::string> warnings;  // per-entry problems, entry skipped
    bool failed{false};                 // wholly unparseable body
};

LinkParseResult parse_link_format(std::string_view body);

struct Memento {
    std::string archive_id;
    std::string uri_m;
    Timestamp memento_datetime{};
};

// Mementos in one archive's TimeMap: entries whose rel set contains
// "memento", with exact (uri_m, datetime) duplicates collapsed.
std::vector<Memento> extract_mementos(const LinkParseResult& links, const std::string& archive_id);

struct ArchiveFailure {
    std::string archive_id;
    std::string error_class;  // timeout | dns | tls | connection | http_<status> | parse
};

struct TimeMapSummary {
    std::string uri_r;
    std::vector<Memento> mementos;  // ascending by datetime
    std::optional<Timestamp> first_memento;
    std::optional<Timestamp> last_memento;
    std::size_t memento_count{0};
    std::map<std::string, std::size_t> per_archive_counts;
    std::vector<ArchiveFailure> failed_archives;

    std::size_t queried_archives{0};
    // Coverage is unknowable only when every archive failed.
    bool all_failed() const { return queried_archives > 0 && failed_archives.size() == queried_archives; }
};

// Pure merge of per-archive results; permutation-invariant over the input
// order. Exposed separately from the network fan-out so it can be checked
// on its own.
TimeMapSummary merge_timemaps(const std::string& uri_r,
                              const std::vector<std::pair<std::string, std::vector<Memento>>>& per_archive,
                              std::vector<ArchiveFailure> failures, std::size_t queried_archives);

// Fans out to every endpoint, tolerating per-archive failures.
TimeMapSummary aggregate(const std::string& uri_r, const std::vector<ArchiveEndpoint>& registry,
                         HttpEngine& engine, std::shared_ptr<ObservationCache> cache = nullptr,
                         int fanout = 4);

}  // namespace ghpaudit
