#pragma once

#include <memory>
#include <string>
#include <vector>

#include "ghpaudit/cache.hpp"
#include "ghpaudit/dates.hpp"
#include "ghpaudit/http.hpp"
#include "ghpaudit/swh.hpp"

namespace ghpaudit {

enum class VcsKind { Git, Svn, Hg, Cvs, Bzr };

std::string_view to_string(VcsKind k);

struct AccessUrl {
    VcsKind kind{VcsKind::Git};
    std::string url;
};

// A SourceForge project and its version-control access URLs. Projects
// without code tools have none and are excluded from Software Heritage
// coverage denominators.
struct SfProject {
    std::string name;
    std::vector<AccessUrl> access_urls;
    Timestamp fetched_at{};
    bool found{true};  // false when the project API returned 404
    LookupStatus lookup{LookupStatus::Found};
};

enum class SfSwhStatus { Excluded, Archived, NotArchived, Unknown };

std::string_view to_string(SfSwhStatus s);

class SourceForgeResolver {
public:
    SourceForgeResolver(std::string base_url, HttpEngine& engine,
                        std::shared_ptr<ObservationCache> cache = nullptr);

    // Queries the project REST API and extracts one access URL per
    // version-control tool. Unknown lookup means the API was unreachable,
    // not that the project lacks tools.
    SfProject fetch_access_urls(const std::string& project_name);

private:
    std::string base_url_;
    HttpEngine& engine_;
    std::shared_ptr<ObservationCache> cache_;
};

// Project-level Software Heritage status: no access URLs -> Excluded;
// any access URL archived with at least one counted visit -> Archived;
// all not found -> NotArchived; otherwise Unknown. When `counted_dates`
// is given it receives the merged counted-visit dates, ascending.
SfSwhStatus swh_status_for_project(const SfProject& project, SwhClient& swh,
                                   std::vector<Timestamp>* counted_dates = nullptr);

}  // namespace ghpaudit
