#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ghpaudit/cache.hpp"
#include "ghpaudit/dates.hpp"
#include "ghpaudit/http.hpp"

namespace ghpaudit {

// Outcome of an archive lookup. NotFound and Unknown are distinct terminal
// states: an outage is never conflated with absence.
enum class LookupStatus { Found, NotFound, Unknown };

std::string_view to_string(LookupStatus s);

struct SwhVisit {
    int visit_number{0};
    Timestamp date{};
    std::string status;  // e.g. "full", "partial", "failed"
    std::optional<std::string> snapshot_id;
};

struct SwhSummary {
    std::optional<Timestamp> first_snapshot_date;
    std::optional<Timestamp> last_snapshot_date;
    int snapshot_count{0};
};

// First/last/count over counted visits. Only successful captures count
// unless `count_all` is set; the input need not be sorted.
SwhSummary summarize_visits(std::vector<SwhVisit> visits, bool count_all = false);

// Dates of the counted visits, ascending.
std::vector<Timestamp> counted_visit_dates(const std::vector<SwhVisit>& visits,
                                           bool count_all = false);

struct SwhArchivalRecord {
    std::string queried_uri;
    LookupStatus lookup{LookupStatus::Unknown};
    bool origin_found{false};
    std::string matched_origin;    // exact origin string that matched (may carry ".git")
    std::vector<SwhVisit> visits;  // ascending by date; all statuses retained
    std::optional<Timestamp> first_snapshot_date;
    std::optional<Timestamp> last_snapshot_date;
    int snapshot_count{0};
};

class SwhClient {
public:
    SwhClient(std::string base_url, HttpEngine& engine, std::shared_ptr<ObservationCache> cache = nullptr,
              bool count_all_visits = false);

    // Exact-string origin match for one repository-level URI.
    LookupStatus lookup_origin(const std::string& repo_uri);

    // All visits of a known origin, pagination followed to exhaustion,
    // ascending by date. nullopt = Unknown (partial histories are never
    // summarized).
    std::optional<std::vector<SwhVisit>> list_visits(const std::string& origin);

    // Full check: exact lookup, one ".git" retry variant, visit listing,
    // and summary.
    SwhArchivalRecord check_uri(const std::string& repo_uri);

    bool counts_all_visits() const { return count_all_visits_; }

private:
    HttpResponse fetch(const std::string& url);

    std::string base_url_;
    HttpEngine& engine_;
    std::shared_ptr<ObservationCache> cache_;
    bool count_all_visits_;
};

}  // namespace ghpaudit
