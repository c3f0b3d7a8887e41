#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ghpaudit/corpus.hpp"
#include "ghpaudit/dates.hpp"

namespace ghpaudit {

enum class ArchiveKind { Swh, Web };

std::string_view to_string(ArchiveKind k);

// Publication-to-first-capture delta for one repository URI. Only emitted
// when nothing was captured before the publication date.
struct CaptureDelta {
    std::string canonical_uri;
    Date publication_date{};
    Timestamp first_capture{};
    long delta_days{0};
    int delta_months{0};
    ArchiveKind archive_kind{ArchiveKind::Swh};
};

// A URI captured before publication and never since.
struct StaleGap {
    std::string canonical_uri;
    Timestamp last_capture_before_pub{};
    Date publication_date{};
    long gap_days{0};
    ArchiveKind archive_kind{ArchiveKind::Swh};
};

// canonical_uri -> capture timestamps, ascending.
using CaptureHistory = std::map<std::string, std::vector<Timestamp>>;

// One delta per URI whose earliest citing publication passes `cutoff` and
// whose first capture is not before that publication. Day arithmetic uses
// calendar dates, so a same-day capture yields delta 0. URIs with no
// captures emit nothing.
std::vector<CaptureDelta> capture_deltas(const std::vector<UriCitationGroup>& groups,
                                         const CaptureHistory& histories, ArchiveKind kind,
                                         std::optional<Date> cutoff = std::nullopt);

// One gap per URI captured strictly before its earliest citing publication
// with no capture on or after it.
std::vector<StaleGap> stale_gaps(const std::vector<UriCitationGroup>& groups,
                                 const CaptureHistory& histories, ArchiveKind kind);

// Exclusive three-way split of every URI with at least one capture.
struct CapturePartition {
    std::size_t delta_eligible{0};  // nothing captured before publication
    std::size_t stale{0};           // captured before publication, never since
    std::size_t captured_since{0};  // captured both before and on-or-after

    std::size_t total() const { return delta_eligible + stale + captured_since; }
};

CapturePartition partition_captures(const std::vector<UriCitationGroup>& groups,
                                    const CaptureHistory& histories);

// Delta-month statistics for one publication month.
struct MonthlyRow {
    int month_idx{0};  // year*12 + month-1 of the publication date
    std::size_t count{0};
    int min_months{0};
    double median_months{0.0};
    double mean_months{0.0};
    int max_months{0};
};

// Rows keyed and sorted by publication month; months with no deltas are
// omitted.
std::vector<MonthlyRow> monthly_aggregate(const std::vector<CaptureDelta>& deltas);

double mean_of(const std::vector<long>& values);
// Even-cardinality median is the mean of the two central values.
double median_of(std::vector<long> values);

}  // namespace ghpaudit
