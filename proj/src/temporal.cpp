#include "ghpaudit/temporal.hpp"

#include <algorithm>
#include <numeric>

namespace ghpaudit {

std::string_view to_string(ArchiveKind k) {
    return k == ArchiveKind::Swh ? "swh" : "web";
}

std::vector<CaptureDelta> capture_deltas(const std::vector<UriCitationGroup>& groups,
                                         const CaptureHistory& histories, ArchiveKind kind,
                                         std::optional<Date> cutoff) {
    std::vector<CaptureDelta> deltas;
    for (const auto& group : groups) {
        auto it = histories.find(group.canonical_uri);
        if (it == histories.end() || it->second.empty())
            continue;
        Date pub = group.earliest_publication_date;
        if (cutoff && pub < *cutoff)
            continue;
        Date first = to_utc_date(it->second.front());
        if (first < pub)
            continue;  // captured before publication: not a delta, maybe a gap
        CaptureDelta delta;
        delta.canonical_uri = group.canonical_uri;
        delta.publication_date = pub;
        delta.first_capture = it->second.front();
        delta.delta_days = days_between(pub, first);
        delta.delta_months = month_index(first) - month_index(pub);
        delta.archive_kind = kind;
        deltas.push_back(std::move(delta));
    }
    return deltas;
}

std::vector<StaleGap> stale_gaps(const std::vector<UriCitationGroup>& groups,
                                 const CaptureHistory& histories, ArchiveKind kind) {
    std::vector<StaleGap> gaps;
    for (const auto& group : groups) {
        auto it = histories.find(group.canonical_uri);
        if (it == histories.end() || it->second.empty())
            continue;
        Date pub = group.earliest_publication_date;
        Date last = to_utc_date(it->second.back());
        if (!(last < pub))
            continue;  // captured on or after publication
        StaleGap gap;
        gap.canonical_uri = group.canonical_uri;
        gap.last_capture_before_pub = it->second.back();
        gap.publication_date = pub;
        gap.gap_days = days_between(last, pub);
        gap.archive_kind = kind;
        gaps.push_back(std::move(gap));
    }
    return gaps;
}

CapturePartition partition_captures(const std::vector<UriCitationGroup>& groups,
                                    const CaptureHistory& histories) {
    CapturePartition partition;
    for (const auto& group : groups) {
        auto it = histories.find(group.canonical_uri);
        if (it == histories.end() || it->second.empty())
            continue;
        Date pub = group.earliest_publication_date;
        Date first = to_utc_date(it->second.front());
        Date last = to_utc_date(it->second.back());
        if (!(first < pub))
            ++partition.delta_eligible;
        else if (last < pub)
            ++partition.stale;
        else
            ++partition.captured_since;
    }
    return partition;
}

std::vector<MonthlyRow> monthly_aggregate(const std::vector<CaptureDelta>& deltas) {
    std::map<int, std::vector<long>> by_month;
    for (const auto& delta : deltas)
        by_month[month_index(delta.publication_date)].push_back(delta.delta_months);

    std::vector<MonthlyRow> rows;
    rows.reserve(by_month.size());
    for (auto& [month, values] : by_month) {
        std::sort(values.begin(), values.end());
        MonthlyRow row;
        row.month_idx = month;
        row.count = values.size();
        row.min_months = static_cast<int>(values.front());
        row.max_months = static_cast<int>(values.back());
        row.median_months = median_of(values);
        row.mean_months = mean_of(values);
        rows.push_back(row);
    }
    return rows;
}

double mean_of(const std::vector<long>& values) {
    if (values.empty())
        return 0.0;
    long sum = std::accumulate(values.begin(), values.end(), 0L);
    return static_cast<double>(sum) / static_cast<double>(values.size());
}

double median_of(std::vector<long> values) {
    if (values.empty())
        return 0.0;
    std::sort(values.begin(), values.end());
    std::size_t mid = values.size() / 2;
    if (values.size() % 2 == 1)
        return static_cast<double>(values[mid]);
    return (static_cast<double>(values[mid - 1]) + static_cast<double>(values[mid])) / 2.0;
}

}  // namespace ghpaudit
