#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "ghpaudit/classify.hpp"
#include "ghpaudit/ghp_uri.hpp"
#include "ghpaudit/liveness.hpp"
#include "ghpaudit/memento.hpp"
#include "ghpaudit/temporal.hpp"

namespace ghpaudit {

// A percentage carried as an exact two-decimal value (half-up) with its
// fraction, so every figure is recomputable from the report alone.
struct Percent {
    std::int64_t numerator{0};
    std::int64_t denominator{0};
    std::int64_t centi{0};  // percent * 100, e.g. 5721 for 57.21%

    std::string str() const;  // "57.21"
    friend bool operator==(const Percent&, const Percent&) = default;
};

Percent make_percent(std::int64_t numerator, std::int64_t denominator);

// Audit outcome for one original (as-cited) URI.
struct UriAudit {
    std::string uri;
    Platform platform{Platform::GitHub};
    LivenessOutcome liveness{LivenessOutcome::Rotten};
    TriState wa{TriState::Unknown};
    std::size_t citation_count{0};
};

// Audit outcome for one repository-level URI.
struct RepoAudit {
    std::string canonical_uri;
    Platform platform{Platform::GitHub};
    LivenessOutcome liveness{LivenessOutcome::Rotten};
    TriState swh{TriState::Unknown};
    bool sf_excluded{false};  // SourceForge project with no access URLs
    TriState wa{TriState::Unknown};
    std::size_t citation_count{0};
};

struct TemporalSlice {
    std::vector<CaptureDelta> deltas;
    std::vector<StaleGap> gaps;
};

struct ReportInputs {
    std::size_t input_rows{0};
    std::size_t rejected_rows{0};
    std::size_t duplicate_rows{0};
    std::size_t non_ghp_uris{0};     // citations whose URI is not on a GHP host
    std::size_t not_repository{0};   // GHP URIs with no repository mapping
    std::vector<UriAudit> originals;
    std::vector<RepoAudit> repos;
    std::vector<ArchiveEndpoint> registry;
    std::map<std::string, std::size_t> memento_counts;  // archive id -> mementos
    TemporalSlice swh_repo;
    TemporalSlice web_repo;
    TemporalSlice web_original;
};

// yes/no/unknown counts with the percentage of yes over all three.
// `excluded` is removed from the denominator entirely.
struct Coverage {
    std::size_t yes{0};
    std::size_t no{0};
    std::size_t unknown{0};
    std::size_t excluded{0};
    Percent percent;

    std::size_t denominator() const { return yes + no + unknown; }
};

struct QuadrantShares {
    std::size_t both{0};
    std::size_t swh_only{0};
    std::size_t web_only{0};
    std::size_t neither{0};
    std::size_t indeterminate{0};
    Percent pct_both, pct_swh_only, pct_web_only, pct_neither, pct_indeterminate;

    std::size_t total() const { return both + swh_only + web_only + neither + indeterminate; }
};

struct StatusShares {
    std::size_t replicated{0};
    std::size_t vulnerable{0};
    std::size_t recoverable{0};
    std::size_t unrecoverable{0};
    std::size_t indeterminate{0};
    Percent pct_replicated, pct_vulnerable, pct_recoverable, pct_unrecoverable, pct_indeterminate;
};

struct PlatformReport {
    std::string label;  // "github", ..., or "overall"
    std::size_t citations{0};
    std::size_t original_uris{0};
    std::size_t repository_uris{0};
    Percent uri_share;          // of all original URIs
    Coverage active_original;   // liveness over original URIs
    Coverage active_repo;       // liveness over repository URIs
    Coverage swh_repo;          // Software Heritage, exclusions applied
    Coverage wa_original;       // web archives over original URIs
    Coverage wa_repo;           // web archives over repository URIs
    QuadrantShares quadrants;          // all repository URIs
    QuadrantShares rotten_quadrants;   // repository URIs no longer live
    StatusShares statuses;
};

struct ArchiveShare {
    std::string id;
    std::string name;
    std::size_t mementos{0};
    Percent share;
};

struct TemporalSummary {
    std::size_t delta_count{0};
    double delta_mean_days{0.0};
    double delta_median_days{0.0};
    long delta_min_days{0};
    long delta_max_days{0};
    std::size_t gap_count{0};
    double gap_mean_days{0.0};
    double gap_median_days{0.0};
    std::vector<MonthlyRow> monthly;
};

struct CoverageReport {
    std::size_t input_rows{0};
    std::size_t rejected_rows{0};
    std::size_t duplicate_rows{0};
    std::size_t non_ghp_uris{0};
    std::size_t not_repository{0};
    std::size_t citations{0};
    std::vector<PlatformReport> platforms;  // GitHub, GitLab, Bitbucket, SourceForge
    PlatformReport overall;
    std::vector<ArchiveShare> archive_shares;  // registry order
    std::size_t total_mementos{0};
    TemporalSummary swh_repo;
    TemporalSummary web_repo;
    TemporalSummary web_original;
};

// Assembles every summary; throws std::invalid_argument on an empty corpus.
CoverageReport build_report(const ReportInputs& inputs);

nlohmann::ordered_json report_to_json(const CoverageReport& report);

// Writes report.json plus the CSV plot-data files into `out_dir`. Output
// bytes are a pure function of the report (LF endings, stable ordering).
// Throws std::runtime_error when the destination is unwritable.
void export_report(const CoverageReport& report, const std::filesystem::path& out_dir);

std::string summary_text(const CoverageReport& report);

}  // namespace ghpaudit
