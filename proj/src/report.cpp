#include "ghpaudit/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ghpaudit {

namespace {

// Two-decimal fixed formatting via integer centi-units, so output bytes
// never depend on printf rounding of ties.
std::string centi_str(std::int64_t centi) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%lld.%02lld", static_cast<long long>(centi / 100),
                  static_cast<long long>(centi % 100));
    return buf;
}

std::string format_2dp(double value) {
    return centi_str(std::llround(value * 100.0));
}

double round_2dp(double value) {
    return static_cast<double>(std::llround(value * 100.0)) / 100.0;
}

std::vector<long> delta_days_of(const std::vector<CaptureDelta>& deltas) {
    std::vector<long> days;
    days.reserve(deltas.size());
    for (const auto& d : deltas)
        days.push_back(d.delta_days);
    return days;
}

std::vector<long> gap_days_of(const std::vector<StaleGap>& gaps) {
    std::vector<long> days;
    days.reserve(gaps.size());
    for (const auto& g : gaps)
        days.push_back(g.gap_days);
    return days;
}

TemporalSummary summarize_slice(const TemporalSlice& slice) {
    TemporalSummary summary;
    auto deltas = delta_days_of(slice.deltas);
    summary.delta_count = deltas.size();
    if (!deltas.empty()) {
        summary.delta_mean_days = mean_of(deltas);
        summary.delta_median_days = median_of(deltas);
        summary.delta_min_days = *std::min_element(deltas.begin(), deltas.end());
        summary.delta_max_days = *std::max_element(deltas.begin(), deltas.end());
    }
    auto gaps = gap_days_of(slice.gaps);
    summary.gap_count = gaps.size();
    if (!gaps.empty()) {
        summary.gap_mean_days = mean_of(gaps);
        summary.gap_median_days = median_of(gaps);
    }
    summary.monthly = monthly_aggregate(slice.deltas);
    return summary;
}

constexpr Platform kPlatforms[] = {Platform::GitHub, Platform::GitLab, Platform::Bitbucket,
                                   Platform::SourceForge};

PlatformReport compute_platform(std::string label, const std::vector<const UriAudit*>& originals,
                                const std::vector<const RepoAudit*>& repos,
                                std::size_t all_original_uris) {
    PlatformReport row;
    row.label = std::move(label);
    row.original_uris = originals.size();
    row.repository_uris = repos.size();
    row.uri_share = make_percent(static_cast<std::int64_t>(originals.size()),
                                 static_cast<std::int64_t>(all_original_uris));

    for (const auto* original : originals) {
        row.citations += original->citation_count;
        if (original->liveness == LivenessOutcome::Active)
            ++row.active_original.yes;
        else
            ++row.active_original.no;
        switch (original->wa) {
            case TriState::Yes: ++row.wa_original.yes; break;
            case TriState::No: ++row.wa_original.no; break;
            case TriState::Unknown: ++row.wa_original.unknown; break;
        }
    }

    for (const auto* repo : repos) {
        if (repo->liveness == LivenessOutcome::Active)
            ++row.active_repo.yes;
        else
            ++row.active_repo.no;
        if (repo->sf_excluded) {
            ++row.swh_repo.excluded;
        } else {
            switch (repo->swh) {
                case TriState::Yes: ++row.swh_repo.yes; break;
                case TriState::No: ++row.swh_repo.no; break;
                case TriState::Unknown: ++row.swh_repo.unknown; break;
            }
        }
        switch (repo->wa) {
            case TriState::Yes: ++row.wa_repo.yes; break;
            case TriState::No: ++row.wa_repo.no; break;
            case TriState::Unknown: ++row.wa_repo.unknown; break;
        }

        auto classification = classify(repo->liveness, {repo->swh, repo->wa});
        auto tally_quadrant = [&](QuadrantShares& shares) {
            switch (classification.quadrant) {
                case CoverageQuadrant::Both: ++shares.both; break;
                case CoverageQuadrant::SwhOnly: ++shares.swh_only; break;
                case CoverageQuadrant::WebOnly: ++shares.web_only; break;
                case CoverageQuadrant::Neither: ++shares.neither; break;
                case CoverageQuadrant::Indeterminate: ++shares.indeterminate; break;
            }
        };
        tally_quadrant(row.quadrants);
        if (repo->liveness == LivenessOutcome::Rotten)
            tally_quadrant(row.rotten_quadrants);
        switch (classification.status) {
            case ResourceStatus::Replicated: ++row.statuses.replicated; break;
            case ResourceStatus::Vulnerable: ++row.statuses.vulnerable; break;
            case ResourceStatus::Recoverable: ++row.statuses.recoverable; break;
            case ResourceStatus::Unrecoverable: ++row.statuses.unrecoverable; break;
            case ResourceStatus::Indeterminate: ++row.statuses.indeterminate; break;
        }
    }

    auto finish_coverage = [](Coverage& coverage) {
        coverage.percent = make_percent(static_cast<std::int64_t>(coverage.yes),
                                        static_cast<std::int64_t>(coverage.denominator()));
    };
    finish_coverage(row.active_original);
    finish_coverage(row.active_repo);
    finish_coverage(row.swh_repo);
    finish_coverage(row.wa_original);
    finish_coverage(row.wa_repo);

    auto finish_quadrants = [](QuadrantShares& shares) {
        auto total = static_cast<std::int64_t>(shares.total());
        shares.pct_both = make_percent(static_cast<std::int64_t>(shares.both), total);
        shares.pct_swh_only = make_percent(static_cast<std::int64_t>(shares.swh_only), total);
        shares.pct_web_only = make_percent(static_cast<std::int64_t>(shares.web_only), total);
        shares.pct_neither = make_percent(static_cast<std::int64_t>(shares.neither), total);
        shares.pct_indeterminate =
            make_percent(static_cast<std::int64_t>(shares.indeterminate), total);
    };
    finish_quadrants(row.quadrants);
    finish_quadrants(row.rotten_quadrants);

    auto repo_total = static_cast<std::int64_t>(repos.size());
    row.statuses.pct_replicated =
        make_percent(static_cast<std::int64_t>(row.statuses.replicated), repo_total);
    row.statuses.pct_vulnerable =
        make_percent(static_cast<std::int64_t>(row.statuses.vulnerable), repo_total);
    row.statuses.pct_recoverable =
        make_percent(static_cast<std::int64_t>(row.statuses.recoverable), repo_total);
    row.statuses.pct_unrecoverable =
        make_percent(static_cast<std::int64_t>(row.statuses.unrecoverable), repo_total);
    row.statuses.pct_indeterminate =
        make_percent(static_cast<std::int64_t>(row.statuses.indeterminate), repo_total);

    return row;
}

nlohmann::ordered_json percent_json(const Percent& p) {
    nlohmann::ordered_json j;
    j["numerator"] = p.numerator;
    j["denominator"] = p.denominator;
    j["percent"] = p.str();
    return j;
}

nlohmann::ordered_json counted_percent(std::size_t count, const Percent& p) {
    nlohmann::ordered_json j;
    j["count"] = count;
    j["percent"] = percent_json(p);
    return j;
}

nlohmann::ordered_json quadrants_json(const QuadrantShares& q) {
    nlohmann::ordered_json j;
    j["both"] = counted_percent(q.both, q.pct_both);
    j["swh_only"] = counted_percent(q.swh_only, q.pct_swh_only);
    j["web_only"] = counted_percent(q.web_only, q.pct_web_only);
    j["neither"] = counted_percent(q.neither, q.pct_neither);
    j["indeterminate"] = counted_percent(q.indeterminate, q.pct_indeterminate);
    return j;
}

nlohmann::ordered_json platform_json(const PlatformReport& p) {
    nlohmann::ordered_json j;
    j["citations"] = p.citations;
    j["original_uris"] = p.original_uris;
    j["repository_uris"] = p.repository_uris;
    j["uri_share"] = percent_json(p.uri_share);

    nlohmann::ordered_json liveness;
    liveness["original"] = {{"active", p.active_original.yes},
                            {"rotten", p.active_original.no},
                            {"percent_active", percent_json(p.active_original.percent)}};
    liveness["repository"] = {{"active", p.active_repo.yes},
                              {"rotten", p.active_repo.no},
                              {"percent_active", percent_json(p.active_repo.percent)}};
    j["liveness"] = std::move(liveness);

    j["software_heritage"] = {{"archived", p.swh_repo.yes},
                              {"not_archived", p.swh_repo.no},
                              {"unknown", p.swh_repo.unknown},
                              {"excluded", p.swh_repo.excluded},
                              {"percent_archived", percent_json(p.swh_repo.percent)}};

    nlohmann::ordered_json wa;
    wa["original"] = {{"archived", p.wa_original.yes},
                      {"not_archived", p.wa_original.no},
                      {"unknown", p.wa_original.unknown},
                      {"percent_archived", percent_json(p.wa_original.percent)}};
    wa["repository"] = {{"archived", p.wa_repo.yes},
                        {"not_archived", p.wa_repo.no},
                        {"unknown", p.wa_repo.unknown},
                        {"percent_archived", percent_json(p.wa_repo.percent)}};
    j["web_archives"] = std::move(wa);

    j["quadrants"] = quadrants_json(p.quadrants);
    j["rotten_quadrants"] = quadrants_json(p.rotten_quadrants);

    nlohmann::ordered_json status;
    status["replicated"] = counted_percent(p.statuses.replicated, p.statuses.pct_replicated);
    status["vulnerable"] = counted_percent(p.statuses.vulnerable, p.statuses.pct_vulnerable);
    status["recoverable"] = counted_percent(p.statuses.recoverable, p.statuses.pct_recoverable);
    status["unrecoverable"] =
        counted_percent(p.statuses.unrecoverable, p.statuses.pct_unrecoverable);
    status["indeterminate"] =
        counted_percent(p.statuses.indeterminate, p.statuses.pct_indeterminate);
    j["status"] = std::move(status);

    return j;
}

nlohmann::ordered_json temporal_json(const TemporalSummary& t) {
    nlohmann::ordered_json j;
    j["capture_deltas"] = {{"count", t.delta_count},
                           {"mean_days", round_2dp(t.delta_mean_days)},
                           {"median_days", round_2dp(t.delta_median_days)},
                           {"min_days", t.delta_min_days},
                           {"max_days", t.delta_max_days}};
    j["stale_gaps"] = {{"count", t.gap_count},
                       {"mean_days", round_2dp(t.gap_mean_days)},
                       {"median_days", round_2dp(t.gap_median_days)}};
    nlohmann::ordered_json monthly = nlohmann::ordered_json::array();
    for (const auto& row : t.monthly) {
        nlohmann::ordered_json m;
        m["month"] = format_year_month(row.month_idx);
        m["count"] = row.count;
        m["min"] = row.min_months;
        m["median"] = round_2dp(row.median_months);
        m["mean"] = round_2dp(row.mean_months);
        m["max"] = row.max_months;
        monthly.push_back(std::move(m));
    }
    j["monthly"] = std::move(monthly);
    return j;
}

// Minimal CSV quoting: only fields containing a comma, quote, or newline
// are wrapped.
std::string csv_field(const std::string& value) {
    if (value.find_first_of(",\"\n") == std::string::npos)
        return value;
    std::string quoted = "\"";
    for (char c : value) {
        if (c == '"')
            quoted += '"';
        quoted += c;
    }
    quoted += '"';
    return quoted;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw std::runtime_error("cannot open for writing: " + path.string());
    out << content;
    out.flush();
    if (!out)
        throw std::runtime_error("write failed: " + path.string());
}

std::string monthly_csv(const std::vector<MonthlyRow>& rows) {
    std::ostringstream csv;
    csv << "month,min,median,mean,max\n";
    for (const auto& row : rows) {
        csv << format_year_month(row.month_idx) << ',' << row.min_months << ','
            << format_2dp(row.median_months) << ',' << format_2dp(row.mean_months) << ','
            << row.max_months << '\n';
    }
    return csv.str();
}

const PlatformReport& platform_row(const CoverageReport& report, std::size_t index) {
    return index < report.platforms.size() ? report.platforms[index] : report.overall;
}

}  // namespace

std::string Percent::str() const {
    return centi_str(centi);
}

Percent make_percent(std::int64_t numerator, std::int64_t denominator) {
    Percent p;
    p.numerator = numerator;
    p.denominator = denominator;
    if (denominator > 0 && numerator >= 0)
        p.centi = (numerator * 20000 + denominator) / (2 * denominator);
    return p;
}

CoverageReport build_report(const ReportInputs& inputs) {
    if (inputs.originals.empty())
        throw std::invalid_argument("empty corpus: no GHP URIs to report on");

    CoverageReport report;
    report.input_rows = inputs.input_rows;
    report.rejected_rows = inputs.rejected_rows;
    report.duplicate_rows = inputs.duplicate_rows;
    report.non_ghp_uris = inputs.non_ghp_uris;
    report.not_repository = inputs.not_repository;

    std::vector<const UriAudit*> all_originals;
    std::vector<const RepoAudit*> all_repos;
    for (const auto& original : inputs.originals)
        all_originals.push_back(&original);
    for (const auto& repo : inputs.repos)
        all_repos.push_back(&repo);

    for (Platform platform : kPlatforms) {
        std::vector<const UriAudit*> originals;
        std::vector<const RepoAudit*> repos;
        for (const auto* original : all_originals)
            if (original->platform == platform)
                originals.push_back(original);
        for (const auto* repo : all_repos)
            if (repo->platform == platform)
                repos.push_back(repo);
        report.platforms.push_back(compute_platform(std::string(platform_key(platform)),
                                                    originals, repos, all_originals.size()));
    }
    report.overall = compute_platform("overall", all_originals, all_repos, all_originals.size());
    report.citations = report.overall.citations;

    for (const auto& endpoint : inputs.registry) {
        auto it = inputs.memento_counts.find(endpoint.id);
        std::size_t count = it == inputs.memento_counts.end() ? 0 : it->second;
        report.total_mementos += count;
    }
    for (const auto& endpoint : inputs.registry) {
        auto it = inputs.memento_counts.find(endpoint.id);
        ArchiveShare share;
        share.id = endpoint.id;
        share.name = endpoint.display_name;
        share.mementos = it == inputs.memento_counts.end() ? 0 : it->second;
        share.share = make_percent(static_cast<std::int64_t>(share.mementos),
                                   static_cast<std::int64_t>(report.total_mementos));
        report.archive_shares.push_back(std::move(share));
    }

    report.swh_repo = summarize_slice(inputs.swh_repo);
    report.web_repo = summarize_slice(inputs.web_repo);
    report.web_original = summarize_slice(inputs.web_original);

    return report;
}

nlohmann::ordered_json report_to_json(const CoverageReport& report) {
    nlohmann::ordered_json j;

    nlohmann::ordered_json corpus;
    corpus["input_rows"] = report.input_rows;
    corpus["rejected_rows"] = report.rejected_rows;
    corpus["duplicate_rows"] = report.duplicate_rows;
    corpus["non_ghp_citations"] = report.non_ghp_uris;
    corpus["not_repository_citations"] = report.not_repository;
    corpus["citations"] = report.citations;
    corpus["original_uris"] = report.overall.original_uris;
    corpus["repository_uris"] = report.overall.repository_uris;
    j["corpus"] = std::move(corpus);

    nlohmann::ordered_json platforms;
    for (const auto& platform : report.platforms)
        platforms[platform.label] = platform_json(platform);
    j["platforms"] = std::move(platforms);
    j["overall"] = platform_json(report.overall);

    nlohmann::ordered_json archives = nlohmann::ordered_json::array();
    for (const auto& share : report.archive_shares) {
        nlohmann::ordered_json a;
        a["id"] = share.id;
        a["name"] = share.name;
        a["mementos"] = share.mementos;
        a["share"] = percent_json(share.share);
        archives.push_back(std::move(a));
    }
    j["web_archive_mementos"] = {{"total", report.total_mementos}, {"archives", std::move(archives)}};

    nlohmann::ordered_json temporal;
    temporal["swh_repository"] = temporal_json(report.swh_repo);
    temporal["web_repository"] = temporal_json(report.web_repo);
    temporal["web_original"] = temporal_json(report.web_original);
    j["temporal"] = std::move(temporal);

    return j;
}

void export_report(const CoverageReport& report, const std::filesystem::path& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec)
        throw std::runtime_error("cannot create output directory: " + out_dir.string());

    write_file(out_dir / "report.json", report_to_json(report).dump(2) + "\n");

    {
        std::ostringstream csv;
        csv << "platform,citations,original_uris,repository_uris,uri_share_percent\n";
        for (std::size_t i = 0; i <= report.platforms.size(); ++i) {
            const auto& row = platform_row(report, i);
            csv << row.label << ',' << row.citations << ',' << row.original_uris << ','
                << row.repository_uris << ',' << row.uri_share.str() << '\n';
        }
        write_file(out_dir / "table1_corpus.csv", csv.str());
    }

    {
        std::ostringstream csv;
        csv << "test,platform,numerator,denominator,percent\n";
        auto emit = [&](const char* test, const PlatformReport& row, const Coverage& coverage) {
            csv << test << ',' << row.label << ',' << coverage.percent.numerator << ','
                << coverage.percent.denominator << ',' << coverage.percent.str() << '\n';
        };
        for (std::size_t i = 0; i <= report.platforms.size(); ++i)
            emit("active", platform_row(report, i), platform_row(report, i).active_original);
        for (std::size_t i = 0; i <= report.platforms.size(); ++i)
            emit("swh", platform_row(report, i), platform_row(report, i).swh_repo);
        for (std::size_t i = 0; i <= report.platforms.size(); ++i)
            emit("wa_original", platform_row(report, i), platform_row(report, i).wa_original);
        for (std::size_t i = 0; i <= report.platforms.size(); ++i)
            emit("wa_repository", platform_row(report, i), platform_row(report, i).wa_repo);
        write_file(out_dir / "fig2_three_tests.csv", csv.str());
    }

    auto quadrant_csv = [&](auto pick) {
        std::ostringstream csv;
        csv << "platform,category,count,total,percent\n";
        for (std::size_t i = 0; i <= report.platforms.size(); ++i) {
            const auto& row = platform_row(report, i);
            const QuadrantShares& q = pick(row);
            auto emit = [&](const char* category, std::size_t count, const Percent& pct) {
                csv << row.label << ',' << category << ',' << count << ',' << q.total() << ','
                    << pct.str() << '\n';
            };
            emit("both", q.both, q.pct_both);
            emit("swh_only", q.swh_only, q.pct_swh_only);
            emit("web_only", q.web_only, q.pct_web_only);
            emit("neither", q.neither, q.pct_neither);
            emit("indeterminate", q.indeterminate, q.pct_indeterminate);
        }
        return csv.str();
    };
    write_file(out_dir / "fig3_quadrants.csv",
               quadrant_csv([](const PlatformReport& r) -> const QuadrantShares& {
                   return r.quadrants;
               }));
    write_file(out_dir / "fig4_rotten_quadrants.csv",
               quadrant_csv([](const PlatformReport& r) -> const QuadrantShares& {
                   return r.rotten_quadrants;
               }));

    {
        std::ostringstream csv;
        csv << "archive_id,archive_name,mementos,percent\n";
        for (const auto& share : report.archive_shares) {
            csv << csv_field(share.id) << ',' << csv_field(share.name) << ',' << share.mementos
                << ',' << share.share.str() << '\n';
        }
        write_file(out_dir / "table2_archive_mementos.csv", csv.str());
    }

    write_file(out_dir / "fig5_swh_monthly.csv", monthly_csv(report.swh_repo.monthly));
    write_file(out_dir / "fig6_web_monthly.csv", monthly_csv(report.web_repo.monthly));
    write_file(out_dir / "fig6_web_monthly_original.csv", monthly_csv(report.web_original.monthly));
}

std::string summary_text(const CoverageReport& report) {
    const auto& overall = report.overall;
    std::ostringstream out;
    out << "Corpus: " << report.input_rows << " rows, " << report.citations << " GHP citations, "
        << overall.original_uris << " original URIs, " << overall.repository_uris
        << " repository URIs\n";
    out << "  rejected " << report.rejected_rows << ", duplicates " << report.duplicate_rows
        << ", non-GHP " << report.non_ghp_uris << ", non-repository " << report.not_repository
        << "\n";
    out << "Active on the live Web: " << overall.active_original.percent.str() << "% ("
        << overall.active_original.yes << "/" << overall.active_original.denominator()
        << " original URIs)\n";
    out << "Archived by Software Heritage: " << overall.swh_repo.percent.str() << "% ("
        << overall.swh_repo.yes << "/" << overall.swh_repo.denominator()
        << " repository URIs, " << overall.swh_repo.excluded << " excluded)\n";
    out << "Archived by web archives: " << overall.wa_original.percent.str() << "% ("
        << overall.wa_original.yes << "/" << overall.wa_original.denominator()
        << " original URIs), " << overall.wa_repo.percent.str() << "% (" << overall.wa_repo.yes
        << "/" << overall.wa_repo.denominator() << " repository URIs)\n";
    const auto& q = overall.quadrants;
    out << "Coverage quadrants: both " << q.pct_both.str() << "%, web only "
        << q.pct_web_only.str() << "%, swh only " << q.pct_swh_only.str() << "%, neither "
        << q.pct_neither.str() << "%, indeterminate " << q.pct_indeterminate.str() << "%\n";
    const auto& s = overall.statuses;
    out << "Status: replicated " << s.replicated << ", vulnerable " << s.vulnerable
        << ", recoverable " << s.recoverable << ", unrecoverable " << s.unrecoverable
        << ", indeterminate " << s.indeterminate << "\n";
    out << "Mementos: " << report.total_mementos << " across " << report.archive_shares.size()
        << " archives\n";
    return out.str();
}

}  // namespace ghpaudit
