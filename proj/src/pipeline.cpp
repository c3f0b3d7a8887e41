#include "ghpaudit/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <map>
#include <set>
#include <thread>
#include <tuple>
#include <vector>

#include "json.hpp"

#include "ghpaudit/cache.hpp"
#include "ghpaudit/ghp_uri.hpp"
#include "ghpaudit/http.hpp"
#include "ghpaudit/liveness.hpp"
#include "ghpaudit/memento.hpp"
#include "ghpaudit/sourceforge.hpp"
#include "ghpaudit/swh.hpp"
#include "ghpaudit/temporal.hpp"
#include "ghpaudit/url.hpp"

namespace ghpaudit {

namespace {

void parallel_for_n(std::size_t count, int workers, const std::function<void(std::size_t)>& fn) {
    if (count == 0)
        return;
    int threads = std::max(1, std::min<int>(workers, static_cast<int>(count)));
    if (threads == 1) {
        for (std::size_t i = 0; i < count; ++i)
            fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto body = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < count;)
            fn(i);
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int w = 0; w < threads; ++w)
        pool.emplace_back(body);
    for (auto& t : pool)
        t.join();
}

nlohmann::json liveness_to_json(const LivenessResult& r) {
    nlohmann::json j;
    j["outcome"] = std::string(to_string(r.outcome));
    if (r.final_status)
        j["final_status"] = *r.final_status;
    else
        j["final_status"] = nullptr;
    j["error_class"] = std::string(to_string(r.error_class));
    j["probed_at"] = format_timestamp(r.probed_at);
    nlohmann::json chain = nlohmann::json::array();
    for (const auto& hop : r.redirect_chain)
        chain.push_back({{"status", hop.status}, {"location", hop.location}});
    j["redirect_chain"] = std::move(chain);
    return j;
}

std::optional<HttpErrorClass> error_class_from_string(const std::string& s) {
    for (auto e : {HttpErrorClass::None, HttpErrorClass::Timeout, HttpErrorClass::Dns,
                   HttpErrorClass::Tls, HttpErrorClass::Connection,
                   HttpErrorClass::TooManyRedirects})
        if (s == to_string(e))
            return e;
    return std::nullopt;
}

std::optional<LivenessResult> liveness_from_json(const std::string& uri, const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("outcome") || !j.contains("error_class"))
        return std::nullopt;
    LivenessResult r;
    r.uri = uri;
    std::string outcome = j.value("outcome", "");
    if (outcome == "active")
        r.outcome = LivenessOutcome::Active;
    else if (outcome == "rotten")
        r.outcome = LivenessOutcome::Rotten;
    else
        return std::nullopt;
    if (j.contains("final_status") && j["final_status"].is_number_integer())
        r.final_status = j["final_status"].get<int>();
    auto error = error_class_from_string(j.value("error_class", ""));
    if (!error)
        return std::nullopt;
    r.error_class = *error;
    if (auto probed = parse_iso_timestamp(j.value("probed_at", "")))
        r.probed_at = *probed;
    for (const auto& hop : j.value("redirect_chain", nlohmann::json::array())) {
        if (!hop.is_object())
            return std::nullopt;
        r.redirect_chain.push_back({hop.value("status", 0), hop.value("location", "")});
    }
    return r;
}

// "https://sourceforge.net/projects/<name>" -> "<name>"
std::string sf_project_name(const std::string& canonical_uri) {
    auto pos = canonical_uri.rfind('/');
    return pos == std::string::npos ? std::string{} : canonical_uri.substr(pos + 1);
}

TriState wa_tristate(const TimeMapSummary& summary) {
    if (summary.memento_count >= 1)
        return TriState::Yes;
    return summary.all_failed() ? TriState::Unknown : TriState::No;
}

std::vector<Timestamp> memento_dates(const TimeMapSummary& summary) {
    std::vector<Timestamp> dates;
    dates.reserve(summary.mementos.size());
    for (const auto& memento : summary.mementos)
        dates.push_back(memento.memento_datetime);
    return dates;
}

bool record_less(const CitationRecord& a, const CitationRecord& b) {
    return std::tie(a.article_id, a.publication_date, a.raw_uri, a.corpus_tag) <
           std::tie(b.article_id, b.publication_date, b.raw_uri, b.corpus_tag);
}

}  // namespace

PipelineResult run_pipeline(const RunConfig& config, RunStage through, std::ostream* log) {
    PipelineResult out;
    auto say = [&](const std::string& line) {
        if (log)
            *log << line << '\n';
    };

    // --- ingest ---
    CorpusFormat format =
        config.format ? *config.format : corpus_format_for_path(config.input_path);
    out.load = load_citations(config.input_path, format);
    say("ingest: " + std::to_string(out.load.row_count) + " rows, " +
        std::to_string(out.load.records.size()) + " records, " +
        std::to_string(out.load.rejects.size()) + " rejected");

    // Exact duplicate rows are collapsed up front so that repeated citation
    // of one URI within one article cannot bias counts or earliest dates.
    std::vector<CitationRecord> unique = out.load.records;
    std::sort(unique.begin(), unique.end(), record_less);
    auto unique_end = std::unique(unique.begin(), unique.end());
    std::size_t duplicates = static_cast<std::size_t>(out.load.records.size()) -
                             static_cast<std::size_t>(unique_end - unique.begin());
    unique.erase(unique_end, unique.end());

    struct OriginalAgg {
        Platform platform{Platform::GitHub};
        std::size_t citations{0};
        Date earliest{};
        std::vector<CitationRecord> rows;
    };
    std::map<std::string, OriginalAgg> originals;  // keyed by normalized URI
    std::size_t non_ghp = 0;
    std::size_t not_repository = 0;
    for (const auto& record : unique) {
        auto parse = parse_ghp_uri(record.raw_uri);
        if (!parse.platform) {
            ++non_ghp;
            continue;
        }
        if (parse.status == GhpParse::Status::NotRepository)
            ++not_repository;
        auto [it, inserted] = originals.try_emplace(parse.normalized_original);
        auto& agg = it->second;
        if (inserted) {
            agg.platform = *parse.platform;
            agg.earliest = record.publication_date;
        } else if (record.publication_date < agg.earliest) {
            agg.earliest = record.publication_date;
        }
        ++agg.citations;
        agg.rows.push_back(record);
    }

    Canonicalizer canonicalizer = [](const std::string& raw) -> std::optional<CanonicalTarget> {
        auto parse = parse_ghp_uri(raw);
        if (!parse.is_repository())
            return std::nullopt;
        return CanonicalTarget{group_key(*parse.uri), parse.uri->canonical_repo_uri};
    };
    out.grouping = group_by_canonical(unique, canonicalizer);
    const auto& groups = out.grouping.groups;

    std::vector<Platform> repo_platform(groups.size(), Platform::GitHub);
    for (std::size_t i = 0; i < groups.size(); ++i) {
        auto parse = parse_ghp_uri(groups[i].canonical_uri);
        if (parse.platform)
            repo_platform[i] = *parse.platform;
    }

    out.inputs.input_rows = out.load.row_count;
    out.inputs.rejected_rows = out.load.rejects.size();
    out.inputs.duplicate_rows = duplicates;
    out.inputs.non_ghp_uris = non_ghp;
    out.inputs.not_repository = not_repository;
    out.inputs.registry = config.registry_path ? load_archive_registry(*config.registry_path)
                                               : default_archive_registry();

    std::vector<std::string> original_keys;
    original_keys.reserve(originals.size());
    for (const auto& [uri, agg] : originals) {
        original_keys.push_back(uri);
        UriAudit audit;
        audit.uri = uri;
        audit.platform = agg.platform;
        audit.citation_count = agg.citations;
        out.inputs.originals.push_back(std::move(audit));
    }
    for (std::size_t i = 0; i < groups.size(); ++i) {
        RepoAudit audit;
        audit.canonical_uri = groups[i].canonical_uri;
        audit.platform = repo_platform[i];
        audit.citation_count = groups[i].citations.size();
        out.inputs.repos.push_back(std::move(audit));
    }
    say("canonicalize: " + std::to_string(original_keys.size()) + " original URIs, " +
        std::to_string(groups.size()) + " repository URIs, " + std::to_string(non_ghp) +
        " non-GHP, " + std::to_string(not_repository) + " non-repository, " +
        std::to_string(duplicates) + " duplicates");

    if (through == RunStage::Ingest)
        return out;

    // --- audit: the three tests ---
    HttpOptions http_opts;
    http_opts.timeout_ms = config.timeout_ms;
    http_opts.retries = config.retries;
    http_opts.max_redirects = config.max_redirects;
    http_opts.per_host_interval_ms = config.per_host_interval_ms;
    http_opts.user_agent = config.user_agent;
    http_opts.offline = config.offline;
    HttpEngine engine(http_opts);
    auto cache = ObservationCache::open(config.cache_dir);

    // Test 1: liveness, over original and repository URIs alike.
    std::set<std::string> probe_set(original_keys.begin(), original_keys.end());
    for (const auto& group : groups)
        probe_set.insert(group.canonical_uri);
    std::vector<std::string> probe_targets(probe_set.begin(), probe_set.end());
    std::vector<LivenessResult> probe_results(probe_targets.size());

    ProbePolicy policy;
    policy.max_redirects = config.max_redirects;
    if (!config.live_base.empty()) {
        std::string base = config.live_base;
        while (!base.empty() && base.back() == '/')
            base.pop_back();
        policy.url_rewriter = [base](const std::string& uri) {
            auto split = split_url(uri, "https");
            if (!split)
                return uri;
            return base + "/" + split->host + split->request_target();
        };
    }

    parallel_for_n(probe_targets.size(), config.concurrency, [&](std::size_t i) {
        const std::string& uri = probe_targets[i];
        CacheKey key{"liveness", uri, ""};
        if (auto cached = cache->get(key)) {
            if (auto restored = liveness_from_json(uri, *cached)) {
                probe_results[i] = std::move(*restored);
                return;
            }
        }
        LivenessResult result = probe(uri, policy, engine);
        // Offline probes fail synthetically; those must not poison the cache.
        if (!config.offline)
            cache->put(key, liveness_to_json(result));
        probe_results[i] = std::move(result);
    });
    std::map<std::string, const LivenessResult*> liveness_of;
    for (std::size_t i = 0; i < probe_targets.size(); ++i)
        liveness_of[probe_targets[i]] = &probe_results[i];
    say("liveness: " + std::to_string(probe_targets.size()) + " URIs probed");

    // Test 2: Software Heritage, repository-level.
    SwhClient swh(config.swh_base, engine, cache, config.count_all_visits);
    SourceForgeResolver sf(config.sf_base, engine, cache);
    struct RepoSwhOutcome {
        TriState tri{TriState::Unknown};
        bool excluded{false};
        std::vector<Timestamp> dates;
    };
    std::vector<RepoSwhOutcome> swh_results(groups.size());
    parallel_for_n(groups.size(), config.concurrency, [&](std::size_t i) {
        RepoSwhOutcome outcome;
        if (repo_platform[i] == Platform::SourceForge) {
            auto project = sf.fetch_access_urls(sf_project_name(groups[i].canonical_uri));
            switch (swh_status_for_project(project, swh, &outcome.dates)) {
                case SfSwhStatus::Excluded:
                    outcome.tri = TriState::No;
                    outcome.excluded = true;
                    break;
                case SfSwhStatus::Archived: outcome.tri = TriState::Yes; break;
                case SfSwhStatus::NotArchived: outcome.tri = TriState::No; break;
                case SfSwhStatus::Unknown: outcome.tri = TriState::Unknown; break;
            }
        } else {
            auto record = swh.check_uri(groups[i].canonical_uri);
            if (record.lookup == LookupStatus::Unknown) {
                outcome.tri = TriState::Unknown;
            } else if (record.origin_found && record.snapshot_count >= 1) {
                outcome.tri = TriState::Yes;
                outcome.dates = counted_visit_dates(record.visits, config.count_all_visits);
            } else {
                outcome.tri = TriState::No;
            }
        }
        swh_results[i] = std::move(outcome);
    });
    say("software heritage: " + std::to_string(groups.size()) + " repositories checked");

    // Test 3: web archives, at both granularities. Repository-level lookups
    // reuse the original-level cache entries whenever the strings coincide.
    std::vector<TimeMapSummary> wa_original(original_keys.size());
    parallel_for_n(original_keys.size(), config.concurrency, [&](std::size_t i) {
        wa_original[i] =
            aggregate(original_keys[i], out.inputs.registry, engine, cache, config.memento_fanout);
    });
    std::vector<TimeMapSummary> wa_repo(groups.size());
    parallel_for_n(groups.size(), config.concurrency, [&](std::size_t i) {
        wa_repo[i] = aggregate(groups[i].canonical_uri, out.inputs.registry, engine, cache,
                               config.memento_fanout);
    });
    say("web archives: " + std::to_string(original_keys.size() + groups.size()) +
        " TimeMap aggregations");

    // --- merge outcomes ---
    for (std::size_t i = 0; i < original_keys.size(); ++i) {
        out.inputs.originals[i].liveness = liveness_of.at(original_keys[i])->outcome;
        out.inputs.originals[i].wa = wa_tristate(wa_original[i]);
        if (out.inputs.originals[i].wa == TriState::Unknown)
            out.had_unknowns = true;
        // Per-archive shares are accumulated at the original-URI granularity.
        for (const auto& [archive_id, count] : wa_original[i].per_archive_counts)
            out.inputs.memento_counts[archive_id] += count;
    }
    for (std::size_t i = 0; i < groups.size(); ++i) {
        auto& repo = out.inputs.repos[i];
        repo.liveness = liveness_of.at(groups[i].canonical_uri)->outcome;
        repo.swh = swh_results[i].tri;
        repo.sf_excluded = swh_results[i].excluded;
        repo.wa = wa_tristate(wa_repo[i]);
        if (repo.swh == TriState::Unknown || repo.wa == TriState::Unknown)
            out.had_unknowns = true;
    }
    out.requests_made = engine.requests_made();

    // --- analyze ---
    CaptureHistory swh_hist;
    CaptureHistory web_repo_hist;
    CaptureHistory web_original_hist;
    for (std::size_t i = 0; i < groups.size(); ++i) {
        if (!swh_results[i].dates.empty())
            swh_hist[groups[i].canonical_uri] = swh_results[i].dates;
        auto dates = memento_dates(wa_repo[i]);
        if (!dates.empty())
            web_repo_hist[groups[i].canonical_uri] = std::move(dates);
    }
    for (std::size_t i = 0; i < original_keys.size(); ++i) {
        auto dates = memento_dates(wa_original[i]);
        if (!dates.empty())
            web_original_hist[original_keys[i]] = std::move(dates);
    }

    out.inputs.swh_repo.deltas = capture_deltas(groups, swh_hist, ArchiveKind::Swh, config.swh_cutoff);
    out.inputs.swh_repo.gaps = stale_gaps(groups, swh_hist, ArchiveKind::Swh);
    out.inputs.web_repo.deltas = capture_deltas(groups, web_repo_hist, ArchiveKind::Web);
    out.inputs.web_repo.gaps = stale_gaps(groups, web_repo_hist, ArchiveKind::Web);

    std::vector<UriCitationGroup> original_groups;
    original_groups.reserve(originals.size());
    for (const auto& [uri, agg] : originals) {
        UriCitationGroup group;
        group.canonical_uri = uri;
        group.earliest_publication_date = agg.earliest;
        group.citations = agg.rows;
        original_groups.push_back(std::move(group));
    }
    out.inputs.web_original.deltas =
        capture_deltas(original_groups, web_original_hist, ArchiveKind::Web);
    out.inputs.web_original.gaps = stale_gaps(original_groups, web_original_hist, ArchiveKind::Web);

    if (through == RunStage::Audit)
        return out;

    // --- classify + report ---
    out.report = build_report(out.inputs);
    out.report_built = true;

    if (through == RunStage::Report) {
        export_report(out.report, config.output_dir);
        write_rejects(config.output_dir /
                          (format == CorpusFormat::Csv ? "rejects.csv" : "rejects.jsonl"),
                      out.load.rejects, format);
        say("report: written to " + config.output_dir.string());
    }
    return out;
}

}  // namespace ghpaudit
