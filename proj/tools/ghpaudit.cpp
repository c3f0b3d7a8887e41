// Command-line front end: ingest/audit/classify/analyze/report stages plus
// a one-shot `run` and a `uri` debug printer.

#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "ghpaudit/ghp_uri.hpp"
#include "ghpaudit/pipeline.hpp"

namespace {

using namespace ghpaudit;

struct CommandOpts {
    RunConfig config;
    std::string format;
    std::string swh_cutoff;
    bool offline_flag{false};
    bool online_flag{false};
};

void add_common_options(CLI::App* cmd, CommandOpts& opts) {
    cmd->add_option("input", opts.config.input_path, "Corpus file (.csv or .jsonl)")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--format", opts.format, "Input format (deduced from the extension if unset)")
        ->check(CLI::IsMember({"csv", "jsonl"}));
    cmd->add_option("--cache-dir", opts.config.cache_dir, "Observation cache directory");
    cmd->add_option("--output-dir", opts.config.output_dir, "Report output directory");
    cmd->add_option("--registry", opts.config.registry_path,
                    "Archive registry file (id, name, TimeMap template per line)");
    cmd->add_option("--concurrency", opts.config.concurrency, "Worker threads per stage")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--per-host-interval-ms", opts.config.per_host_interval_ms,
                    "Minimum spacing between requests to one host")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--timeout-ms", opts.config.timeout_ms, "Per-request timeout")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--retries", opts.config.retries, "Transport retries per request")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--max-redirects", opts.config.max_redirects, "Redirect hops per probe")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--memento-fanout", opts.config.memento_fanout,
                    "Concurrent archive queries per TimeMap aggregation")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--swh-cutoff", opts.swh_cutoff,
                    "Earliest publication date for SWH capture deltas (YYYY-MM-DD)");
    cmd->add_flag("--count-all-visits", opts.config.count_all_visits,
                  "Count partial/failed Software Heritage visits too");
    cmd->add_option("--swh-base", opts.config.swh_base, "Software Heritage API base URL")
        ->envname("GHPAUDIT_SWH_BASE");
    cmd->add_option("--sf-base", opts.config.sf_base, "SourceForge API base URL")
        ->envname("GHPAUDIT_SF_BASE");
    cmd->add_option("--live-base", opts.config.live_base,
                    "Rewrite liveness probes under this base URL (fixtures)")
        ->envname("GHPAUDIT_LIVE_BASE");
    cmd->add_option("--user-agent", opts.config.user_agent, "User-Agent header");
}

void finalize(CommandOpts& opts, bool offline_default) {
    if (opts.format == "csv")
        opts.config.format = CorpusFormat::Csv;
    else if (opts.format == "jsonl")
        opts.config.format = CorpusFormat::JsonLines;
    if (!opts.swh_cutoff.empty()) {
        auto cutoff = parse_iso_date(opts.swh_cutoff);
        if (!cutoff)
            throw CLI::ValidationError("--swh-cutoff", "not a valid date: " + opts.swh_cutoff);
        opts.config.swh_cutoff = *cutoff;
    }
    opts.config.offline = offline_default;
    if (opts.offline_flag)
        opts.config.offline = true;
    if (opts.online_flag)
        opts.config.offline = false;
}

int finish(const PipelineResult& result) {
    return result.had_unknowns ? 2 : 0;
}

int cmd_uri(const std::string& raw) {
    auto parse = parse_ghp_uri(raw);
    std::cout << "input: " << raw << "\n";
    switch (parse.status) {
        case GhpParse::Status::Repository: std::cout << "status: repository\n"; break;
        case GhpParse::Status::NotGhp: std::cout << "status: not a GHP URI\n"; break;
        case GhpParse::Status::NotRepository: std::cout << "status: GHP, not a repository\n"; break;
    }
    if (parse.platform)
        std::cout << "platform: " << platform_name(*parse.platform) << "\n";
    if (!parse.normalized_original.empty())
        std::cout << "normalized: " << parse.normalized_original << "\n";
    if (parse.uri) {
        std::cout << "canonical: " << parse.uri->canonical_repo_uri << "\n";
        std::cout << "group key: " << group_key(*parse.uri) << "\n";
        std::cout << "deep link: " << (parse.uri->is_deep ? "yes" : "no") << "\n";
    }
    if (!parse.reason.empty())
        std::cout << "reason: " << parse.reason << "\n";
    return parse.is_repository() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Audits the liveness and archival coverage of Git Hosting Platform URIs "
                 "cited in a scholarly corpus"};
    app.require_subcommand(1);

    std::string raw_uri;
    auto* uri_cmd = app.add_subcommand("uri", "Parse and canonicalize a single URI");
    uri_cmd->add_option("uri", raw_uri, "URI to inspect")->required();

    CommandOpts ingest_opts;
    auto* ingest_cmd = app.add_subcommand("ingest", "Load and canonicalize the corpus (no network)");
    add_common_options(ingest_cmd, ingest_opts);

    CommandOpts audit_opts;
    auto* audit_cmd =
        app.add_subcommand("audit", "Run the three tests (liveness, Software Heritage, web archives)");
    add_common_options(audit_cmd, audit_opts);
    audit_cmd->add_flag("--offline", audit_opts.offline_flag, "Serve only from the cache");

    CommandOpts classify_opts;
    auto* classify_cmd =
        app.add_subcommand("classify", "Classify audited URIs (cache only unless --online)");
    add_common_options(classify_cmd, classify_opts);
    classify_cmd->add_flag("--online", classify_opts.online_flag, "Allow network requests");

    CommandOpts analyze_opts;
    auto* analyze_cmd =
        app.add_subcommand("analyze", "Temporal statistics (cache only unless --online)");
    add_common_options(analyze_cmd, analyze_opts);
    analyze_cmd->add_flag("--online", analyze_opts.online_flag, "Allow network requests");

    CommandOpts report_opts;
    auto* report_cmd =
        app.add_subcommand("report", "Write reports (cache only unless --online)");
    add_common_options(report_cmd, report_opts);
    report_cmd->add_flag("--online", report_opts.online_flag, "Allow network requests");

    CommandOpts run_opts;
    auto* run_cmd = app.add_subcommand("run", "All stages: ingest, audit, classify, analyze, report");
    add_common_options(run_cmd, run_opts);
    run_cmd->add_flag("--offline", run_opts.offline_flag, "Serve only from the cache");

    CLI11_PARSE(app, argc, argv);

    try {
        if (uri_cmd->parsed())
            return cmd_uri(raw_uri);

        if (ingest_cmd->parsed()) {
            finalize(ingest_opts, true);
            auto result = run_pipeline(ingest_opts.config, RunStage::Ingest, &std::cerr);
            for (const auto& reject : result.load.rejects)
                std::cout << "reject line " << reject.line << ": " << reject.reason << "\n";
            std::cout << "rows " << result.load.row_count << ", rejected "
                      << result.load.rejects.size() << ", duplicates "
                      << result.inputs.duplicate_rows << ", original URIs "
                      << result.inputs.originals.size() << ", repository URIs "
                      << result.grouping.groups.size() << ", non-GHP "
                      << result.inputs.non_ghp_uris << ", non-repository "
                      << result.inputs.not_repository << "\n";
            return 0;
        }

        if (audit_cmd->parsed()) {
            finalize(audit_opts, false);
            auto result = run_pipeline(audit_opts.config, RunStage::Audit, &std::cerr);
            std::cout << "audited " << result.inputs.originals.size() << " original URIs and "
                      << result.inputs.repos.size() << " repository URIs ("
                      << result.requests_made << " requests)\n";
            return finish(result);
        }

        if (classify_cmd->parsed()) {
            finalize(classify_opts, true);
            auto result = run_pipeline(classify_opts.config, RunStage::Classify, &std::cerr);
            const auto& statuses = result.report.overall.statuses;
            std::cout << "replicated " << statuses.replicated << "\nvulnerable "
                      << statuses.vulnerable << "\nrecoverable " << statuses.recoverable
                      << "\nunrecoverable " << statuses.unrecoverable << "\nindeterminate "
                      << statuses.indeterminate << "\n";
            return finish(result);
        }

        if (analyze_cmd->parsed()) {
            finalize(analyze_opts, true);
            auto result = run_pipeline(analyze_opts.config, RunStage::Analyze, &std::cerr);
            auto print_slice = [](const char* label, const TemporalSummary& slice) {
                std::cout << label << ": " << slice.delta_count << " capture deltas, "
                          << slice.gap_count << " stale gaps, " << slice.monthly.size()
                          << " months\n";
            };
            print_slice("swh repository", result.report.swh_repo);
            print_slice("web repository", result.report.web_repo);
            print_slice("web original", result.report.web_original);
            return finish(result);
        }

        CommandOpts* opts = report_cmd->parsed() ? &report_opts : &run_opts;
        finalize(*opts, report_cmd->parsed());
        auto result = run_pipeline(opts->config, RunStage::Report, &std::cerr);
        std::cout << summary_text(result.report);
        return finish(result);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
