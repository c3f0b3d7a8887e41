#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

#include "ghpaudit/corpus.hpp"
#include "ghpaudit/dates.hpp"
#include "ghpaudit/report.hpp"

namespace ghpaudit {

struct RunConfig {
    std::filesystem::path input_path;
    std::optional<CorpusFormat> format;  // deduced from the extension when unset
    std::filesystem::path cache_dir{"cache"};
    std::filesystem::path output_dir{"out"};
    std::optional<std::filesystem::path> registry_path;
    int concurrency{4};
    int per_host_interval_ms{0};
    int timeout_ms{30000};
    int retries{2};
    int max_redirects{10};
    int memento_fanout{4};
    Date swh_cutoff{make_date(2016, 7, 1)};
    bool offline{false};  // serve everything from the cache, never touch the network
    bool count_all_visits{false};
    std::string swh_base{"https://archive.softwareheritage.org"};
    std::string sf_base{"https://sourceforge.net"};
    std::string live_base;  // when set, liveness probes are rewritten under this base
    std::string user_agent{"ghpaudit/0.1"};
};

enum class RunStage { Ingest, Audit, Classify, Analyze, Report };

struct PipelineResult {
    LoadResult load;
    GroupingResult grouping;
    ReportInputs inputs;
    CoverageReport report;  // built for stages past Audit
    bool report_built{false};
    bool had_unknowns{false};
    std::size_t requests_made{0};
};

// Ingest -> audit (the three tests) -> classify -> analyze -> report.
// Every external observation is served from the cache when present, so a
// rerun over a complete cache performs zero network operations. `through`
// stops the pipeline early; Ingest touches no network at all. Only
// configuration and IO problems throw; per-URI failures degrade to Rotten
// or Unknown outcomes.
PipelineResult run_pipeline(const RunConfig& config, RunStage through = RunStage::Report,
                            std::ostream* log = nullptr);

}  // namespace ghpaudit
