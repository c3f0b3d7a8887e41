#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ghpaudit/dates.hpp"

namespace ghpaudit {

// One (article, publication date, URI) citation from a corpus file.
struct CitationRecord {
    std::string article_id;
    Date publication_date{};
    std::string raw_uri;     // trimmed
    std::string corpus_tag;

    friend bool operator==(const CitationRecord&, const CitationRecord&) = default;
};

struct RejectedRow {
    std::size_t line{0};  // physical line number in the input file
    std::string article_id;
    std::string publication_date;
    std::string raw_uri;
    std::string corpus_tag;
    std::string reason;
};

enum class CorpusFormat { Csv, JsonLines };

// Picks format from the file extension (.csv vs .jsonl/.ndjson/.json).
CorpusFormat corpus_format_for_path(const std::filesystem::path& path);

struct LoadResult {
    std::vector<CitationRecord> records;
    std::vector<RejectedRow> rejects;
    std::size_t row_count{0};  // data rows seen (header excluded)
};

// Loads citation rows. Ill-formed rows land in `rejects` with a reason;
// only an unreadable or structurally unusable file throws.
LoadResult load_citations(const std::filesystem::path& path, CorpusFormat format);

// Writes the rejects report in the same format as the input, with an
// extra "reason" column/field.
void write_rejects(const std::filesystem::path& path, const std::vector<RejectedRow>& rejects,
                   CorpusFormat format);

// All citations of one repository-level URI.
struct UriCitationGroup {
    std::string canonical_uri;  // lexicographically least canonical form among members
    Date earliest_publication_date{};
    std::vector<CitationRecord> citations;
};

struct CanonicalTarget {
    std::string key;      // comparison key (may be case-folded)
    std::string display;  // canonical URI as shown in reports
};

using Canonicalizer = std::function<std::optional<CanonicalTarget>(const std::string& raw_uri)>;

struct GroupingResult {
    std::vector<UriCitationGroup> groups;  // sorted by canonical_uri
    std::size_t skipped_count{0};          // citations the canonicalizer declined
    std::size_t duplicate_count{0};        // identical rows collapsed before grouping
};

// One group per distinct canonical key; earliest_publication_date is the
// group minimum. Order-independent: permuting the input yields the same
// groups.
GroupingResult group_by_canonical(const std::vector<CitationRecord>& records,
                                  const Canonicalizer& canonicalizer);

}  // namespace ghpaudit
