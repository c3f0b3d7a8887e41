#include "ghpaudit/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "json.hpp"

namespace ghpaudit {

namespace {

std::string trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return std::string(s);
}

// RFC 4180-ish line splitter; quoted fields may contain commas, quotes
// (doubled) and are unquoted here.
std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    return fields;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += "\"\"";
        else
            out.push_back(c);
    }
    out.push_back('"');
    return out;
}

constexpr const char* kFieldNames[4] = {"article_id", "publication_date", "raw_uri", "corpus_tag"};

struct RawRow {
    std::size_t line;
    std::string fields[4];
};

void validate_row(const RawRow& raw, LoadResult& out) {
    CitationRecord rec;
    rec.article_id = trim(raw.fields[0]);
    rec.raw_uri = trim(raw.fields[2]);
    rec.corpus_tag = trim(raw.fields[3]);

    auto reject = [&](std::string reason) {
        out.rejects.push_back({raw.line, raw.fields[0], raw.fields[1], raw.fields[2], raw.fields[3],
                               std::move(reason)});
    };

    auto date = parse_iso_date(raw.fields[1]);
    if (!date) {
        reject("invalid date");
        return;
    }
    rec.publication_date = *date;
    if (rec.raw_uri.empty()) {
        reject("empty URI");
        return;
    }
    out.records.push_back(std::move(rec));
}

LoadResult load_csv(std::istream& in) {
    LoadResult out;
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("corpus file is empty (header row required)");
    if (!line.empty() && line.back() == '\r')
        line.pop_back();

    auto header = split_csv_line(line);
    int index[4] = {-1, -1, -1, -1};
    for (std::size_t i = 0; i < header.size(); ++i) {
        std::string name = trim(header[i]);
        for (int f = 0; f < 4; ++f)
            if (name == kFieldNames[f])
                index[f] = static_cast<int>(i);
    }
    for (int f = 0; f < 4; ++f)
        if (index[f] < 0)
            throw std::runtime_error(std::string("corpus header is missing column \"") + kFieldNames[f] + "\"");

    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        ++out.row_count;
        auto fields = split_csv_line(line);
        RawRow raw{line_no, {}};
        bool short_row = false;
        for (int f = 0; f < 4; ++f) {
            if (static_cast<std::size_t>(index[f]) >= fields.size()) {
                short_row = true;
                continue;
            }
            raw.fields[f] = fields[static_cast<std::size_t>(index[f])];
        }
        if (short_row) {
            out.rejects.push_back({line_no, raw.fields[0], raw.fields[1], raw.fields[2], raw.fields[3],
                                   "missing fields"});
            continue;
        }
        validate_row(raw, out);
    }
    return out;
}

LoadResult load_jsonl(std::istream& in) {
    LoadResult out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string body = trim(line);
        if (body.empty())
            continue;
        ++out.row_count;
        nlohmann::json doc = nlohmann::json::parse(body, nullptr, false);
        if (doc.is_discarded() || !doc.is_object()) {
            out.rejects.push_back({line_no, "", "", "", "", "invalid json"});
            continue;
        }
        RawRow raw{line_no, {}};
        bool missing = false;
        for (int f = 0; f < 4; ++f) {
            if (!doc.contains(kFieldNames[f]) || !doc[kFieldNames[f]].is_string()) {
                missing = true;
                continue;
            }
            raw.fields[f] = doc[kFieldNames[f]].get<std::string>();
        }
        if (missing) {
            out.rejects.push_back({line_no, raw.fields[0], raw.fields[1], raw.fields[2], raw.fields[3],
                                   "missing fields"});
            continue;
        }
        validate_row(raw, out);
    }
    return out;
}

}  // namespace

CorpusFormat corpus_format_for_path(const std::filesystem::path& path) {
    auto ext = path.extension().string();
    if (ext == ".jsonl" || ext == ".ndjson" || ext == ".json")
        return CorpusFormat::JsonLines;
    return CorpusFormat::Csv;
}

LoadResult load_citations(const std::filesystem::path& path, CorpusFormat format) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot read corpus file: " + path.string());
    return format == CorpusFormat::Csv ? load_csv(in) : load_jsonl(in);
}

void write_rejects(const std::filesystem::path& path, const std::vector<RejectedRow>& rejects,
                   CorpusFormat format) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write rejects report: " + path.string());
    if (format == CorpusFormat::Csv) {
        out << "line,article_id,publication_date,raw_uri,corpus_tag,reason\n";
        for (const auto& r : rejects)
            out << r.line << ',' << csv_escape(r.article_id) << ',' << csv_escape(r.publication_date) << ','
                << csv_escape(r.raw_uri) << ',' << csv_escape(r.corpus_tag) << ',' << csv_escape(r.reason)
                << '\n';
    } else {
        for (const auto& r : rejects) {
            nlohmann::ordered_json doc;
            doc["line"] = r.line;
            doc["article_id"] = r.article_id;
            doc["publication_date"] = r.publication_date;
            doc["raw_uri"] = r.raw_uri;
            doc["corpus_tag"] = r.corpus_tag;
            doc["reason"] = r.reason;
            out << doc.dump() << '\n';
        }
    }
}

GroupingResult group_by_canonical(const std::vector<CitationRecord>& records,
                                  const Canonicalizer& canonicalizer) {
    GroupingResult out;

    // Identical rows must not bias earliest-date logic.
    std::set<std::tuple<std::string, std::string, std::string, std::string>> seen;

    struct Bucket {
        std::string display;
        std::vector<CitationRecord> citations;
    };
    std::map<std::string, Bucket> buckets;

    for (const auto& rec : records) {
        auto sig = std::make_tuple(rec.article_id, format_date(rec.publication_date), rec.raw_uri,
                                   rec.corpus_tag);
        if (!seen.insert(sig).second) {
            ++out.duplicate_count;
            continue;
        }
        auto target = canonicalizer(rec.raw_uri);
        if (!target) {
            ++out.skipped_count;
            continue;
        }
        auto& bucket = buckets[target->key];
        if (bucket.display.empty() || target->display < bucket.display)
            bucket.display = target->display;
        bucket.citations.push_back(rec);
    }

    out.groups.reserve(buckets.size());
    for (auto& [key, bucket] : buckets) {
        UriCitationGroup group;
        group.canonical_uri = std::move(bucket.display);
        group.citations = std::move(bucket.citations);
        std::sort(group.citations.begin(), group.citations.end(),
                  [](const CitationRecord& a, const CitationRecord& b) {
                      return std::tie(a.publication_date, a.article_id, a.raw_uri, a.corpus_tag) <
                             std::tie(b.publication_date, b.article_id, b.raw_uri, b.corpus_tag);
                  });
        group.earliest_publication_date = group.citations.front().publication_date;
        out.groups.push_back(std::move(group));
    }
    std::sort(out.groups.begin(), out.groups.end(),
              [](const UriCitationGroup& a, const UriCitationGroup& b) {
                  return a.canonical_uri < b.canonical_uri;
              });
    return out;
}

}  // namespace ghpaudit
