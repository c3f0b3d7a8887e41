#include "ghpaudit/memento.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <fstream>
#include <future>
#include <sstream>
#include <stdexcept>

namespace ghpaudit {

namespace {

std::string lowercase(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

// Splits on `sep` at depth zero: quotes and <> protect separators.
std::vector<std::string_view> split_protected(std::string_view text, char sep) {
    std::vector<std::string_view> parts;
    bool in_quote = false;
    bool in_angle = false;
    std::size_t start = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (in_quote) {
            if (c == '\\' && i + 1 < text.size())
                ++i;
            else if (c == '"')
                in_quote = false;
        } else if (in_angle) {
            if (c == '>')
                in_angle = false;
        } else if (c == '"') {
            in_quote = true;
        } else if (c == '<') {
            in_angle = true;
        } else if (c == sep) {
            parts.push_back(text.substr(start, i - start));
            start = i + 1;
        }
    }
    parts.push_back(text.substr(start));
    return parts;
}

std::string unquote(std::string_view v) {
    v = trim(v);
    if (v.size() >= 2 && v.front() == '"' && v.back() == '"') {
        v.remove_prefix(1);
        v.remove_suffix(1);
        std::string out;
        out.reserve(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (v[i] == '\\' && i + 1 < v.size())
                ++i;
            out.push_back(v[i]);
        }
        return out;
    }
    return std::string(v);
}

std::vector<ArchiveEndpoint> builtin_registry() {
    // MemGator-style defaults for the twelve archives.
    return {
        {"ia", "Internet Archive", "https://web.archive.org/web/timemap/link/{uri}"},
        {"bibalex", "Bibliotheca Alexandrina Web Archive", "https://web.archive.bibalex.org/web/timemap/link/{uri}"},
        {"archive.today", "Archive.today", "https://archive.ph/timemap/{uri}"},
        {"archive-it", "Archive-It", "https://wayback.archive-it.org/all/timemap/link/{uri}"},
        {"pt", "Portuguese Web Archive", "https://arquivo.pt/wayback/timemap/link/{uri}"},
        {"loc", "Library of Congress", "https://webarchive.loc.gov/all/timemap/link/{uri}"},
        {"is", "Icelandic Web Archive", "https://wayback.vefsafn.is/wayback/timemap/link/{uri}"},
        {"au", "Australian Web Archive", "https://web.archive.org.au/awa/timemap/link/{uri}"},
        {"uk", "UK Web Archive", "https://www.webarchive.org.uk/wayback/archive/timemap/link/{uri}"},
        {"perma", "Perma", "https://perma-archives.org/warc/timemap/link/{uri}"},
        {"stanford", "Stanford Web Archive", "https://swap.stanford.edu/timemap/link/{uri}"},
        {"banq", "BAnQ", "https://waext.banq.qc.ca/wayback/timemap/link/{uri}"},
    };
}

void validate_endpoint(const ArchiveEndpoint& endpoint) {
    auto first = endpoint.timemap_template.find("{uri}");
    if (endpoint.id.empty() || first == std::string::npos ||
        endpoint.timemap_template.find("{uri}", first + 1) != std::string::npos)
        throw std::runtime_error("archive endpoint \"" + endpoint.id +
                                 "\" needs a template with exactly one {uri} slot");
}

}  // namespace

const std::vector<ArchiveEndpoint>& default_archive_registry() {
    static const std::vector<ArchiveEndpoint> registry = builtin_registry();
    return registry;
}

std::vector<ArchiveEndpoint> load_archive_registry(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot read archive registry: " + path.string());
    std::vector<ArchiveEndpoint> registry;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        std::string_view view = trim(line);
        if (view.empty() || view.front() == '#')
            continue;
        auto tab1 = view.find('\t');
        auto tab2 = tab1 == std::string_view::npos ? std::string_view::npos : view.find('\t', tab1 + 1);
        if (tab2 == std::string_view::npos)
            throw std::runtime_error("malformed registry line (want id<TAB>name<TAB>template): " + line);
        ArchiveEndpoint endpoint{std::string(trim(view.substr(0, tab1))),
                                 std::string(trim(view.substr(tab1 + 1, tab2 - tab1 - 1))),
                                 std::string(trim(view.substr(tab2 + 1)))};
        validate_endpoint(endpoint);
        registry.push_back(std::move(endpoint));
    }
    if (registry.empty())
        throw std::runtime_error("archive registry is empty: " + path.string());
    return registry;
}

std::string expand_template(const ArchiveEndpoint& endpoint, const std::string& uri_r) {
    validate_endpoint(endpoint);
    std::string out = endpoint.timemap_template;
    out.replace(out.find("{uri}"), 5, uri_r);
    return out;
}

LinkParseResult parse_link_format(std::string_view body) {
    LinkParseResult out;
    std::string_view trimmed = trim(body);
    if (trimmed.empty())
        return out;  // no links, not a failure

    std::size_t parsed = 0;
    for (std::string_view raw_entry : split_protected(trimmed, ',')) {
        std::string_view entry = trim(raw_entry);
        if (entry.empty())
            continue;
        auto parts = split_protected(entry, ';');
        std::string_view target = trim(parts[0]);
        if (target.size() < 2 || target.front() != '<' || target.back() != '>') {
            out.warnings.push_back("entry without <uri>: " + std::string(entry.substr(0, 80)));
            continue;
        }
        LinkEntry link;
        link.uri = std::string(target.substr(1, target.size() - 2));
        bool bad = false;
        for (std::size_t i = 1; i < parts.size(); ++i) {
            std::string_view param = trim(parts[i]);
            if (param.empty())
                continue;
            auto eq = param.find('=');
            if (eq == std::string_view::npos) {
                bad = true;
                break;
            }
            std::string key = lowercase(trim(param.substr(0, eq)));
            std::string value = unquote(param.substr(eq + 1));
            if (key == "rel") {
                std::istringstream tokens{lowercase(value)};
                std::string token;
                while (tokens >> token)
                    link.rels.insert(token);
            } else {
                link.attributes.emplace(std::move(key), std::move(value));
            }
        }
        if (bad || link.uri.empty()) {
            out.warnings.push_back("malformed entry: " + std::string(entry.substr(0, 80)));
            continue;
        }
        out.entries.push_back(std::move(link));
        ++parsed;
    }
    if (parsed == 0 && !out.warnings.empty())
        out.failed = true;  // nothing usable in a non-empty body
    return out;
}

std::vector<Memento> extract_mementos(const LinkParseResult& links, const std::string& archive_id) {
    std::vector<Memento> out;
    std::set<std::pair<std::string, Timestamp>> seen;
    for (const auto& entry : links.entries) {
        // Rel-set membership, not string equality: "first last memento"
        // still names one memento.
        if (!entry.rels.contains("memento"))
            continue;
        auto it = entry.attributes.find("datetime");
        if (it == entry.attributes.end())
            continue;
        auto datetime = parse_rfc1123(it->second);
        if (!datetime)
            continue;
        if (!seen.insert({entry.uri, *datetime}).second)
            continue;
        out.push_back({archive_id, entry.uri, *datetime});
    }
    return out;
}

TimeMapSummary merge_timemaps(const std::string& uri_r,
                              const std::vector<std::pair<std::string, std::vector<Memento>>>& per_archive,
                              std::vector<ArchiveFailure> failures, std::size_t queried_archives) {
    TimeMapSummary out;
    out.uri_r = uri_r;
    out.queried_archives = queried_archives;
    out.failed_archives = std::move(failures);
    std::sort(out.failed_archives.begin(), out.failed_archives.end(),
              [](const ArchiveFailure& a, const ArchiveFailure& b) { return a.archive_id < b.archive_id; });

    for (const auto& [archive_id, mementos] : per_archive) {
        out.per_archive_counts[archive_id] += mementos.size();
        out.mementos.insert(out.mementos.end(), mementos.begin(), mementos.end());
    }
    std::sort(out.mementos.begin(), out.mementos.end(), [](const Memento& a, const Memento& b) {
        if (a.memento_datetime != b.memento_datetime)
            return a.memento_datetime < b.memento_datetime;
        if (a.archive_id != b.archive_id)
            return a.archive_id < b.archive_id;
        return a.uri_m < b.uri_m;
    });
    out.memento_count = out.mementos.size();
    if (!out.mementos.empty()) {
        out.first_memento = out.mementos.front().memento_datetime;
        out.last_memento = out.mementos.back().memento_datetime;
    }
    return out;
}

TimeMapSummary aggregate(const std::string& uri_r, const std::vector<ArchiveEndpoint>& registry,
                         HttpEngine& engine, std::shared_ptr<ObservationCache> cache, int fanout) {
    struct ArchiveResult {
        std::vector<Memento> mementos;
        std::optional<ArchiveFailure> failure;
    };

    auto query_one = [&](const ArchiveEndpoint& endpoint) -> ArchiveResult {
        ArchiveResult result;
        CacheKey key{"timemap", uri_r, endpoint.id};
        std::string body;
        int status = 0;

        auto cached = cache ? cache->get(key) : std::nullopt;
        if (cached) {
            status = cached->value("status", 0);
            body = cached->value("body", "");
        } else {
            auto response = engine.get(expand_template(endpoint, uri_r));
            if (!response.transport_ok()) {
                result.failure = ArchiveFailure{endpoint.id, std::string(to_string(response.error))};
                return result;
            }
            status = response.status;
            body = std::move(response.body);
            // 404 means "no mementos here" for most archives; only real
            // errors are failures (and stay uncached so retries can heal).
            if (status >= 400 && status != 404) {
                result.failure = ArchiveFailure{endpoint.id, "http_" + std::to_string(status)};
                return result;
            }
            if (cache) {
                nlohmann::json payload;
                payload["status"] = status;
                payload["body"] = body;
                cache->put(key, payload);
            }
        }

        if (status == 404 || body.empty())
            return result;
        auto links = parse_link_format(body);
        if (links.failed) {
            result.failure = ArchiveFailure{endpoint.id, "parse"};
            return result;
        }
        result.mementos = extract_mementos(links, endpoint.id);
        return result;
    };

    std::vector<ArchiveResult> results(registry.size());
    if (fanout <= 1 || registry.size() <= 1) {
        for (std::size_t i = 0; i < registry.size(); ++i)
            results[i] = query_one(registry[i]);
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (std::size_t i = next.fetch_add(1); i < registry.size(); i = next.fetch_add(1))
                results[i] = query_one(registry[i]);
        };
        std::vector<std::future<void>> futures;
        std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(fanout), registry.size());
        futures.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w)
            futures.push_back(std::async(std::launch::async, worker));
        for (auto& f : futures)
            f.get();
    }

    std::vector<std::pair<std::string, std::vector<Memento>>> per_archive;
    std::vector<ArchiveFailure> failures;
    for (std::size_t i = 0; i < registry.size(); ++i) {
        if (results[i].failure)
            failures.push_back(*results[i].failure);
        else
            per_archive.emplace_back(registry[i].id, std::move(results[i].mementos));
    }
    return merge_timemaps(uri_r, per_archive, std::move(failures), registry.size());
}

}  // namespace ghpaudit
