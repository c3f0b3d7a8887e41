#include "ghpaudit/swh.hpp"

#include <algorithm>
#include <thread>

#include "json.hpp"

namespace ghpaudit {

namespace {

bool counted_status(const std::string& status, bool count_all) {
    return count_all || status == "full";
}

std::optional<SwhVisit> parse_visit(const nlohmann::json& doc) {
    if (!doc.is_object())
        return std::nullopt;
    SwhVisit visit;
    visit.visit_number = doc.value("visit", 0);
    auto date = parse_iso_timestamp(doc.value("date", ""));
    if (!date || visit.visit_number < 1)
        return std::nullopt;
    visit.date = *date;
    visit.status = doc.value("status", "");
    if (doc.contains("snapshot") && doc["snapshot"].is_string())
        visit.snapshot_id = doc["snapshot"].get<std::string>();
    return visit;
}

nlohmann::json visit_to_json(const SwhVisit& v) {
    nlohmann::json doc;
    doc["visit"] = v.visit_number;
    doc["date"] = format_timestamp(v.date);
    doc["status"] = v.status;
    if (v.snapshot_id)
        doc["snapshot"] = *v.snapshot_id;
    else
        doc["snapshot"] = nullptr;
    return doc;
}

// "<url>; rel=\"next\"" from an HTTP Link header.
std::string next_link(const std::string& link_header) {
    std::size_t pos = 0;
    while (pos < link_header.size()) {
        auto open = link_header.find('<', pos);
        if (open == std::string::npos)
            break;
        auto close = link_header.find('>', open);
        if (close == std::string::npos)
            break;
        auto params_end = link_header.find(',', close);
        std::string params = link_header.substr(close + 1, (params_end == std::string::npos
                                                                ? link_header.size()
                                                                : params_end) - close - 1);
        if (params.find("rel=\"next\"") != std::string::npos || params.find("rel=next") != std::string::npos)
            return link_header.substr(open + 1, close - open - 1);
        if (params_end == std::string::npos)
            break;
        pos = params_end + 1;
    }
    return {};
}

}  // namespace

std::string_view to_string(LookupStatus s) {
    switch (s) {
        case LookupStatus::Found: return "found";
        case LookupStatus::NotFound: return "not_found";
        case LookupStatus::Unknown: return "unknown";
    }
    return "?";
}

SwhSummary summarize_visits(std::vector<SwhVisit> visits, bool count_all) {
    std::sort(visits.begin(), visits.end(), [](const SwhVisit& a, const SwhVisit& b) {
        return a.date != b.date ? a.date < b.date : a.visit_number < b.visit_number;
    });
    SwhSummary out;
    for (const auto& visit : visits) {
        if (!counted_status(visit.status, count_all))
            continue;
        if (!out.first_snapshot_date)
            out.first_snapshot_date = visit.date;
        out.last_snapshot_date = visit.date;
        ++out.snapshot_count;
    }
    return out;
}

std::vector<Timestamp> counted_visit_dates(const std::vector<SwhVisit>& visits, bool count_all) {
    std::vector<Timestamp> dates;
    for (const auto& visit : visits)
        if (counted_status(visit.status, count_all))
            dates.push_back(visit.date);
    std::sort(dates.begin(), dates.end());
    return dates;
}

SwhClient::SwhClient(std::string base_url, HttpEngine& engine, std::shared_ptr<ObservationCache> cache,
                     bool count_all_visits)
    : base_url_(std::move(base_url)), engine_(engine), cache_(std::move(cache)),
      count_all_visits_(count_all_visits) {
    while (!base_url_.empty() && base_url_.back() == '/')
        base_url_.pop_back();
}

HttpResponse SwhClient::fetch(const std::string& url) {
    // 429 backoff lives in the engine; retry 5xx here before giving up.
    HttpResponse response;
    for (int attempt = 0; attempt < 3; ++attempt) {
        if (attempt > 0)
            std::this_thread::sleep_for(
                std::chrono::milliseconds(engine_.options().backoff_base_ms << (attempt - 1)));
        response = engine_.get(url);
        if (response.transport_ok() && response.status < 500)
            return response;
    }
    return response;
}

LookupStatus SwhClient::lookup_origin(const std::string& repo_uri) {
    auto response = fetch(base_url_ + "/api/1/origin/" + repo_uri + "/get/");
    if (!response.transport_ok() || response.status >= 500)
        return LookupStatus::Unknown;
    if (response.status == 200)
        return LookupStatus::Found;
    if (response.status == 404)
        return LookupStatus::NotFound;
    return LookupStatus::Unknown;
}

std::optional<std::vector<SwhVisit>> SwhClient::list_visits(const std::string& origin) {
    std::vector<SwhVisit> visits;
    std::string url = base_url_ + "/api/1/origin/" + origin + "/visits/";
    while (!url.empty()) {
        auto response = fetch(url);
        if (!response.transport_ok() || response.status != 200)
            return std::nullopt;
        nlohmann::json doc = nlohmann::json::parse(response.body, nullptr, false);
        if (doc.is_discarded() || !doc.is_array())
            return std::nullopt;
        for (const auto& entry : doc) {
            auto visit = parse_visit(entry);
            if (visit)
                visits.push_back(std::move(*visit));
        }
        url = next_link(response.header("Link"));
    }
    std::sort(visits.begin(), visits.end(), [](const SwhVisit& a, const SwhVisit& b) {
        return a.date != b.date ? a.date < b.date : a.visit_number < b.visit_number;
    });
    return visits;
}

SwhArchivalRecord SwhClient::check_uri(const std::string& repo_uri) {
    SwhArchivalRecord record;
    record.queried_uri = repo_uri;

    CacheKey origin_key{"swh_origin", repo_uri, ""};
    std::optional<nlohmann::json> cached_origin = cache_ ? cache_->get(origin_key) : std::nullopt;

    if (cached_origin) {
        record.lookup = cached_origin->value("status", "") == "found"     ? LookupStatus::Found
                        : cached_origin->value("status", "") == "not_found" ? LookupStatus::NotFound
                                                                            : LookupStatus::Unknown;
        record.matched_origin = cached_origin->value("matched_origin", "");
    } else {
        record.lookup = lookup_origin(repo_uri);
        record.matched_origin = repo_uri;
        // Clone-URL origins are commonly registered with a ".git" suffix.
        if (record.lookup == LookupStatus::NotFound && !repo_uri.ends_with(".git")) {
            auto variant = lookup_origin(repo_uri + ".git");
            if (variant == LookupStatus::Found) {
                record.lookup = LookupStatus::Found;
                record.matched_origin = repo_uri + ".git";
            } else if (variant == LookupStatus::Unknown) {
                record.lookup = LookupStatus::Unknown;
            }
        }
        if (cache_ && record.lookup != LookupStatus::Unknown) {
            nlohmann::json payload;
            payload["status"] = std::string(to_string(record.lookup));
            payload["matched_origin"] = record.lookup == LookupStatus::Found ? record.matched_origin : "";
            cache_->put(origin_key, payload);
        }
    }

    record.origin_found = record.lookup == LookupStatus::Found;
    if (!record.origin_found) {
        record.matched_origin.clear();
        return record;
    }

    CacheKey visits_key{"swh_visits", record.matched_origin, ""};
    std::optional<nlohmann::json> cached_visits = cache_ ? cache_->get(visits_key) : std::nullopt;
    if (cached_visits) {
        for (const auto& entry : cached_visits->value("visits", nlohmann::json::array())) {
            auto visit = parse_visit(entry);
            if (visit)
                record.visits.push_back(std::move(*visit));
        }
    } else {
        auto visits = list_visits(record.matched_origin);
        if (!visits) {
            record.lookup = LookupStatus::Unknown;
            return record;
        }
        record.visits = std::move(*visits);
        if (cache_) {
            nlohmann::json payload;
            auto arr = nlohmann::json::array();
            for (const auto& visit : record.visits)
                arr.push_back(visit_to_json(visit));
            payload["visits"] = std::move(arr);
            cache_->put(visits_key, payload);
        }
    }

    auto summary = summarize_visits(record.visits, count_all_visits_);
    record.first_snapshot_date = summary.first_snapshot_date;
    record.last_snapshot_date = summary.last_snapshot_date;
    record.snapshot_count = summary.snapshot_count;
    return record;
}

}  // namespace ghpaudit
