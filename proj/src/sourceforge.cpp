#include "ghpaudit/sourceforge.hpp"

#include <algorithm>
#include <thread>

#include "json.hpp"

namespace ghpaudit {

namespace {

std::optional<VcsKind> vcs_from_name(const std::string& name) {
    if (name == "git")
        return VcsKind::Git;
    if (name == "svn")
        return VcsKind::Svn;
    if (name == "hg")
        return VcsKind::Hg;
    if (name == "cvs")
        return VcsKind::Cvs;
    if (name == "bzr")
        return VcsKind::Bzr;
    return std::nullopt;
}

// Clone URL for a code tool. The project API exposes tool mounts, not
// clone URLs, so derive the conventional code.sf.net form unless the
// response carries an explicit "clone_url".
std::string derive_clone_url(VcsKind kind, const std::string& project, const std::string& mount_point) {
    switch (kind) {
        case VcsKind::Git: return "https://git.code.sf.net/p/" + project + "/" + mount_point;
        case VcsKind::Svn: return "https://svn.code.sf.net/p/" + project + "/" + mount_point;
        case VcsKind::Hg: return "http://hg.code.sf.net/p/" + project + "/" + mount_point;
        case VcsKind::Bzr: return "http://bzr.code.sf.net/p/" + project + "/" + mount_point;
        case VcsKind::Cvs: return "rsync://a.cvs.sourceforge.net/cvsroot/" + project;
    }
    return {};
}

SfProject parse_project(const std::string& name, const nlohmann::json& doc) {
    SfProject project;
    project.name = name;
    project.lookup = LookupStatus::Found;
    if (!doc.is_object() || !doc.contains("tools") || !doc["tools"].is_array())
        return project;
    for (const auto& tool : doc["tools"]) {
        if (!tool.is_object())
            continue;
        auto kind = vcs_from_name(tool.value("name", ""));
        if (!kind)
            continue;
        std::string url = tool.value("clone_url", "");
        if (url.empty())
            url = derive_clone_url(*kind, name, tool.value("mount_point", "code"));
        if (!url.empty())
            project.access_urls.push_back({*kind, std::move(url)});
    }
    return project;
}

}  // namespace

std::string_view to_string(VcsKind k) {
    switch (k) {
        case VcsKind::Git: return "git";
        case VcsKind::Svn: return "svn";
        case VcsKind::Hg: return "hg";
        case VcsKind::Cvs: return "cvs";
        case VcsKind::Bzr: return "bzr";
    }
    return "?";
}

std::string_view to_string(SfSwhStatus s) {
    switch (s) {
        case SfSwhStatus::Excluded: return "excluded";
        case SfSwhStatus::Archived: return "archived";
        case SfSwhStatus::NotArchived: return "not_archived";
        case SfSwhStatus::Unknown: return "unknown";
    }
    return "?";
}

SourceForgeResolver::SourceForgeResolver(std::string base_url, HttpEngine& engine,
                                         std::shared_ptr<ObservationCache> cache)
    : base_url_(std::move(base_url)), engine_(engine), cache_(std::move(cache)) {
    while (!base_url_.empty() && base_url_.back() == '/')
        base_url_.pop_back();
}

SfProject SourceForgeResolver::fetch_access_urls(const std::string& project_name) {
    CacheKey key{"sf_project", project_name, ""};
    if (cache_) {
        if (auto cached = cache_->get(key)) {
            SfProject project = parse_project(project_name, cached->value("response", nlohmann::json()));
            project.found = cached->value("found", true);
            project.fetched_at = parse_iso_timestamp(cached->value("fetched_at", "")).value_or(Timestamp{});
            return project;
        }
    }

    HttpResponse response;
    for (int attempt = 0; attempt < 3; ++attempt) {
        if (attempt > 0)
            std::this_thread::sleep_for(
                std::chrono::milliseconds(engine_.options().backoff_base_ms << (attempt - 1)));
        response = engine_.get(base_url_ + "/rest/p/" + project_name);
        if (response.transport_ok() && response.status < 500)
            break;
    }

    SfProject project;
    project.name = project_name;
    project.fetched_at = now_utc();
    if (!response.transport_ok() || response.status >= 500) {
        project.lookup = LookupStatus::Unknown;
        return project;
    }
    if (response.status == 404) {
        project.found = false;  // flagged missing; treated like no access URLs
    } else if (response.status == 200) {
        nlohmann::json doc = nlohmann::json::parse(response.body, nullptr, false);
        if (doc.is_discarded()) {
            project.lookup = LookupStatus::Unknown;
            return project;
        }
        project = parse_project(project_name, doc);
        project.fetched_at = now_utc();
        if (cache_) {
            nlohmann::json payload;
            payload["found"] = true;
            payload["fetched_at"] = format_timestamp(project.fetched_at);
            payload["response"] = std::move(doc);
            cache_->put(key, payload);
        }
        return project;
    } else {
        project.lookup = LookupStatus::Unknown;
        return project;
    }

    if (cache_) {
        nlohmann::json payload;
        payload["found"] = false;
        payload["fetched_at"] = format_timestamp(project.fetched_at);
        payload["response"] = nlohmann::json::object();
        cache_->put(key, payload);
    }
    return project;
}

SfSwhStatus swh_status_for_project(const SfProject& project, SwhClient& swh,
                                   std::vector<Timestamp>* counted_dates) {
    if (project.lookup == LookupStatus::Unknown)
        return SfSwhStatus::Unknown;
    if (project.access_urls.empty())
        return SfSwhStatus::Excluded;

    bool any_archived = false;
    bool any_unknown = false;
    for (const auto& access : project.access_urls) {
        auto record = swh.check_uri(access.url);
        if (record.lookup == LookupStatus::Found && record.snapshot_count >= 1) {
            any_archived = true;
            if (counted_dates) {
                auto dates = counted_visit_dates(record.visits, swh.counts_all_visits());
                counted_dates->insert(counted_dates->end(), dates.begin(), dates.end());
            } else {
                break;  // any-match rule: one archived access URL settles it
            }
        } else if (record.lookup == LookupStatus::Unknown) {
            any_unknown = true;
        }
    }
    if (counted_dates)
        std::sort(counted_dates->begin(), counted_dates->end());
    if (any_archived)
        return SfSwhStatus::Archived;
    return any_unknown ? SfSwhStatus::Unknown : SfSwhStatus::NotArchived;
}

}  // namespace ghpaudit
