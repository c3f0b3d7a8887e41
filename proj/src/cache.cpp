#include "ghpaudit/cache.hpp"

#include <stdexcept>

namespace ghpaudit {

std::string CacheKey::to_string() const {
    // '\t' cannot appear in URIs or kinds, so the join is unambiguous.
    return kind + "\t" + target + "\t" + endpoint;
}

std::shared_ptr<ObservationCache> ObservationCache::open(const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    auto cache = std::shared_ptr<ObservationCache>(new ObservationCache());
    cache->file_ = dir / "observations.jsonl";

    std::ifstream in(cache->file_);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        nlohmann::json doc = nlohmann::json::parse(line, nullptr, false);
        if (doc.is_discarded() || !doc.is_object() || !doc.contains("key"))
            continue;  // torn tail from an interrupted run
        const auto& key = doc["key"];
        CacheKey k{key.value("kind", ""), key.value("target", ""), key.value("endpoint", "")};
        cache->entries_.emplace(k.to_string(), doc.value("payload", nlohmann::json::object()));
    }
    in.close();

    // A torn tail also means a missing final newline; start appends on a
    // fresh line or the next record would be glued onto the fragment.
    bool needs_newline = false;
    std::error_code ec;
    auto bytes = std::filesystem::file_size(cache->file_, ec);
    if (!ec && bytes > 0) {
        std::ifstream tail(cache->file_, std::ios::binary);
        tail.seekg(static_cast<std::streamoff>(bytes) - 1);
        needs_newline = tail.get() != '\n';
    }

    cache->out_.open(cache->file_, std::ios::app | std::ios::binary);
    if (!cache->out_)
        throw std::runtime_error("cannot open cache file for append: " + cache->file_.string());
    if (needs_newline) {
        cache->out_ << '\n';
        cache->out_.flush();
    }
    return cache;
}

std::optional<nlohmann::json> ObservationCache::get(const CacheKey& key) const {
    std::lock_guard lock(mu_);
    auto it = entries_.find(key.to_string());
    if (it == entries_.end())
        return std::nullopt;
    return it->second;
}

std::size_t ObservationCache::size() const {
    std::lock_guard lock(mu_);
    return entries_.size();
}

void ObservationCache::put(const CacheKey& key, nlohmann::json payload) {
    std::lock_guard lock(mu_);
    auto [it, inserted] = entries_.emplace(key.to_string(), std::move(payload));
    if (!inserted)
        return;
    nlohmann::ordered_json record;
    record["key"] = {{"kind", key.kind}, {"target", key.target}, {"endpoint", key.endpoint}};
    record["fetched_at"] = format_timestamp(now_utc());
    record["payload"] = it->second;
    out_ << record.dump() << '\n';
    out_.flush();
}

}  // namespace ghpaudit
