#pragma once

#include <filesystem>
#include <fstream>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>

#include "json.hpp"

#include "ghpaudit/dates.hpp"

namespace ghpaudit {

// One external observation: what was asked (kind + target + endpoint) and
// what came back. Keys are stable strings so re-runs hit the same records.
struct CacheKey {
    std::string kind;      // liveness | swh_origin | swh_visits | sf_project | timemap
    std::string target;    // URI, origin, or project name
    std::string endpoint;  // archive id for timemap, else empty

    std::string to_string() const;
};

// Append-only JSONL store, one record per observation. Records are
// immutable once written; a duplicate put is a no-op. A single writer
// serializes appends, so concurrent pipeline workers can share one cache.
class ObservationCache {
public:
    static std::shared_ptr<ObservationCache> open(const std::filesystem::path& dir);

    std::optional<nlohmann::json> get(const CacheKey& key) const;
    void put(const CacheKey& key, nlohmann::json payload);

    std::size_t size() const;
    const std::filesystem::path& file() const { return file_; }

private:
    ObservationCache() = default;

    mutable std::mutex mu_;
    std::filesystem::path file_;
    std::ofstream out_;
    std::unordered_map<std::string, nlohmann::json> entries_;
};

}  // namespace ghpaudit
