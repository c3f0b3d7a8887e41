#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ghpaudit/dates.hpp"
#include "ghpaudit/http.hpp"

namespace ghpaudit {

// A URI is active iff the final response after redirects is 2XX; anything
// else, including transport failures, is rotten.
enum class LivenessOutcome { Active, Rotten };

std::string_view to_string(LivenessOutcome o);

struct RedirectHop {
    int status{0};
    std::string location;
};

struct LivenessResult {
    std::string uri;
    std::optional<int> final_status;
    std::vector<RedirectHop> redirect_chain;
    LivenessOutcome outcome{LivenessOutcome::Rotten};
    HttpErrorClass error_class{HttpErrorClass::None};
    Timestamp probed_at{};
};

struct ProbePolicy {
    int max_redirects{10};
    // Rewrites the fetched URL without changing the recorded URI; used to
    // point probes at a fixture server.
    std::function<std::string(const std::string&)> url_rewriter;
};

// Never throws on a bad URI: every failure mode is encoded in the result.
LivenessResult probe(const std::string& uri, const ProbePolicy& policy, HttpEngine& engine);

}  // namespace ghpaudit
