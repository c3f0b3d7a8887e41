#include "ghpaudit/liveness.hpp"

#include "ghpaudit/url.hpp"

namespace ghpaudit {

std::string_view to_string(LivenessOutcome o) {
    return o == LivenessOutcome::Active ? "active" : "rotten";
}

LivenessResult probe(const std::string& uri, const ProbePolicy& policy, HttpEngine& engine) {
    LivenessResult result;
    result.uri = uri;
    result.probed_at = now_utc();

    std::string current = policy.url_rewriter ? policy.url_rewriter(uri) : uri;

    while (true) {
        auto split = split_url(current, "https");
        if (!split) {
            result.outcome = LivenessOutcome::Rotten;
            result.error_class = HttpErrorClass::Connection;
            return result;
        }
        auto response = engine.request(split->str());
        if (!response.transport_ok()) {
            result.outcome = LivenessOutcome::Rotten;
            result.error_class = response.error;
            return result;
        }
        if (response.status >= 300 && response.status <= 399) {
            std::string location = response.header("Location");
            if (location.empty()) {
                // A 3xx with nowhere to go is the final status.
                result.final_status = response.status;
                result.outcome = LivenessOutcome::Rotten;
                return result;
            }
            if (result.redirect_chain.size() >= static_cast<std::size_t>(policy.max_redirects)) {
                result.outcome = LivenessOutcome::Rotten;
                result.error_class = HttpErrorClass::TooManyRedirects;
                return result;
            }
            result.redirect_chain.push_back({response.status, location});
            current = resolve_reference(*split, location);
            continue;
        }
        result.final_status = response.status;
        result.outcome = (response.status >= 200 && response.status <= 299) ? LivenessOutcome::Active
                                                                            : LivenessOutcome::Rotten;
        return result;
    }
}

}  // namespace ghpaudit
