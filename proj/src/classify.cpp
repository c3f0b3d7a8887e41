#include "ghpaudit/classify.hpp"

namespace ghpaudit {

std::string_view to_string(TriState t) {
    switch (t) {
        case TriState::Yes: return "yes";
        case TriState::No: return "no";
        case TriState::Unknown: return "unknown";
    }
    return "?";
}

std::string_view to_string(ResourceStatus s) {
    switch (s) {
        case ResourceStatus::Replicated: return "replicated";
        case ResourceStatus::Vulnerable: return "vulnerable";
        case ResourceStatus::Recoverable: return "recoverable";
        case ResourceStatus::Unrecoverable: return "unrecoverable";
        case ResourceStatus::Indeterminate: return "indeterminate";
    }
    return "?";
}

std::string_view to_string(CoverageQuadrant q) {
    switch (q) {
        case CoverageQuadrant::Both: return "both";
        case CoverageQuadrant::SwhOnly: return "swh_only";
        case CoverageQuadrant::WebOnly: return "web_only";
        case CoverageQuadrant::Neither: return "neither";
        case CoverageQuadrant::Indeterminate: return "indeterminate";
    }
    return "?";
}

ResourceClassification classify(LivenessOutcome live, ArchiveCoverage coverage) {
    ResourceClassification out;

    const TriState swh = coverage.in_swh;
    const TriState wa = coverage.in_web_archives;

    if (swh != TriState::Unknown && wa != TriState::Unknown) {
        if (swh == TriState::Yes && wa == TriState::Yes)
            out.quadrant = CoverageQuadrant::Both;
        else if (swh == TriState::Yes)
            out.quadrant = CoverageQuadrant::SwhOnly;
        else if (wa == TriState::Yes)
            out.quadrant = CoverageQuadrant::WebOnly;
        else
            out.quadrant = CoverageQuadrant::Neither;
    } else {
        out.quadrant = CoverageQuadrant::Indeterminate;
    }

    // "Archived" can be forced even when the quadrant is not: one Yes is
    // enough under OR semantics.
    const bool archived_yes = swh == TriState::Yes || wa == TriState::Yes;
    const bool archived_no = swh == TriState::No && wa == TriState::No;

    if (archived_yes)
        out.status = live == LivenessOutcome::Active ? ResourceStatus::Replicated : ResourceStatus::Recoverable;
    else if (archived_no)
        out.status = live == LivenessOutcome::Active ? ResourceStatus::Vulnerable : ResourceStatus::Unrecoverable;
    else
        out.status = ResourceStatus::Indeterminate;

    return out;
}

}  // namespace ghpaudit
