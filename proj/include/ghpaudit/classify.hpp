#pragma once

#include <string_view>

#include "ghpaudit/liveness.hpp"

namespace ghpaudit {

enum class TriState { Yes, No, Unknown };

std::string_view to_string(TriState t);

// Archive coverage of one repository-level URI. Unknown only propagates
// from Unknown client outcomes (outages), never from plain absence.
struct ArchiveCoverage {
    TriState in_swh{TriState::Unknown};
    TriState in_web_archives{TriState::Unknown};
};

enum class ResourceStatus { Replicated, Vulnerable, Recoverable, Unrecoverable, Indeterminate };
enum class CoverageQuadrant { Both, SwhOnly, WebOnly, Neither, Indeterminate };

std::string_view to_string(ResourceStatus s);
std::string_view to_string(CoverageQuadrant q);

struct ResourceClassification {
    ResourceStatus status{ResourceStatus::Indeterminate};
    CoverageQuadrant quadrant{CoverageQuadrant::Indeterminate};

    friend bool operator==(const ResourceClassification&, const ResourceClassification&) = default;
};

// Total over the 2x3x3 input space:
//   vulnerable    = live and archived nowhere
//   replicated    = live and archived somewhere
//   unrecoverable = rotten and archived nowhere
//   recoverable   = rotten and archived somewhere
// "Archived" means Software Heritage OR web archives. Unknown coverage that
// leaves the outcome unforced yields Indeterminate.
ResourceClassification classify(LivenessOutcome live, ArchiveCoverage coverage);

}  // namespace ghpaudit
