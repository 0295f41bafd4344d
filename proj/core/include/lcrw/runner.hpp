#pragma once

#include <string>
#include <vector>

#include "lcrw/config.hpp"
#include "lcrw/stats.hpp"

namespace lcrw {

inline constexpr const char* kVersion = "0.1.0";

struct RunArtifacts {
    std::vector<std::string> files;      // everything written, manifest last
    std::string summary_json;            // fits/verdicts per seed
    int exit_code = 0;
};

namespace runner {

// Executes the configured experiment: one JSONL series per scenery seed, a
// summary JSON with exponent fits and verdicts where a theoretical slope is
// defined, and a MANIFEST.json listing every artifact with a content hash.
// Identical config => byte-identical JSONL regardless of the thread budget.
RunArtifacts run(const RunConfig& config);

// JSONL encoding of one estimate record (shared by run and the CLI)
std::string jsonl_record(const EstimateRecord& r, std::uint64_t seed, const std::string& mode,
                         const std::vector<Coord>& target);

// theoretical log-log slope for the configured experiment, when one exists
std::optional<double> theoretical_slope(const RunConfig& config);

std::uint64_t fnv1a64(const std::string& bytes);

}  // namespace runner
}  // namespace lcrw
