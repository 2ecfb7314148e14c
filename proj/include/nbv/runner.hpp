#pragma once
#include <filesystem>
#include <optional>
#include <string>

#include "nbv/config.hpp"

namespace nbv {

inline constexpr const char* kArtifactVersion = "0.1.0";

struct RunOutcome {
    int exit_code = 0; // 0 ok, 2 validation error, 3 solver failure
    std::string status;
    std::filesystem::path manifest_path;
};

// Executes the requested commands in order audit -> solve -> certify ->
// continuation, persists outputs under cfg.output_dir and writes
// manifest.json last (atomically). Partial results of a failed run are kept
// and the manifest carries status "failed".
RunOutcome run(const RunConfig& cfg);

} // namespace nbv
