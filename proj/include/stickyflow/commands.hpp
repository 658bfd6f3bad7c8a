#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "stickyflow/config.hpp"

namespace stickyflow {

struct RunOutcome {
  nlohmann::json summary;
  std::vector<std::string> files;  // relative to the output directory
};

// Runs one command, writing its artifacts and manifest.json into out_dir.
RunOutcome run(const RunConfig& config, const std::filesystem::path& out_dir);

// Process entry point: parses flags, runs, and maps failures to exit codes.
int cli_main(int argc, char** argv);

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitIo = 4;

}  // namespace stickyflow
