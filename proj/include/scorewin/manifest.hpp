#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace scorewin::cli {

inline constexpr const char* kToolName = "scorewin";
inline constexpr const char* kToolVersion = "0.1.0";

// Reproducibility record written next to every CLI output: rerunning the
// tool with the recorded parameters reproduces the recorded digests.
struct RunManifest {
  std::string subcommand;
  std::map<std::string, std::string> parameters;  // flag -> rendered value
  std::uint64_t base_seed = 0;
  std::vector<std::string> outputs;  // paths; digests are computed on write
};

// FNV-1a 64-bit digest of the file bytes, as 16 lowercase hex digits.
std::string fnv1a64_file(const std::string& path);

// Writes <primary_output>.manifest.json. Content is a pure function of the
// manifest and the output bytes (no timestamps).
void write_manifest(const RunManifest& manifest, const std::string& primary_output);

}  // namespace scorewin::cli
