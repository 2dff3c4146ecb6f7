#include "scorewin/manifest.hpp"

#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>

#include "scorewin/errors.hpp"

namespace scorewin::cli {

std::string fnv1a64_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path + " for reading");
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  char chunk[4096];
  while (in.read(chunk, sizeof chunk) || in.gcount() > 0) {
    const std::streamsize got = in.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      hash ^= static_cast<unsigned char>(chunk[i]);
      hash *= 0x100000001b3ULL;
    }
    if (!in) break;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

void write_manifest(const RunManifest& manifest, const std::string& primary_output) {
  nlohmann::ordered_json doc;
  doc["tool"] = kToolName;
  doc["version"] = kToolVersion;
  doc["subcommand"] = manifest.subcommand;
  doc["base_seed"] = manifest.base_seed;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  for (const auto& [key, value] : manifest.parameters) params[key] = value;
  doc["parameters"] = params;
  nlohmann::ordered_json outputs = nlohmann::ordered_json::array();
  for (const std::string& path : manifest.outputs) {
    outputs.push_back({{"path", path}, {"fnv1a64", fnv1a64_file(path)}});
  }
  doc["outputs"] = outputs;

  const std::string manifest_path = primary_output + ".manifest.json";
  std::ofstream out(manifest_path, std::ios::binary);
  if (!out) throw IoError("cannot open " + manifest_path + " for writing");
  out << doc.dump(2) << "\n";
  if (!out) throw IoError("failed writing " + manifest_path);
}

}  // namespace scorewin::cli
