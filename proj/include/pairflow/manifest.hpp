#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace pairflow {

struct ArtifactEntry {
  std::string path;  // relative to the manifest's directory
  std::uint64_t checksum = 0;
};

// Reproducibility record of one run: the exact configuration, seed, build
// and thread count, plus checksums of everything emitted. Together with the
// checkpoints this pins every number in the artifacts.
struct RunManifest {
  int format_version = 1;
  std::string created;
  std::uint64_t seed = 0;
  std::string build;
  int threads = 1;
  std::string config_text;
  std::vector<ArtifactEntry> artifacts;
};

void write_manifest(const std::string& path, const RunManifest& manifest);
RunManifest read_manifest(const std::string& path);

std::string build_identity();
std::string utc_timestamp();

}  // namespace pairflow
