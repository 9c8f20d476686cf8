#include "pairflow/manifest.hpp"

#include <ctime>
#include <fstream>

#include <json.hpp>

#include "pairflow/errors.hpp"
#include "pairflow/hash.hpp"

#ifndef PAIRFLOW_BUILD_ID
#define PAIRFLOW_BUILD_ID "untracked"
#endif

namespace pairflow {

std::uint64_t fnv1a_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot checksum missing file: " + path);
  Fnv1a h;
  char buf[1 << 14];
  while (in.read(buf, sizeof buf) || in.gcount() > 0)
    h.update(buf, std::size_t(in.gcount()));
  return h.digest();
}

std::string build_identity() { return PAIRFLOW_BUILD_ID; }

std::string utc_timestamp() {
  std::time_t now = std::time(nullptr);
  char buf[32];
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

void write_manifest(const std::string& path, const RunManifest& manifest) {
  nlohmann::json j;
  j["format_version"] = manifest.format_version;
  j["created"] = manifest.created;
  j["seed"] = manifest.seed;
  j["build"] = manifest.build;
  j["threads"] = manifest.threads;
  j["config"] = manifest.config_text;
  nlohmann::json arts = nlohmann::json::array();
  for (const ArtifactEntry& a : manifest.artifacts) {
    char checksum[24];
    std::snprintf(checksum, sizeof checksum, "%016llx",
                  static_cast<unsigned long long>(a.checksum));
    arts.push_back({{"path", a.path}, {"fnv1a64", checksum}});
  }
  j["artifacts"] = arts;
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw ConfigError("cannot open manifest for writing: " + path);
  out << j.dump(2) << "\n";
}

RunManifest read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open manifest: " + path);
  nlohmann::json j;
  in >> j;
  RunManifest m;
  m.format_version = j.at("format_version").get<int>();
  m.created = j.at("created").get<std::string>();
  m.seed = j.at("seed").get<std::uint64_t>();
  m.build = j.at("build").get<std::string>();
  m.threads = j.at("threads").get<int>();
  m.config_text = j.at("config").get<std::string>();
  for (const auto& a : j.at("artifacts")) {
    ArtifactEntry e;
    e.path = a.at("path").get<std::string>();
    e.checksum = std::strtoull(a.at("fnv1a64").get<std::string>().c_str(),
                               nullptr, 16);
    m.artifacts.push_back(e);
  }
  return m;
}

}  // namespace pairflow
