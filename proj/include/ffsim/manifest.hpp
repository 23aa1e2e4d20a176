#pragma once

#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ffsim/util.hpp"
#include "ffsim/version.hpp"

namespace ffsim {

/// Current UTC time as ISO-8601. Honors SOURCE_DATE_EPOCH so reruns can be
/// made bit-identical including their manifests.
inline std::string iso8601_utc_now() {
  std::time_t t = std::time(nullptr);
  if (const char* env = std::getenv("SOURCE_DATE_EPOCH")) {
    long long v;
    if (parse_int64(env, v)) t = static_cast<std::time_t>(v);
  }
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// What it takes to redo a run: the full config snapshot and seed(s), plus
/// the command line, tool version and output list for the record. Replaying
/// the embedded config reproduces every output byte for byte.
struct RunManifest {
  std::string created;
  std::vector<std::string> command;
  std::vector<std::uint64_t> seeds;
  std::string config_ini;
  std::vector<std::string> outputs;  // paths relative to the manifest
};

inline void write_manifest(std::ostream& out, const RunManifest& m) {
  nlohmann::ordered_json j;
  j["tool"] = "ffsim";
  j["version"] = kVersion;
  j["format_version"] = 1;
  j["created"] = m.created;
  j["command"] = m.command;
  j["seeds"] = m.seeds;
  j["config"] = m.config_ini;
  j["outputs"] = m.outputs;
  out << j.dump(2) << '\n';
}

inline void write_manifest(const std::string& path, const RunManifest& m) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_manifest(out, m);
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace ffsim
