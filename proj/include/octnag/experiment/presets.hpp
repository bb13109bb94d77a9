#pragma once
//
// Named experiment presets shipped as JSON files (one per preset, file stem =
// preset name). The directory is taken from $OCTNAG_PRESET_DIR when set,
// otherwise from the compile-time OCTNAG_PRESET_DIR.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "octnag/error.hpp"

namespace octnag::experiment {

inline std::filesystem::path preset_directory() {
  if (const char* env = std::getenv("OCTNAG_PRESET_DIR"); env && *env) return env;
#ifdef OCTNAG_PRESET_DIR
  return OCTNAG_PRESET_DIR;
#else
  return "presets";
#endif
}

struct PresetInfo {
  std::string name;
  std::string description;
  std::filesystem::path path;
};

inline nlohmann::json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot read " + path.string());
  const nlohmann::json doc = nlohmann::json::parse(in, nullptr, false);
  if (doc.is_discarded()) throw Error(ErrorKind::ConfigError, path.string() + " is not valid JSON");
  return doc;
}

// Presets sorted by name.
inline std::vector<PresetInfo> list_presets(const std::filesystem::path& dir = preset_directory()) {
  std::vector<PresetInfo> out;
  std::error_code ec;
  for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
    if (entry.path().extension() != ".json") continue;
    const auto doc = load_json_file(entry.path());
    out.push_back({entry.path().stem().string(), doc.value("description", std::string()), entry.path()});
  }
  if (ec) throw Error(ErrorKind::IoError, "cannot list presets in " + dir.string() + ": " + ec.message());
  std::sort(out.begin(), out.end(), [](const PresetInfo& a, const PresetInfo& b) { return a.name < b.name; });
  return out;
}

inline nlohmann::json load_preset(const std::string& name, const std::filesystem::path& dir = preset_directory()) {
  const auto path = dir / (name + ".json");
  if (!std::filesystem::exists(path)) throw Error(ErrorKind::ConfigError, "unknown preset '" + name + "'");
  return load_json_file(path);
}

}  // namespace octnag::experiment
