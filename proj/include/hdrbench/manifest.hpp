#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hdrbench/yuv_io.hpp"

namespace hdrbench {

struct ManifestEntry {
  std::string sequence_id;
  std::string abbreviation;
  std::string genre;
  std::filesystem::path yuv_path;  // absolute after load
  VideoSpec spec;
  std::optional<std::string> sha256;

  friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

struct Manifest {
  static constexpr int kSchemaVersion = 1;

  int version = kSchemaVersion;
  std::string dataset_name;
  std::vector<ManifestEntry> entries;

  const ManifestEntry* find(const std::string& sequence_id) const;

  friend bool operator==(const Manifest&, const Manifest&) = default;
};

struct ManifestLoadOptions {
  // Accept entries whose yuv_path does not exist yet.
  bool defer_missing_files = false;
};

Manifest load_manifest(const std::filesystem::path& path, ManifestLoadOptions options = {});
Manifest parse_manifest(const nlohmann::json& doc, const std::filesystem::path& base_dir,
                        ManifestLoadOptions options = {});
nlohmann::json to_json(const Manifest& manifest);
void save_manifest(const Manifest& manifest, const std::filesystem::path& path);

nlohmann::json spec_to_json(const VideoSpec& spec);
VideoSpec spec_from_json(const nlohmann::json& j, const std::string& where);

// Eighteen-entry skeleton of the public UHD HDR gaming set (9 games x 2 parts)
// with placeholder file names relative to the manifest.
Manifest gaming_hdr_skeleton();

}  // namespace hdrbench
