#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hdrbench/codec.hpp"

namespace hdrbench {

struct ToolPaths {
  std::string encoder = "ffmpeg";
  std::vector<std::string> extra_args;  // appended before the output path

  friend bool operator==(const ToolPaths&, const ToolPaths&) = default;
};

struct RunConfig {
  static constexpr int kSchemaVersion = 1;

  int version = kSchemaVersion;
  std::vector<std::string> codecs;  // canonical ids
  std::vector<std::int64_t> cbr_kbps;
  std::vector<int> crf;
  int gop = 60;  // closed GOP length for CBR jobs
  std::map<std::string, ToolPaths> tools;  // keyed by canonical codec id
  std::string decoder = "ffmpeg";
  std::string probe_cmd;  // empty: payload arithmetic
  int workers = 1;
  double timeout_s = 0.0;  // 0: no timeout
  std::string peak = "nominal";
  double psnr_cap_db = 100.0;
  std::filesystem::path out_dir = "hdrbench_out";
  bool skip_missing = false;
  bool keep_yuv = false;
  bool strict_range = false;

  const ToolPaths& tool(Codec codec) const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

// Values given on the command line; each set field replaces the file value.
struct CliOverrides {
  std::optional<std::filesystem::path> out_dir;
  std::optional<int> workers;
  std::optional<std::vector<std::string>> codecs;
  std::optional<std::vector<std::int64_t>> bitrates_kbps;
  std::optional<std::vector<int>> crf;
  std::optional<std::string> peak;
  std::optional<std::string> probe_cmd;
  std::optional<bool> skip_missing;
  std::optional<bool> keep_yuv;
  std::optional<bool> strict_range;
};

inline const std::vector<std::int64_t> kDefaultCbrKbps = {6000, 12000, 18000, 24000};

int default_worker_count();

// Path may be empty: defaults plus overrides only. An empty file counts as {}.
RunConfig load_config(const std::filesystem::path& path, const CliOverrides& overrides = {});
RunConfig parse_config(const nlohmann::json& doc, const CliOverrides& overrides = {});
nlohmann::json to_json(const RunConfig& config);

}  // namespace hdrbench
