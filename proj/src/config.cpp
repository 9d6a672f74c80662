#include "hdrbench/config.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "hdrbench/error.hpp"

namespace hdrbench {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

template <typename T>
T field(const json& doc, const char* key, const T& fallback) {
  auto it = doc.find(key);
  if (it == doc.end()) return fallback;
  try {
    return it->get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("config.") + key + ": " + e.what());
  }
}

void validate(RunConfig& cfg) {
  if (cfg.codecs.empty()) throw Error(ErrorCode::InvalidValue, "at least one codec is required");
  std::set<std::string> seen;
  for (auto& name : cfg.codecs) {
    name = std::string(codec_id(parse_codec(name)));
    if (!seen.insert(name).second) throw Error(ErrorCode::InvalidValue, "codec '" + name + "' listed twice");
  }
  if (cfg.cbr_kbps.empty() && cfg.crf.empty()) {
    throw Error(ErrorCode::InvalidValue, "at least one CBR bitrate or CRF value is required");
  }
  std::set<std::int64_t> rates;
  for (auto kbps : cfg.cbr_kbps) {
    if (kbps <= 0) throw Error(ErrorCode::InvalidValue, "CBR bitrate must be positive, got " + std::to_string(kbps));
    if (!rates.insert(kbps).second) throw Error(ErrorCode::InvalidValue, "bitrate listed twice");
  }
  std::set<int> crfs;
  for (int v : cfg.crf) {
    for (const auto& name : cfg.codecs) {
      const auto range = crf_range(parse_codec(name));
      if (v < range.min || v > range.max) {
        throw Error(ErrorCode::InvalidValue, "CRF " + std::to_string(v) + " outside " + name + " range [" +
                                                 std::to_string(range.min) + "," + std::to_string(range.max) + "]");
      }
    }
    if (!crfs.insert(v).second) throw Error(ErrorCode::InvalidValue, "CRF listed twice");
  }
  if (cfg.gop <= 0) throw Error(ErrorCode::InvalidValue, "gop must be positive");
  if (cfg.workers < 1) throw Error(ErrorCode::InvalidValue, "workers must be >= 1");
  if (cfg.timeout_s < 0) throw Error(ErrorCode::InvalidValue, "timeout_s must be >= 0");
  if (cfg.peak == "nominal_1023") cfg.peak = "nominal";
  if (cfg.peak == "paper_1024") cfg.peak = "paper";
  if (cfg.peak != "nominal" && cfg.peak != "paper") {
    throw Error(ErrorCode::InvalidValue, "peak must be nominal or paper, got '" + cfg.peak + "'");
  }
  if (!(cfg.psnr_cap_db > 0)) throw Error(ErrorCode::InvalidValue, "psnr_cap_db must be positive");
  for (const auto& [name, paths] : cfg.tools) {
    parse_codec(name);
    if (paths.encoder.empty()) throw Error(ErrorCode::InvalidValue, "empty encoder path for " + name);
  }
  std::map<std::string, ToolPaths> canonical;
  for (auto& [name, paths] : cfg.tools) canonical[std::string(codec_id(parse_codec(name)))] = paths;
  cfg.tools = std::move(canonical);
}

}  // namespace

int default_worker_count() {
  // hardware_concurrency counts logical CPUs; halving approximates physical
  // cores / 2 on SMT machines.
  const unsigned logical = std::thread::hardware_concurrency();
  return std::max(1, static_cast<int>(logical / 2));
}

const ToolPaths& RunConfig::tool(Codec codec) const {
  static const ToolPaths kDefault{};
  auto it = tools.find(std::string(codec_id(codec)));
  return it == tools.end() ? kDefault : it->second;
}

RunConfig parse_config(const json& doc, const CliOverrides& overrides) {
  if (!doc.is_object()) throw Error(ErrorCode::ParseError, "config root must be an object");
  static const std::set<std::string> kKnown = {
      "version", "codecs",  "cbr_kbps", "crf",         "gop",     "tools",        "decoder",
      "probe_cmd", "workers", "timeout_s", "peak",     "psnr_cap_db", "out_dir", "skip_missing",
      "keep_yuv", "strict_range"};
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    if (!kKnown.count(it.key())) throw Error(ErrorCode::ParseError, "config: unknown field '" + it.key() + "'");
  }

  RunConfig cfg;
  cfg.version = field<int>(doc, "version", RunConfig::kSchemaVersion);
  if (cfg.version != RunConfig::kSchemaVersion) {
    throw Error(ErrorCode::InvalidValue, "unsupported config version " + std::to_string(cfg.version));
  }
  cfg.codecs = field<std::vector<std::string>>(doc, "codecs", {"h264", "h265", "vp9", "av1"});

  // Modes: when neither list is given anywhere, the four CBR rates apply.
  // Giving either list switches to explicit mode selection.
  std::optional<std::vector<std::int64_t>> cbr;
  std::optional<std::vector<int>> crf;
  if (doc.contains("cbr_kbps")) cbr = field<std::vector<std::int64_t>>(doc, "cbr_kbps", {});
  if (doc.contains("crf")) crf = field<std::vector<int>>(doc, "crf", {});
  if (overrides.bitrates_kbps) cbr = overrides.bitrates_kbps;
  if (overrides.crf) crf = overrides.crf;
  if (!cbr && !crf) cbr = kDefaultCbrKbps;
  cfg.cbr_kbps = cbr.value_or(std::vector<std::int64_t>{});
  cfg.crf = crf.value_or(std::vector<int>{});

  cfg.gop = field<int>(doc, "gop", 60);
  if (auto it = doc.find("tools"); it != doc.end()) {
    if (!it->is_object()) throw Error(ErrorCode::ParseError, "config.tools must be an object");
    for (auto t = it->begin(); t != it->end(); ++t) {
      if (!t->is_object()) throw Error(ErrorCode::ParseError, "config.tools." + t.key() + " must be an object");
      for (auto f = t->begin(); f != t->end(); ++f) {
        if (f.key() != "encoder" && f.key() != "extra_args") {
          throw Error(ErrorCode::ParseError, "config.tools." + t.key() + ": unknown field '" + f.key() + "'");
        }
      }
      ToolPaths paths;
      paths.encoder = field<std::string>(*t, "encoder", "ffmpeg");
      paths.extra_args = field<std::vector<std::string>>(*t, "extra_args", {});
      cfg.tools[t.key()] = paths;
    }
  }
  cfg.decoder = field<std::string>(doc, "decoder", "ffmpeg");
  cfg.probe_cmd = field<std::string>(doc, "probe_cmd", "");
  cfg.workers = field<int>(doc, "workers", default_worker_count());
  cfg.timeout_s = field<double>(doc, "timeout_s", 0.0);
  cfg.peak = field<std::string>(doc, "peak", "nominal");
  cfg.psnr_cap_db = field<double>(doc, "psnr_cap_db", 100.0);
  cfg.out_dir = field<std::string>(doc, "out_dir", "hdrbench_out");
  cfg.skip_missing = field<bool>(doc, "skip_missing", false);
  cfg.keep_yuv = field<bool>(doc, "keep_yuv", false);
  cfg.strict_range = field<bool>(doc, "strict_range", false);

  if (overrides.out_dir) cfg.out_dir = *overrides.out_dir;
  if (overrides.workers) cfg.workers = *overrides.workers;
  if (overrides.codecs) cfg.codecs = *overrides.codecs;
  if (overrides.peak) cfg.peak = *overrides.peak;
  if (overrides.probe_cmd) cfg.probe_cmd = *overrides.probe_cmd;
  if (overrides.skip_missing) cfg.skip_missing = *overrides.skip_missing;
  if (overrides.keep_yuv) cfg.keep_yuv = *overrides.keep_yuv;
  if (overrides.strict_range) cfg.strict_range = *overrides.strict_range;

  validate(cfg);
  return cfg;
}

RunConfig load_config(const fs::path& path, const CliOverrides& overrides) {
  json doc = json::object();
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open config " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();
    if (text.find_first_not_of(" \t\r\n") != std::string::npos) {
      try {
        doc = json::parse(text);
      } catch (const json::parse_error& e) {
        throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
      }
    }
  }
  return parse_config(doc, overrides);
}

json to_json(const RunConfig& cfg) {
  json tools = json::object();
  for (const auto& [name, paths] : cfg.tools) {
    tools[name] = {{"encoder", paths.encoder}, {"extra_args", paths.extra_args}};
  }
  return {
      {"version", cfg.version},       {"codecs", cfg.codecs},
      {"cbr_kbps", cfg.cbr_kbps},     {"crf", cfg.crf},
      {"gop", cfg.gop},               {"tools", tools},
      {"decoder", cfg.decoder},       {"probe_cmd", cfg.probe_cmd},
      {"workers", cfg.workers},       {"timeout_s", cfg.timeout_s},
      {"peak", cfg.peak},             {"psnr_cap_db", cfg.psnr_cap_db},
      {"out_dir", cfg.out_dir.string()}, {"skip_missing", cfg.skip_missing},
      {"keep_yuv", cfg.keep_yuv},     {"strict_range", cfg.strict_range},
  };
}

}  // namespace hdrbench
