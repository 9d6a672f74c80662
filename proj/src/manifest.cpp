#include "hdrbench/manifest.hpp"

#include <fstream>
#include <set>

#include "hdrbench/error.hpp"

namespace hdrbench {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void reject_unknown(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* name : allowed) known = known || it.key() == name;
    if (!known) throw Error(ErrorCode::ParseError, where + ": unknown field '" + it.key() + "'");
  }
}

const json& require(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw Error(ErrorCode::MissingField, where + ": missing '" + key + "'");
  return *it;
}

template <typename T>
T get_as(const json& value, const std::string& where) {
  try {
    return value.get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, where + ": " + e.what());
  }
}

}  // namespace

const ManifestEntry* Manifest::find(const std::string& sequence_id) const {
  for (const auto& e : entries) {
    if (e.sequence_id == sequence_id) return &e;
  }
  return nullptr;
}

json spec_to_json(const VideoSpec& spec) {
  json j = {
      {"width", spec.width},
      {"height", spec.height},
      {"bit_depth", spec.bit_depth},
      {"chroma", "420"},
      {"frame_rate", spec.frame_rate.to_string()},
      {"color",
       {{"primaries", spec.color.primaries},
        {"transfer", spec.color.transfer},
        {"matrix", spec.color.matrix},
        {"range", spec.color.range}}},
  };
  if (spec.frame_count) j["frame_count"] = *spec.frame_count;
  return j;
}

VideoSpec spec_from_json(const json& j, const std::string& where) {
  if (!j.is_object()) throw Error(ErrorCode::ParseError, where + ": spec must be an object");
  reject_unknown(j, {"width", "height", "bit_depth", "chroma", "frame_rate", "frame_count", "color"}, where);
  VideoSpec spec;
  spec.width = get_as<int>(require(j, "width", where), where + ".width");
  spec.height = get_as<int>(require(j, "height", where), where + ".height");
  spec.bit_depth = get_as<int>(require(j, "bit_depth", where), where + ".bit_depth");
  if (auto it = j.find("chroma"); it != j.end()) {
    const auto chroma = get_as<std::string>(*it, where + ".chroma");
    if (chroma != "420") throw Error(ErrorCode::InvalidValue, where + ": only chroma '420' is supported");
  }
  const json& rate = require(j, "frame_rate", where);
  if (rate.is_number_integer()) {
    spec.frame_rate = {rate.get<std::int64_t>(), 1};
  } else {
    spec.frame_rate = Rational::parse(get_as<std::string>(rate, where + ".frame_rate"));
  }
  if (auto it = j.find("frame_count"); it != j.end()) {
    spec.frame_count = get_as<std::int64_t>(*it, where + ".frame_count");
  }
  if (auto it = j.find("color"); it != j.end()) {
    const std::string cw = where + ".color";
    if (!it->is_object()) throw Error(ErrorCode::ParseError, cw + ": must be an object");
    reject_unknown(*it, {"primaries", "transfer", "matrix", "range"}, cw);
    spec.color.primaries = get_as<int>(require(*it, "primaries", cw), cw);
    spec.color.transfer = get_as<int>(require(*it, "transfer", cw), cw);
    spec.color.matrix = get_as<int>(require(*it, "matrix", cw), cw);
    spec.color.range = get_as<int>(require(*it, "range", cw), cw);
  }
  try {
    spec.validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::InvalidValue, where + ": " + e.what());
  }
  return spec;
}

Manifest parse_manifest(const json& doc, const fs::path& base_dir, ManifestLoadOptions options) {
  if (!doc.is_object()) throw Error(ErrorCode::ParseError, "manifest root must be an object");
  reject_unknown(doc, {"version", "dataset_name", "sequences"}, "manifest");
  Manifest m;
  m.version = get_as<int>(require(doc, "version", "manifest"), "manifest.version");
  if (m.version != Manifest::kSchemaVersion) {
    throw Error(ErrorCode::InvalidValue, "unsupported manifest version " + std::to_string(m.version));
  }
  m.dataset_name = get_as<std::string>(require(doc, "dataset_name", "manifest"), "manifest.dataset_name");
  const json& seqs = require(doc, "sequences", "manifest");
  if (!seqs.is_array()) throw Error(ErrorCode::ParseError, "manifest.sequences must be an array");

  std::set<std::string> seen;
  for (std::size_t i = 0; i < seqs.size(); ++i) {
    const json& s = seqs[i];
    std::string where = "manifest.sequences[" + std::to_string(i) + "]";
    if (!s.is_object()) throw Error(ErrorCode::ParseError, where + " must be an object");
    reject_unknown(s, {"sequence_id", "abbreviation", "genre", "yuv_path", "spec", "sha256"}, where);
    ManifestEntry e;
    e.sequence_id = get_as<std::string>(require(s, "sequence_id", where), where + ".sequence_id");
    where += " (" + e.sequence_id + ")";
    if (e.sequence_id.empty()) throw Error(ErrorCode::InvalidValue, where + ": empty sequence_id");
    if (!seen.insert(e.sequence_id).second) {
      throw Error(ErrorCode::DuplicateId, "sequence_id '" + e.sequence_id + "' appears more than once");
    }
    e.abbreviation = get_as<std::string>(require(s, "abbreviation", where), where + ".abbreviation");
    e.genre = get_as<std::string>(require(s, "genre", where), where + ".genre");
    fs::path p = get_as<std::string>(require(s, "yuv_path", where), where + ".yuv_path");
    e.yuv_path = p.is_absolute() ? p.lexically_normal() : (base_dir / p).lexically_normal();
    e.spec = spec_from_json(require(s, "spec", where), where + ".spec");
    if (auto it = s.find("sha256"); it != s.end()) e.sha256 = get_as<std::string>(*it, where + ".sha256");
    if (!options.defer_missing_files && !fs::exists(e.yuv_path)) {
      throw Error(ErrorCode::MissingFile, where + ": " + e.yuv_path.string() + " does not exist");
    }
    m.entries.push_back(std::move(e));
  }
  return m;
}

Manifest load_manifest(const fs::path& path, ManifestLoadOptions options) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open manifest " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
  return parse_manifest(doc, fs::absolute(path).parent_path(), options);
}

json to_json(const Manifest& manifest) {
  json seqs = json::array();
  for (const auto& e : manifest.entries) {
    json s = {
        {"sequence_id", e.sequence_id},
        {"abbreviation", e.abbreviation},
        {"genre", e.genre},
        {"yuv_path", e.yuv_path.string()},
        {"spec", spec_to_json(e.spec)},
    };
    if (e.sha256) s["sha256"] = *e.sha256;
    seqs.push_back(std::move(s));
  }
  return {{"version", manifest.version}, {"dataset_name", manifest.dataset_name}, {"sequences", seqs}};
}

void save_manifest(const Manifest& manifest, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << to_json(manifest).dump(2) << '\n';
}

Manifest gaming_hdr_skeleton() {
  struct Game {
    const char* abbreviation;
    const char* sequence_prefix;
    const char* genre;
  };
  static constexpr Game kGames[] = {
      {"COD", "COD", "First Person Shooter"},
      {"CD", "CD", "Action-adventure"},
      {"DY", "DY", "Open world, Action-Adventure"},
      {"FH", "FH", "Racing"},
      {"GoW", "GoW", "Third-person shooter"},
      {"PUBG", "PUBG", "Battle royale game"},
      {"RL", "RL", "Sports, Football, Racing"},
      {"Rush", "RUSH", "Platform game, Action-adventure"},
      {"SoTR", "SoTR", "Action-adventure"},
  };
  Manifest m;
  m.dataset_name = "GamingHDRVideoSET";
  VideoSpec uhd;
  uhd.width = 3840;
  uhd.height = 2160;
  uhd.bit_depth = 10;
  uhd.frame_rate = {30, 1};
  uhd.frame_count = 300;
  for (const auto& g : kGames) {
    for (int part = 1; part <= 2; ++part) {
      ManifestEntry e;
      e.sequence_id = std::string(g.sequence_prefix) + "-P" + std::to_string(part);
      e.abbreviation = g.abbreviation;
      e.genre = g.genre;
      e.yuv_path = e.sequence_id + ".yuv";
      e.spec = uhd;
      m.entries.push_back(std::move(e));
    }
  }
  return m;
}

}  // namespace hdrbench
