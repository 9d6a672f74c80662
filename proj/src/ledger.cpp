#include "hdrbench/ledger.hpp"

#include <iostream>

#include "hdrbench/error.hpp"
#include "hdrbench/manifest.hpp"

namespace hdrbench {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

template <typename T>
json optional_json(const std::optional<T>& value) {
  return value ? json(*value) : json(nullptr);
}

template <typename T>
std::optional<T> optional_from(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return it->get<T>();
}

}  // namespace

json to_json(const EncodeJob& job) {
  json mode;
  if (const auto* cbr = std::get_if<CbrMode>(&job.mode)) {
    mode = {{"type", "cbr"}, {"target_kbps", cbr->target_kbps}};
  } else {
    mode = {{"type", "crf"}, {"value", std::get<CrfMode>(job.mode).value}};
  }
  return {
      {"job_id", job.job_id},
      {"sequence_id", job.sequence_id},
      {"codec", codec_id(job.codec)},
      {"mode", mode},
      {"gop", optional_json(job.gop)},
      {"spec", spec_to_json(job.spec)},
      {"input_yuv", job.input_yuv.string()},
      {"output_path", job.output_path.string()},
  };
}

EncodeJob job_from_json(const json& j) {
  try {
    EncodeJob job;
    job.job_id = j.at("job_id").get<std::string>();
    job.sequence_id = j.at("sequence_id").get<std::string>();
    job.codec = parse_codec(j.at("codec").get<std::string>());
    const json& mode = j.at("mode");
    const auto type = mode.at("type").get<std::string>();
    if (type == "cbr") {
      job.mode = CbrMode{mode.at("target_kbps").get<std::int64_t>()};
    } else if (type == "crf") {
      job.mode = CrfMode{mode.at("value").get<int>()};
    } else {
      throw Error(ErrorCode::ParseError, "unknown mode type '" + type + "'");
    }
    job.gop = optional_from<int>(j, "gop");
    job.spec = spec_from_json(j.at("spec"), "job " + job.job_id + " spec");
    job.input_yuv = j.at("input_yuv").get<std::string>();
    job.output_path = j.at("output_path").get<std::string>();
    return job;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("ledger job record: ") + e.what());
  }
}

json to_json(const EncodeResult& r) {
  return {
      {"job", to_json(r.job)},
      {"status", to_string(r.status)},
      {"exit_status", r.exit_status},
      {"error", r.error},
      {"stderr_tail", r.stderr_tail},
      {"wall_time_s", r.wall_time_s},
      {"output_bytes", r.output_bytes},
      {"payload_bytes", r.payload_bytes},
      {"actual_bitrate_kbps", optional_json(r.actual_bitrate_kbps)},
      {"bitrate_diff_kbps", optional_json(r.bitrate_diff_kbps)},
      {"bitrate_method", r.bitrate_method},
      {"decoded_yuv_path", r.decoded_yuv_path},
      {"encoder_version", r.encoder_version},
  };
}

EncodeResult result_from_json(const json& j) {
  try {
    EncodeResult r;
    r.job = job_from_json(j.at("job"));
    r.status = parse_job_status(j.at("status").get<std::string>());
    r.exit_status = j.value("exit_status", -1);
    r.error = j.value("error", "");
    r.stderr_tail = j.value("stderr_tail", "");
    r.wall_time_s = j.value("wall_time_s", 0.0);
    r.output_bytes = j.value("output_bytes", std::uint64_t{0});
    r.payload_bytes = j.value("payload_bytes", std::uint64_t{0});
    r.actual_bitrate_kbps = optional_from<double>(j, "actual_bitrate_kbps");
    r.bitrate_diff_kbps = optional_from<double>(j, "bitrate_diff_kbps");
    r.bitrate_method = j.value("bitrate_method", "");
    r.decoded_yuv_path = j.value("decoded_yuv_path", "");
    r.encoder_version = j.value("encoder_version", "");
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("ledger record: ") + e.what());
  }
}

namespace {

// Returns records and whether the file ends without a trailing newline.
std::pair<std::vector<EncodeResult>, bool> read_records(const fs::path& path) {
  std::vector<EncodeResult> records;
  std::ifstream in(path, std::ios::binary);
  if (!in) return {records, false};
  std::string line;
  bool torn_tail = false;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const bool last_without_newline = in.eof();
    if (line.empty()) continue;
    try {
      records.push_back(result_from_json(json::parse(line)));
    } catch (const std::exception&) {
      // Only an interrupted append leaves a partial line; later appends fence it.
      std::cerr << "warning: ignoring unreadable record at " << path.string() << ":" << line_no << "\n";
    }
    if (last_without_newline) torn_tail = true;
  }
  return {records, torn_tail};
}

}  // namespace

std::vector<EncodeResult> load_ledger(const fs::path& path) {
  auto [records, torn] = read_records(path);
  (void)torn;
  std::vector<std::string> order;
  std::map<std::string, EncodeResult> latest;
  for (auto& r : records) {
    if (!latest.count(r.job.job_id)) order.push_back(r.job.job_id);
    latest[r.job.job_id] = std::move(r);
  }
  std::vector<EncodeResult> out;
  out.reserve(order.size());
  for (const auto& id : order) out.push_back(latest[id]);
  return out;
}

RunLedger::RunLedger(fs::path path) : path_(std::move(path)) {
  std::error_code ec;
  if (path_.has_parent_path()) fs::create_directories(path_.parent_path(), ec);
  auto [records, torn] = read_records(path_);
  for (auto& r : records) {
    if (!latest_.count(r.job.job_id)) order_.push_back(r.job.job_id);
    latest_[r.job.job_id] = std::move(r);
  }
  out_.open(path_, std::ios::binary | std::ios::app);
  if (!out_) throw Error(ErrorCode::IoError, "cannot open ledger " + path_.string());
  if (torn) {
    out_ << '\n';
    out_.flush();
  }
}

std::vector<EncodeResult> RunLedger::records() const {
  std::lock_guard lock(mutex_);
  std::vector<EncodeResult> out;
  out.reserve(order_.size());
  for (const auto& id : order_) out.push_back(latest_.at(id));
  return out;
}

bool RunLedger::is_completed(const std::string& job_id) const {
  std::lock_guard lock(mutex_);
  auto it = latest_.find(job_id);
  return it != latest_.end() && it->second.status == JobStatus::kOk;
}

std::size_t RunLedger::completed_count() const {
  std::lock_guard lock(mutex_);
  std::size_t n = 0;
  for (const auto& [id, r] : latest_) n += r.status == JobStatus::kOk ? 1 : 0;
  return n;
}

void RunLedger::append(const EncodeResult& result) {
  const std::string line = to_json(result).dump() + "\n";
  std::lock_guard lock(mutex_);
  out_ << line;
  out_.flush();
  if (!out_) throw Error(ErrorCode::IoError, "ledger write failed: " + path_.string());
  if (!latest_.count(result.job.job_id)) order_.push_back(result.job.job_id);
  latest_[result.job.job_id] = result;
}

}  // namespace hdrbench
