#include "hdrbench/orchestrator.hpp"

#include <atomic>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <thread>

#include "hdrbench/error.hpp"
#include "hdrbench/ledger.hpp"
#include "hdrbench/process.hpp"

namespace hdrbench {

namespace fs = std::filesystem;

std::string mode_label(const RateMode& mode) {
  if (const auto* cbr = std::get_if<CbrMode>(&mode)) return "cbr" + std::to_string(cbr->target_kbps);
  return "crf" + std::to_string(std::get<CrfMode>(mode).value);
}

std::vector<RateMode> modes_from_config(const RunConfig& config) {
  std::vector<RateMode> modes;
  for (auto kbps : config.cbr_kbps) modes.emplace_back(CbrMode{kbps});
  for (int crf : config.crf) modes.emplace_back(CrfMode{crf});
  return modes;
}

std::optional<std::int64_t> EncodeJob::target_kbps() const {
  if (const auto* cbr = std::get_if<CbrMode>(&mode)) return cbr->target_kbps;
  return std::nullopt;
}

std::string_view to_string(JobStatus status) {
  switch (status) {
    case JobStatus::kOk: return "ok";
    case JobStatus::kFailed: return "failed";
    case JobStatus::kSkipped: return "skipped";
  }
  return "failed";
}

JobStatus parse_job_status(std::string_view text) {
  if (text == "ok") return JobStatus::kOk;
  if (text == "skipped") return JobStatus::kSkipped;
  if (text == "failed") return JobStatus::kFailed;
  throw Error(ErrorCode::ParseError, "unknown job status '" + std::string(text) + "'");
}

namespace {

const char* container_format(Codec codec) {
  switch (codec) {
    case Codec::kH264: return "h264";
    case Codec::kH265: return "hevc";
    case Codec::kVp9:
    case Codec::kAv1: return "ivf";
  }
  return "ivf";
}

const char* container_extension(Codec codec) {
  switch (codec) {
    case Codec::kH264: return ".h264";
    case Codec::kH265: return ".hevc";
    case Codec::kVp9:
    case Codec::kAv1: return ".ivf";
  }
  return ".bin";
}

std::string kbps_token(std::int64_t kbps) { return std::to_string(kbps) + "k"; }

void validate_job(const EncodeJob& job) {
  job.spec.validate();
  if (const auto* cbr = std::get_if<CbrMode>(&job.mode)) {
    if (cbr->target_kbps <= 0) {
      throw Error(ErrorCode::UnsupportedCombination, job.job_id + ": CBR target must be positive");
    }
  } else {
    const int crf = std::get<CrfMode>(job.mode).value;
    const auto range = crf_range(job.codec);
    if (crf < range.min || crf > range.max) {
      throw Error(ErrorCode::UnsupportedCombination, job.job_id + ": CRF " + std::to_string(crf) + " outside " +
                                                         std::string(codec_id(job.codec)) + " range");
    }
    if (job.gop) throw Error(ErrorCode::UnsupportedCombination, job.job_id + ": CRF jobs run without a fixed GOP");
  }
  if (job.gop && *job.gop <= 0) throw Error(ErrorCode::UnsupportedCombination, job.job_id + ": GOP must be positive");
}

}  // namespace

std::vector<EncodeJob> plan_jobs(const Manifest& manifest, std::span<const std::string> codecs,
                                 std::span<const RateMode> modes, const fs::path& out_dir, int cbr_gop) {
  if (manifest.entries.empty()) throw Error(ErrorCode::EmptyManifest, "manifest has no sequences");
  if (codecs.empty()) throw Error(ErrorCode::InvalidValue, "no codecs to plan");
  if (modes.empty()) throw Error(ErrorCode::InvalidValue, "no rate modes to plan");

  std::vector<Codec> parsed;
  std::set<Codec> seen_codecs;
  for (const auto& name : codecs) {
    const Codec c = parse_codec(name);
    if (!seen_codecs.insert(c).second) throw Error(ErrorCode::InvalidValue, "codec listed twice: " + name);
    parsed.push_back(c);
  }
  std::set<std::string> seen_modes;
  for (const auto& m : modes) {
    if (!seen_modes.insert(mode_label(m)).second) {
      throw Error(ErrorCode::InvalidValue, "mode listed twice: " + mode_label(m));
    }
  }

  std::vector<EncodeJob> jobs;
  jobs.reserve(manifest.entries.size() * parsed.size() * modes.size());
  for (const auto& entry : manifest.entries) {
    VideoSpec spec = entry.spec;
    if (!spec.frame_count) {
      std::error_code ec;
      const auto size = fs::file_size(entry.yuv_path, ec);
      if (!ec && size % frame_byte_size(spec) == 0) {
        spec.frame_count = static_cast<std::int64_t>(size / frame_byte_size(spec));
      }
    }
    for (Codec codec : parsed) {
      for (const auto& mode : modes) {
        EncodeJob job;
        job.sequence_id = entry.sequence_id;
        job.codec = codec;
        job.mode = mode;
        job.job_id = entry.sequence_id + "__" + std::string(codec_id(codec)) + "__" + mode_label(mode);
        if (std::holds_alternative<CbrMode>(mode)) job.gop = cbr_gop;
        job.spec = spec;
        job.input_yuv = entry.yuv_path;
        job.output_path = out_dir / "bitstreams" / (job.job_id + container_extension(codec));
        validate_job(job);
        jobs.push_back(std::move(job));
      }
    }
  }
  return jobs;
}

std::vector<std::string> build_command(const EncodeJob& job, const ToolPaths& tool) {
  validate_job(job);
  const VideoSpec& spec = job.spec;
  const bool ten_bit = spec.bit_depth > 8;

  std::vector<std::string> argv = {
      tool.encoder, "-hide_banner", "-nostdin", "-y", "-loglevel", "error",
      // raw input description
      "-f", "rawvideo", "-pix_fmt", spec.pix_fmt(),
      "-s:v", std::to_string(spec.width) + "x" + std::to_string(spec.height),
      "-r", spec.frame_rate.to_string(),
      "-i", job.input_yuv.string(), "-an",
      "-c:v", std::string(ffmpeg_encoder(job.codec)),
  };
  auto add = [&argv](std::initializer_list<std::string> tokens) { argv.insert(argv.end(), tokens); };

  // Per-codec live-streaming bundle. 10-bit input needs the 10-bit member of
  // the main profile family for x264/x265 (plain main rejects it).
  switch (job.codec) {
    case Codec::kH264:
      add({"-preset", "veryfast", "-profile:v", ten_bit ? "high10" : "main", "-level:v", "4.0"});
      break;
    case Codec::kH265: {
      std::string params = "level-idc=4.0:log-level=error";
      if (job.gop) params += ":open-gop=0:scenecut=0";
      add({"-preset", "veryfast", "-profile:v", ten_bit ? "main10" : "main", "-x265-params", params});
      break;
    }
    case Codec::kVp9:
      add({"-deadline", "realtime", "-quality", "realtime", "-profile:v", ten_bit ? "2" : "0"});
      break;
    case Codec::kAv1:
      add({"-cpu-used", "8"});
      break;
  }

  // Single-pass rate control.
  if (const auto* cbr = std::get_if<CbrMode>(&job.mode)) {
    const auto rate = kbps_token(cbr->target_kbps);
    add({"-b:v", rate, "-minrate", rate, "-maxrate", rate, "-bufsize", rate});
  } else {
    add({"-crf", std::to_string(std::get<CrfMode>(job.mode).value)});
    if (job.codec == Codec::kVp9 || job.codec == Codec::kAv1) add({"-b:v", "0"});
  }

  if (job.gop) {
    const auto gop = std::to_string(*job.gop);
    add({"-g", gop, "-keyint_min", gop});
    if (job.codec == Codec::kH264) add({"-sc_threshold", "0"});
  }

  add({"-color_primaries", std::to_string(spec.color.primaries), "-color_trc", std::to_string(spec.color.transfer),
       "-colorspace", std::to_string(spec.color.matrix), "-color_range", std::to_string(spec.color.range)});

  argv.insert(argv.end(), tool.extra_args.begin(), tool.extra_args.end());
  add({"-f", container_format(job.codec), job.output_path.string()});
  return argv;
}

std::vector<std::string> build_decode_command(const fs::path& bitstream, const fs::path& decoded_yuv,
                                              const VideoSpec& spec, const std::string& decoder) {
  return {decoder, "-hide_banner", "-nostdin", "-y", "-loglevel", "error", "-i", bitstream.string(),
          "-f", "rawvideo", "-pix_fmt", spec.pix_fmt(), decoded_yuv.string()};
}

std::uint64_t stream_payload_bytes(const fs::path& bitstream, Codec codec) {
  std::error_code ec;
  const auto size = fs::file_size(bitstream, ec);
  if (ec) throw Error(ErrorCode::ProbeFailure, "cannot stat " + bitstream.string());
  if (codec == Codec::kH264 || codec == Codec::kH265) return size;

  std::ifstream in(bitstream, std::ios::binary);
  if (!in) throw Error(ErrorCode::ProbeFailure, "cannot open " + bitstream.string());
  unsigned char header[32];
  if (!in.read(reinterpret_cast<char*>(header), 32) || std::string_view(reinterpret_cast<char*>(header), 4) != "DKIF") {
    throw Error(ErrorCode::ProbeFailure, bitstream.string() + " is not an IVF file");
  }
  const std::uint64_t header_len = header[6] | (header[7] << 8);
  std::uint64_t pos = header_len;
  std::uint64_t payload = 0;
  while (pos < size) {
    if (pos + 12 > size) throw Error(ErrorCode::ProbeFailure, bitstream.string() + ": truncated IVF frame header");
    unsigned char fh[12];
    in.seekg(static_cast<std::streamoff>(pos));
    if (!in.read(reinterpret_cast<char*>(fh), 12)) throw Error(ErrorCode::ProbeFailure, "IVF read failed");
    const std::uint64_t frame_size = static_cast<std::uint64_t>(fh[0]) | (static_cast<std::uint64_t>(fh[1]) << 8) |
                                     (static_cast<std::uint64_t>(fh[2]) << 16) |
                                     (static_cast<std::uint64_t>(fh[3]) << 24);
    pos += 12 + frame_size;
    if (pos > size) throw Error(ErrorCode::ProbeFailure, bitstream.string() + ": truncated IVF frame");
    payload += frame_size;
  }
  return payload;
}

double payload_bitrate_kbps(std::uint64_t payload_bytes, double duration_s) {
  if (!(duration_s > 0.0)) throw Error(ErrorCode::ProbeFailure, "stream duration must be positive");
  return static_cast<double>(payload_bytes) * 8.0 / duration_s / 1000.0;
}

double parse_probe_output(const std::string& text) {
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && i + 1 < text.size() && std::isdigit(static_cast<unsigned char>(text[i + 1])))) {
      double value = 0.0;
      auto [ptr, ec] = std::from_chars(text.data() + i, text.data() + text.size(), value);
      if (ec == std::errc{} && value > 0.0) return value / 1000.0;
      throw Error(ErrorCode::ProbeFailure, "probe reported a non-positive bitrate");
    }
    ++i;
  }
  throw Error(ErrorCode::ProbeFailure, "probe output holds no number: '" + text + "'");
}

RunnerOptions runner_options(const RunConfig& config) {
  RunnerOptions o;
  o.decoder = config.decoder;
  o.probe_cmd = config.probe_cmd;
  o.timeout_s = config.timeout_s;
  o.skip_missing = config.skip_missing;
  return o;
}

std::string encoder_version(const std::string& executable) {
  static std::mutex mutex;
  static std::map<std::string, std::string> cache;
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(executable); it != cache.end()) return it->second;
  }
  std::string version;
  if (auto out = capture_stdout({executable, "-version"}, 10.0)) {
    version = out->substr(0, out->find('\n'));
  }
  std::lock_guard lock(mutex);
  cache[executable] = version;
  return version;
}

EncodeResult run_job(const EncodeJob& job, const ToolPaths& tool, const RunnerOptions& options) {
  EncodeResult result;
  result.job = job;
  const auto argv = build_command(job, tool);
  if (!resolve_executable(tool.encoder)) {
    if (!options.skip_missing) {
      throw Error(ErrorCode::EncoderNotFound, "encoder '" + tool.encoder + "' for " +
                                                  std::string(codec_id(job.codec)) + " not found");
    }
    result.status = JobStatus::kSkipped;
    result.error = "EncoderNotFound: " + tool.encoder;
    return result;
  }
  result.encoder_version = encoder_version(tool.encoder);

  std::error_code ec;
  fs::create_directories(job.output_path.parent_path(), ec);
  fs::remove(job.output_path, ec);
  const fs::path log = job.output_path.string() + ".log";

  ProcessOptions popts;
  popts.timeout_s = options.timeout_s;
  popts.stderr_path = log;
  const auto proc = run_process(argv, popts);
  result.exit_status = proc.exit_code;
  result.wall_time_s = proc.wall_time_s;
  result.stderr_tail = file_tail(log);

  if (proc.timed_out) {
    result.error = "Timeout: encoder exceeded " + std::to_string(options.timeout_s) + " s";
    return result;
  }
  if (!proc.ok()) {
    result.error = "NonZeroExit: encoder exited with " +
                   (proc.term_signal ? "signal " + std::to_string(proc.term_signal)
                                     : "status " + std::to_string(proc.exit_code));
    return result;
  }
  result.output_bytes = fs::exists(job.output_path) ? fs::file_size(job.output_path) : 0;
  if (result.output_bytes == 0) {
    result.error = "NonZeroExit: encoder produced no output";
    return result;
  }
  result.status = JobStatus::kOk;
  return result;
}

fs::path decoded_path_for(const EncodeJob& job) {
  fs::path p = job.output_path;
  p.replace_extension(".yuv");
  return p;
}

fs::path decode_to_yuv(EncodeResult& result, const RunnerOptions& options) {
  const EncodeJob& job = result.job;
  const fs::path out = decoded_path_for(job);
  const fs::path log = out.string() + ".log";
  ProcessOptions popts;
  popts.timeout_s = options.timeout_s;
  popts.stderr_path = log;
  ProcessResult proc;
  try {
    proc = run_process(build_decode_command(job.output_path, out, job.spec, options.decoder), popts);
  } catch (const Error& e) {
    throw Error(ErrorCode::DecoderFailure, e.what());
  }
  if (!proc.ok()) {
    throw Error(ErrorCode::DecoderFailure, job.job_id + ": decoder failed: " + file_tail(log, 512));
  }
  std::error_code ec;
  const auto size = fs::file_size(out, ec);
  if (ec) throw Error(ErrorCode::DecoderFailure, job.job_id + ": decoder wrote no output");
  const auto fbs = frame_byte_size(job.spec);
  if (size % fbs != 0) {
    throw Error(ErrorCode::FrameCountMismatch,
                job.job_id + ": decoded size " + std::to_string(size) + " is not a multiple of the frame size");
  }
  const auto frames = static_cast<std::int64_t>(size / fbs);
  if (job.spec.frame_count && frames != *job.spec.frame_count) {
    throw Error(ErrorCode::FrameCountMismatch, job.job_id + ": decoded " + std::to_string(frames) +
                                                   " frames, reference has " +
                                                   std::to_string(*job.spec.frame_count));
  }
  fs::remove(log, ec);
  result.decoded_yuv_path = out.string();
  return out;
}

double measure_actual_bitrate(EncodeResult& result, const RunnerOptions& options) {
  const EncodeJob& job = result.job;
  if (!job.spec.frame_count || *job.spec.frame_count <= 0) {
    throw Error(ErrorCode::ProbeFailure, job.job_id + ": unknown or zero stream duration");
  }
  double kbps = 0.0;
  result.payload_bytes = stream_payload_bytes(job.output_path, job.codec);
  if (options.probe_cmd.empty()) {
    const double duration = static_cast<double>(*job.spec.frame_count) / job.spec.frame_rate.value();
    kbps = payload_bitrate_kbps(result.payload_bytes, duration);
    result.bitrate_method = "payload";
  } else {
    std::string cmd = options.probe_cmd;
    const std::string placeholder = "{input}";
    for (auto pos = cmd.find(placeholder); pos != std::string::npos; pos = cmd.find(placeholder)) {
      cmd.replace(pos, placeholder.size(), job.output_path.string());
    }
    const auto out = capture_stdout(split_command(cmd), options.timeout_s > 0 ? options.timeout_s : 60.0);
    if (!out) throw Error(ErrorCode::ProbeFailure, job.job_id + ": probe command failed: " + cmd);
    kbps = parse_probe_output(*out);
    result.bitrate_method = "probe";
  }
  result.actual_bitrate_kbps = kbps;
  if (auto target = job.target_kbps()) result.bitrate_diff_kbps = kbps - static_cast<double>(*target);
  return kbps;
}

EncodeResult execute_job(const EncodeJob& job, const ToolPaths& tool, const RunnerOptions& options) {
  EncodeResult result;
  try {
    result = run_job(job, tool, options);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::EncoderNotFound) throw;
    result.job = job;
    result.status = JobStatus::kFailed;
    result.error = e.what();
    return result;
  }
  if (result.status != JobStatus::kOk) return result;
  try {
    decode_to_yuv(result, options);
    measure_actual_bitrate(result, options);
  } catch (const Error& e) {
    result.status = JobStatus::kFailed;
    result.error = e.what();
  }
  return result;
}

std::vector<Codec> check_encoders(std::span<const EncodeJob> jobs, const RunConfig& config) {
  std::set<Codec> codecs;
  for (const auto& j : jobs) codecs.insert(j.codec);
  std::vector<Codec> missing;
  for (Codec c : codecs) {
    const auto& exe = config.tool(c).encoder;
    if (!resolve_executable(exe)) {
      if (!config.skip_missing) {
        throw Error(ErrorCode::EncoderNotFound,
                    "encoder '" + exe + "' for " + std::string(codec_id(c)) + " not found (use --skip-missing)");
      }
      missing.push_back(c);
    }
  }
  if (!resolve_executable(config.decoder)) {
    throw Error(ErrorCode::EncoderNotFound, "decoder '" + config.decoder + "' not found");
  }
  return missing;
}

std::vector<EncodeResult> run_batch(const std::vector<EncodeJob>& jobs, const RunConfig& config,
                                    RunLedger& ledger, const BatchOptions& batch) {
  const auto missing = check_encoders(jobs, config);
  const RunnerOptions options = runner_options(config);

  std::vector<EncodeResult> results(jobs.size());
  std::vector<std::size_t> pending;
  {
    std::map<std::string, EncodeResult> done;
    for (auto& r : ledger.records()) done.emplace(r.job.job_id, std::move(r));
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      auto it = done.find(jobs[i].job_id);
      if (it != done.end() && it->second.status == JobStatus::kOk) {
        results[i] = it->second;
      } else {
        pending.push_back(i);
      }
    }
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= pending.size()) return;
      const EncodeJob& job = jobs[pending[k]];
      EncodeResult r;
      if (std::find(missing.begin(), missing.end(), job.codec) != missing.end()) {
        r.job = job;
        r.status = JobStatus::kSkipped;
        r.error = "EncoderNotFound: " + config.tool(job.codec).encoder;
      } else {
        try {
          r = execute_job(job, config.tool(job.codec), options);
        } catch (const Error& e) {
          r.job = job;
          r.status = JobStatus::kFailed;
          r.error = e.what();
        }
      }
      ledger.append(r);
      if (batch.on_result) batch.on_result(r);
      results[pending[k]] = std::move(r);
    }
  };

  const int n = std::max(1, std::min<int>(batch.workers, static_cast<int>(pending.size())));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < n; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return results;
}

}  // namespace hdrbench
