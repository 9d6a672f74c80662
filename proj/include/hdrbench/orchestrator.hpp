#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "hdrbench/codec.hpp"
#include "hdrbench/config.hpp"
#include "hdrbench/manifest.hpp"
#include "hdrbench/yuv_io.hpp"

namespace hdrbench {

struct CbrMode {
  std::int64_t target_kbps = 0;
  friend bool operator==(const CbrMode&, const CbrMode&) = default;
};

struct CrfMode {
  int value = 23;
  friend bool operator==(const CrfMode&, const CrfMode&) = default;
};

using RateMode = std::variant<CbrMode, CrfMode>;

// "cbr6000" or "crf23"; used in job ids and report file names.
std::string mode_label(const RateMode& mode);
// CBR rates first (ascending as configured), then CRF values.
std::vector<RateMode> modes_from_config(const RunConfig& config);

struct EncodeJob {
  std::string job_id;
  std::string sequence_id;
  Codec codec = Codec::kH264;
  RateMode mode = CbrMode{};
  std::optional<int> gop;  // closed GOP for CBR, none for CRF
  VideoSpec spec;
  std::filesystem::path input_yuv;
  std::filesystem::path output_path;  // encoded elementary stream

  bool is_cbr() const { return std::holds_alternative<CbrMode>(mode); }
  std::optional<std::int64_t> target_kbps() const;

  friend bool operator==(const EncodeJob&, const EncodeJob&) = default;
};

enum class JobStatus { kOk, kFailed, kSkipped };
std::string_view to_string(JobStatus status);
JobStatus parse_job_status(std::string_view text);

struct EncodeResult {
  EncodeJob job;
  JobStatus status = JobStatus::kFailed;
  int exit_status = -1;
  std::string error;        // "<ErrorCode>: message" when not ok
  std::string stderr_tail;  // last bytes of the encoder's stderr
  double wall_time_s = 0.0;
  std::uint64_t output_bytes = 0;
  std::uint64_t payload_bytes = 0;
  std::optional<double> actual_bitrate_kbps;
  std::optional<double> bitrate_diff_kbps;  // actual - target, CBR only
  std::string bitrate_method;               // "payload" or "probe"
  std::string decoded_yuv_path;
  std::string encoder_version;
};

// sequence x codec x mode, in that nesting order.
std::vector<EncodeJob> plan_jobs(const Manifest& manifest, std::span<const std::string> codecs,
                                 std::span<const RateMode> modes, const std::filesystem::path& out_dir,
                                 int cbr_gop = 60);

// Encoder argument vector; pure and table driven. Throws UnsupportedCombination.
std::vector<std::string> build_command(const EncodeJob& job, const ToolPaths& tool = {});
std::vector<std::string> build_decode_command(const std::filesystem::path& bitstream,
                                              const std::filesystem::path& decoded_yuv, const VideoSpec& spec,
                                              const std::string& decoder = "ffmpeg");

// Bytes of coded video in the elementary stream: IVF container framing is
// excluded, Annex-B streams count in full.
std::uint64_t stream_payload_bytes(const std::filesystem::path& bitstream, Codec codec);
// bytes * 8 / seconds / 1000. Throws ProbeFailure on non-positive duration.
double payload_bitrate_kbps(std::uint64_t payload_bytes, double duration_s);
// First number in a probe's stdout, read as bit/s, returned in kbps.
double parse_probe_output(const std::string& text);

struct RunnerOptions {
  std::string decoder = "ffmpeg";
  std::string probe_cmd;  // "{input}" is replaced by the bitstream path
  double timeout_s = 0.0;
  bool skip_missing = false;
};

RunnerOptions runner_options(const RunConfig& config);

// Encode step only; encoder stderr goes to <output_path>.log. A missing
// executable throws EncoderNotFound unless skip_missing, in which case the
// result is marked skipped.
EncodeResult run_job(const EncodeJob& job, const ToolPaths& tool, const RunnerOptions& options);
// Decodes result.job.output_path to raw YUV next to it; records the path.
std::filesystem::path decode_to_yuv(EncodeResult& result, const RunnerOptions& options);
// Fills actual_bitrate_kbps / bitrate_diff_kbps / bitrate_method.
double measure_actual_bitrate(EncodeResult& result, const RunnerOptions& options);

// run_job -> decode_to_yuv -> measure_actual_bitrate. Failures are captured
// in the result; only EncoderNotFound without skip_missing propagates.
EncodeResult execute_job(const EncodeJob& job, const ToolPaths& tool, const RunnerOptions& options);

std::filesystem::path decoded_path_for(const EncodeJob& job);
std::string encoder_version(const std::string& executable);

// Fails fast with EncoderNotFound for any missing encoder unless skip_missing.
// Returns the codecs whose encoder is missing.
std::vector<Codec> check_encoders(std::span<const EncodeJob> jobs, const RunConfig& config);

class RunLedger;

struct BatchOptions {
  int workers = 1;
  // Called after each job finishes, from the worker thread.
  std::function<void(const EncodeResult&)> on_result;
};

// Runs every job whose id is not already completed in the ledger, appending
// each outcome. Returns results for all jobs in plan order (ledger records
// for the skipped-as-done ones).
std::vector<EncodeResult> run_batch(const std::vector<EncodeJob>& jobs, const RunConfig& config,
                                    RunLedger& ledger, const BatchOptions& batch);

}  // namespace hdrbench
