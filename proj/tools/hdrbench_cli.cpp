#include <atomic>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "hdrbench/config.hpp"
#include "hdrbench/error.hpp"
#include "hdrbench/ledger.hpp"
#include "hdrbench/manifest.hpp"
#include "hdrbench/metric_store.hpp"
#include "hdrbench/metrics.hpp"
#include "hdrbench/orchestrator.hpp"
#include "hdrbench/report.hpp"
#include "hdrbench/yuv_io.hpp"

namespace fs = std::filesystem;
using namespace hdrbench;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitJobFailure = 1;
constexpr int kExitUsage = 2;

struct Options {
  std::string manifest;
  std::string config;
  std::string out_dir;
  std::optional<int> workers;
  std::vector<std::string> codecs;
  std::vector<std::int64_t> bitrates;
  std::vector<int> crf;
  std::string peak;
  std::string probe_cmd;
  bool skip_missing = false;
  bool keep_yuv = false;
  bool strict_range = false;
  std::string import_hdrvqm;
  std::string output;
};

// Errors in user input (as opposed to failing jobs) map to exit code 2.
bool is_usage_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError:
    case ErrorCode::MissingField:
    case ErrorCode::MissingFile:
    case ErrorCode::InvalidValue:
    case ErrorCode::DuplicateId:
    case ErrorCode::UnknownCodec:
    case ErrorCode::EmptyManifest:
    case ErrorCode::UnsupportedCombination:
    case ErrorCode::SpecMismatch:
    case ErrorCode::EncoderNotFound:
      return true;
    default:
      return false;
  }
}

void add_run_flags(CLI::App* cmd, Options& o, bool encode_flags) {
  cmd->add_option("--config", o.config, "Run configuration JSON")->check(CLI::ExistingFile);
  cmd->add_option("--out-dir", o.out_dir, "Output directory (overrides config out_dir)");
  cmd->add_option("--workers", o.workers, "Parallel jobs")->check(CLI::PositiveNumber);
  cmd->add_flag("--strict-range", o.strict_range, "Reject samples above the bit-depth maximum");
  cmd->add_flag("--keep-yuv", o.keep_yuv, "Keep decoded YUV files after metrics");
  if (!encode_flags) return;
  cmd->add_option("--codecs", o.codecs, "Codecs, comma separated (h264,h265,vp9,av1)")->delimiter(',');
  cmd->add_option("--bitrates-kbps", o.bitrates, "CBR targets in kbps, comma separated")->delimiter(',');
  cmd->add_option("--crf", o.crf, "CRF values, comma separated")->delimiter(',');
  cmd->add_option("--probe-cmd", o.probe_cmd, "Bitrate probe command; {input} is replaced by the bitstream");
  cmd->add_flag("--skip-missing", o.skip_missing, "Skip codecs whose encoder is not installed");
}

void add_peak_flag(CLI::App* cmd, Options& o) {
  cmd->add_option("--peak", o.peak, "PSNR peak: nominal (2^b-1) or paper (2^b)")
      ->check(CLI::IsMember({"nominal", "paper"}));
}

RunConfig make_config(const Options& o) {
  CliOverrides ov;
  if (!o.out_dir.empty()) ov.out_dir = o.out_dir;
  if (o.workers) ov.workers = *o.workers;
  if (!o.codecs.empty()) ov.codecs = o.codecs;
  if (!o.bitrates.empty()) ov.bitrates_kbps = o.bitrates;
  if (!o.crf.empty()) ov.crf = o.crf;
  if (!o.peak.empty()) ov.peak = o.peak;
  if (!o.probe_cmd.empty()) ov.probe_cmd = o.probe_cmd;
  if (o.skip_missing) ov.skip_missing = true;
  if (o.keep_yuv) ov.keep_yuv = true;
  if (o.strict_range) ov.strict_range = true;
  return load_config(o.config, ov);
}

fs::path ledger_path(const RunConfig& cfg) { return cfg.out_dir / "ledger.jsonl"; }
fs::path metric_dir(const RunConfig& cfg) { return cfg.out_dir / "metrics"; }
fs::path report_dir(const RunConfig& cfg) { return cfg.out_dir / "report"; }

std::vector<EncodeResult> require_ledger(const RunConfig& cfg) {
  const auto path = ledger_path(cfg);
  if (!fs::exists(path)) throw Error(ErrorCode::MissingFile, "no ledger at " + path.string() + "; run encode first");
  return load_ledger(path);
}

int cmd_encode(const Options& o) {
  const RunConfig cfg = make_config(o);
  const Manifest manifest = load_manifest(o.manifest);
  const auto modes = modes_from_config(cfg);
  const auto jobs = plan_jobs(manifest, cfg.codecs, modes, cfg.out_dir, cfg.gop);
  for (Codec c : check_encoders(jobs, cfg)) {
    std::cerr << "warning: encoder for " << codec_id(c) << " not found, its jobs are skipped\n";
  }
  fs::create_directories(cfg.out_dir);
  RunLedger ledger(ledger_path(cfg));
  const std::size_t already = ledger.completed_count();
  if (already) std::cerr << already << " job(s) already completed in " << ledger.path() << '\n';

  std::mutex io;
  std::atomic<std::size_t> done{0};
  BatchOptions batch;
  batch.workers = cfg.workers;
  batch.on_result = [&](const EncodeResult& r) {
    std::lock_guard lock(io);
    std::cerr << "[" << ++done << "] " << r.job.job_id << ' ' << to_string(r.status);
    if (r.actual_bitrate_kbps) std::cerr << ' ' << *r.actual_bitrate_kbps << " kbps";
    if (!r.error.empty()) std::cerr << ": " << r.error;
    std::cerr << '\n';
  };
  const auto results = run_batch(jobs, cfg, ledger, batch);

  std::size_t ok = 0, failed = 0, skipped = 0;
  for (const auto& r : results) {
    if (r.status == JobStatus::kOk) ++ok;
    else if (r.status == JobStatus::kFailed) ++failed;
    else ++skipped;
  }
  std::cout << "jobs: " << results.size() << " ok: " << ok << " failed: " << failed << " skipped: " << skipped
            << "\nledger: " << ledger.path().string() << '\n';
  return failed ? kExitJobFailure : kExitOk;
}

int cmd_metrics(const Options& o) {
  const RunConfig cfg = make_config(o);
  const auto results = require_ledger(cfg);
  const MetricStore store(metric_dir(cfg));

  std::vector<const EncodeResult*> todo;
  for (const auto& r : results) {
    if (r.status == JobStatus::kOk) todo.push_back(&r);
  }
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> failures{0};
  std::mutex io;
  auto worker = [&] {
    for (std::size_t i = next++; i < todo.size(); i = next++) {
      const auto outcome = compute_job_metrics(*todo[i], cfg, store);
      std::lock_guard lock(io);
      if (outcome.ok) {
        std::cerr << outcome.job_id << " psnr_y " << *outcome.psnr_y << " dB\n";
      } else {
        ++failures;
        std::cerr << outcome.job_id << " failed: " << outcome.error << '\n';
      }
    }
  };
  const int n = std::max(1, std::min<int>(cfg.workers, static_cast<int>(todo.size())));
  std::vector<std::thread> pool;
  for (int i = 0; i < n; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  if (!o.import_hdrvqm.empty()) {
    const auto attached = import_external_scores(o.import_hdrvqm, "hdrvqm", results, store);
    std::cerr << "hdrvqm attached to " << attached.size() << " job(s)\n";
  }
  std::cout << "metrics: " << todo.size() - failures << " ok, " << failures << " failed\nstore: "
            << store.dir().string() << '\n';
  return failures ? kExitJobFailure : kExitOk;
}

int cmd_complexity(const Options& o, bool siti) {
  const RunConfig cfg = make_config(o);
  const Manifest manifest = load_manifest(o.manifest);
  ReadOptions ropts;
  ropts.strict_range = cfg.strict_range;
  std::vector<report::ComplexityRow> rows;
  for (const auto& e : manifest.entries) {
    auto reader = open_sequence(e.yuv_path, e.spec, ropts);
    report::ComplexityRow row;
    row.sequence_id = e.sequence_id;
    row.frames = reader.frame_count();
    if (siti) {
      const auto r = metrics::siti_video(reader);
      row.si = r.si;
      row.ti = r.ti;
    } else {
      row.dr = metrics::dr_video(reader).summary;
    }
    std::cerr << e.sequence_id << " done\n";
    rows.push_back(std::move(row));
  }
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.sequence_id < b.sequence_id; });
  const fs::path out = report_dir(cfg) / (siti ? "siti.csv" : "dr.csv");
  siti ? report::write_siti(out, rows) : report::write_dr(out, rows);
  std::cout << out.string() << '\n';
  return kExitOk;
}

report::ReportInputs report_inputs(const RunConfig& cfg) {
  report::ReportInputs in;
  in.results = require_ledger(cfg);
  in.metric_dir = metric_dir(cfg);
  in.codecs = cfg.codecs;
  in.psnr_cap_db = cfg.psnr_cap_db;
  in.peak = cfg.peak;
  return in;
}

int finish_report(const report::ReportOutcome& outcome, const RunConfig& cfg) {
  for (const auto& f : outcome.files) std::cout << (report_dir(cfg) / f).string() << '\n';
  bool missing = false;
  for (const auto& p : outcome.problems) {
    std::cerr << "warning: " << p << '\n';
    if (p.find("MissingCurve") != std::string::npos) missing = true;
  }
  return missing ? kExitJobFailure : kExitOk;
}

int cmd_bdrate(const Options& o) {
  const RunConfig cfg = make_config(o);
  return finish_report(report::write_bd_reports(report_inputs(cfg), report_dir(cfg)), cfg);
}

int cmd_report(const Options& o) {
  const RunConfig cfg = make_config(o);
  return finish_report(report::write_full_report(report_inputs(cfg), report_dir(cfg)), cfg);
}

int cmd_skeleton(const Options& o) {
  save_manifest(gaming_hdr_skeleton(), o.output);
  std::cout << o.output << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hdrbench: HDR codec comparison harness"};
  app.require_subcommand(1);
  Options o;

  auto* encode = app.add_subcommand("encode", "Encode every manifest sequence with every configured codec and rate");
  encode->add_option("--manifest", o.manifest, "Sequence manifest JSON")->required()->check(CLI::ExistingFile);
  add_run_flags(encode, o, true);

  auto* metrics = app.add_subcommand("metrics", "Compute per-frame PSNR for completed jobs");
  add_run_flags(metrics, o, false);
  add_peak_flag(metrics, o);
  metrics->add_option("--import-hdrvqm", o.import_hdrvqm, "Directory of <job_id>.csv HDR-VQM scores")
      ->check(CLI::ExistingDirectory);

  auto* siti = app.add_subcommand("siti", "Spatial and temporal information per sequence");
  auto* dr = app.add_subcommand("dr", "Dynamic range per sequence");
  for (auto* cmd : {siti, dr}) {
    cmd->add_option("--manifest", o.manifest, "Sequence manifest JSON")->required()->check(CLI::ExistingFile);
    cmd->add_option("--config", o.config, "Run configuration JSON")->check(CLI::ExistingFile);
    cmd->add_option("--out-dir", o.out_dir, "Output directory");
    cmd->add_flag("--strict-range", o.strict_range, "Reject samples above the bit-depth maximum");
  }

  auto* bdrate = app.add_subcommand("bdrate", "BD-quality matrices from the metric store");
  auto* rep = app.add_subcommand("report", "All report CSVs and summary.json");
  for (auto* cmd : {bdrate, rep}) {
    cmd->add_option("--config", o.config, "Run configuration JSON")->check(CLI::ExistingFile);
    cmd->add_option("--out-dir", o.out_dir, "Output directory");
    cmd->add_option("--codecs", o.codecs, "Codecs to compare, comma separated")->delimiter(',');
  }

  auto* skeleton = app.add_subcommand("manifest-skeleton", "Write a manifest template for the 18-clip gaming set");
  skeleton->add_option("--output", o.output, "Manifest path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*encode) return cmd_encode(o);
    if (*metrics) return cmd_metrics(o);
    if (*siti) return cmd_complexity(o, true);
    if (*dr) return cmd_complexity(o, false);
    if (*bdrate) return cmd_bdrate(o);
    if (*rep) return cmd_report(o);
    if (*skeleton) return cmd_skeleton(o);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return is_usage_error(e.code()) ? kExitUsage : kExitJobFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitJobFailure;
  }
  return kExitUsage;
}
