// Acceptance suite: one PASS/FAIL/SKIP line per criterion. Exit status is
// nonzero if any criterion fails.

#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "hdrbench/bdrate.hpp"
#include "hdrbench/csv.hpp"
#include "hdrbench/error.hpp"
#include "hdrbench/ledger.hpp"
#include "hdrbench/metric_store.hpp"
#include "hdrbench/metrics.hpp"
#include "hdrbench/orchestrator.hpp"
#include "hdrbench/process.hpp"
#include "hdrbench/report.hpp"
#include "oracle.hpp"
#include "support.hpp"

using namespace hdrbench;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  enum Kind { kPass, kFail, kSkip } kind = kFail;
  std::string detail;
};

// Collects the first few mismatches so a FAIL line says what went wrong.
class Checker {
 public:
  void expect(bool ok, const std::string& what) {
    ++checks_;
    if (ok) return;
    ++failures_;
    if (failures_ <= 3) notes_ += (notes_.empty() ? "" : "; ") + what;
  }
  void near(double got, double want, double tol, const std::string& what) {
    std::ostringstream s;
    s.precision(17);
    s << what << ": got " << got << " want " << want;
    expect(std::abs(got - want) <= tol, s.str());
  }
  bool ok() const { return failures_ == 0; }
  std::size_t checks() const { return checks_; }
  Outcome outcome(const std::string& pass_detail) const {
    if (ok()) return {Outcome::kPass, pass_detail};
    return {Outcome::kFail, std::to_string(failures_) + "/" + std::to_string(checks_) + " checks failed: " + notes_};
  }

 private:
  std::size_t checks_ = 0;
  std::size_t failures_ = 0;
  std::string notes_;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v, int prec = 3) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(prec);
  s << v;
  return s.str();
}

oracle::Image image(const Plane& p) {
  oracle::Image im;
  im.w = p.width;
  im.h = p.height;
  for (auto s : p.samples) im.px.push_back(s);
  return im;
}

// Random 10-bit frame pairs of 8x8 to 16x16 luma; the distorted frame is the
// reference plus bounded noise so PSNR stays in a realistic range.
struct FramePair {
  PlanarFrame ref;
  PlanarFrame dist;
};

std::vector<FramePair> random_pairs(int count, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> dim(4, 8);
  std::uniform_int_distribution<int> amp(0, 40);
  std::vector<FramePair> pairs;
  for (int i = 0; i < count; ++i) {
    const auto s = testsupport::spec(2 * dim(rng), 2 * dim(rng));
    FramePair p;
    p.ref = testsupport::random_frame(s, rng);
    p.dist = p.ref;
    const int a = amp(rng);
    std::uniform_int_distribution<int> noise(-a, a);
    for (auto& v : p.dist.y.samples) v = static_cast<std::uint16_t>(std::clamp(v + noise(rng), 0, 1023));
    pairs.push_back(std::move(p));
  }
  return pairs;
}

Outcome metric_oracle() {
  const auto t0 = Clock::now();
  Checker c;
  const auto pairs = random_pairs(200, 1234);
  std::size_t dr_compared = 0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& [ref, dist] = pairs[i];
    const auto a = image(ref.y), b = image(dist.y);
    const std::string tag = "pair " + std::to_string(i);
    c.near(metrics::mse_plane(ref.y, dist.y), oracle::mse(a, b), 1e-9, tag + " mse");
    const double psnr = metrics::psnr_frame(ref, dist, {});
    if (oracle::mse(a, b) == 0.0) {
      c.expect(std::isinf(psnr), tag + " identical frames should give inf");
    } else {
      c.near(psnr, oracle::psnr(a, b, 1023.0), 1e-9, tag + " psnr");
    }
    c.near(metrics::spatial_information(ref.y), oracle::si(a), 1e-9, tag + " si");
    c.near(metrics::temporal_information(ref.y, dist.y), oracle::ti(a, b), 1e-9, tag + " ti");
    if (ref.y.size() >= 100) {
      c.near(metrics::dr_frame(ref), oracle::dr(a), 1e-9, tag + " dr");
      ++dr_compared;
    } else {
      bool threw = false;
      try {
        metrics::dr_frame(ref);
      } catch (const Error& e) {
        threw = e.code() == ErrorCode::TooFewSamples;
      }
      c.expect(threw, tag + " dr on < 100 samples should raise TooFewSamples");
    }
  }
  const double elapsed = seconds_since(t0);
  c.expect(elapsed < 10.0, "runtime " + fmt(elapsed) + " s exceeds 10 s");
  return c.outcome(std::to_string(pairs.size()) + " pairs, " + std::to_string(dr_compared) + " DR comparisons, " +
                   std::to_string(c.checks()) + " checks, tol 1e-9, " + fmt(elapsed) + " s");
}

Outcome psnr_peak_delta() {
  Checker c;
  const double want = 20.0 * std::log10(1024.0 / 1023.0);
  const auto nominal = metrics::PeakConvention::parse("nominal_1023");
  const auto paper = metrics::PeakConvention::parse("paper_1024");
  std::size_t n = 0;
  for (const auto& [ref, dist] : random_pairs(200, 77)) {
    if (metrics::mse_plane(ref.y, dist.y) == 0.0) continue;
    ++n;
    c.near(metrics::psnr_frame(ref, dist, paper) - metrics::psnr_frame(ref, dist, nominal), want, 1e-12,
           "peak delta");
  }
  c.expect(n >= 100, "only " + std::to_string(n) + " nonzero-MSE pairs");
  return c.outcome(std::to_string(n) + " nonzero-MSE pairs, delta " + fmt(want, 12) + " dB, tol 1e-12");
}

Outcome dr_fixtures() {
  Checker c;
  c.near(metrics::dr_plane(Plane(10, 10, 512)), 0.0, 0.0, "uniform frame");
  Plane ramp(10, 10);
  for (int i = 0; i < 100; ++i) ramp.samples[i] = static_cast<std::uint16_t>(i + 1);
  c.near(metrics::dr_plane(ramp), std::log2(99.0), 1e-12, "ramp 1..100");
  std::mt19937 rng(50);
  for (int i = 0; i < 50; ++i) {
    auto p = testsupport::random_plane(12 + i % 5, 10 + i % 7, rng);
    const double before = metrics::dr_plane(p);
    std::shuffle(p.samples.begin(), p.samples.end(), rng);
    c.expect(metrics::dr_plane(p) == before, "permutation changed DR on frame " + std::to_string(i));
  }
  return c.outcome("uniform 0, ramp log2(99), 50 permutations invariant");
}

bd::RdCurve make_curve(const std::string& codec, std::vector<double> rates, std::vector<double> q) {
  bd::RdCurve c{codec, "SEQ", "psnr_y", {}};
  for (std::size_t i = 0; i < rates.size(); ++i) c.points.push_back({rates[i], q[i]});
  return c;
}

bd::RdCurve random_curve(const std::string& codec, std::mt19937& rng) {
  std::uniform_real_distribution<double> start(500.0, 3000.0), step(1.3, 2.2), q0(28.0, 36.0), dq(0.5, 4.0);
  std::vector<double> rates = {start(rng)}, q = {q0(rng)};
  const int n = 4 + static_cast<int>(rng() % 3);
  for (int i = 1; i < n; ++i) {
    rates.push_back(rates.back() * step(rng));
    q.push_back(q.back() + dq(rng));
  }
  return make_curve(codec, rates, q);
}

oracle::Curve to_oracle(const bd::RdCurve& c) {
  oracle::Curve o;
  for (const auto& p : c.points) {
    o.rate.push_back(p.bitrate_kbps);
    o.quality.push_back(p.quality);
  }
  return o;
}

Outcome bd_properties() {
  const auto t0 = Clock::now();
  Checker c;
  const auto base = make_curve("a", {6000, 12000, 18000, 24000}, {34.0, 37.5, 39.2, 40.3});
  c.near(*bd::bd_quality(base, base).bd_quality_db, 0.0, 1e-12, "self bd_quality");
  c.near(*bd::bd_rate(base, base).bd_rate_percent, 0.0, 1e-9, "self bd_rate");

  auto up = base;
  for (auto& p : up.points) p.quality += 1.0;
  c.near(*bd::bd_quality(up, base).bd_quality_db, 1.0, 1e-9, "+1 dB shift");

  auto doubled = base;
  for (auto& p : doubled.points) p.bitrate_kbps *= 2.0;
  c.near(*bd::bd_rate(base, doubled).bd_rate_percent, -50.0, 1e-9, "half the rate");
  c.near(*bd::bd_rate(doubled, base).bd_rate_percent, 100.0, 1e-9, "double the rate");

  std::mt19937 rng(2024);
  int compared = 0;
  for (int i = 0; i < 200; ++i) {
    const auto a = random_curve("a", rng);
    auto b = random_curve("b", rng);
    bd::BdResult q_ab, q_ba, r_ab, r_ba;
    try {
      q_ab = bd::bd_quality(a, b);
      q_ba = bd::bd_quality(b, a);
      r_ab = bd::bd_rate(a, b);
      r_ba = bd::bd_rate(b, a);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::NoOverlap) continue;
      c.expect(false, e.what());
      continue;
    }
    ++compared;
    const std::string tag = "curve pair " + std::to_string(i);
    c.near(*q_ab.bd_quality_db, -*q_ba.bd_quality_db, 1e-9, tag + " quality antisymmetry");
    c.near((1.0 + *r_ab.bd_rate_percent / 100.0) * (1.0 + *r_ba.bd_rate_percent / 100.0), 1.0, 1e-9,
           tag + " rate antisymmetry");

    const double k = 3.7;
    auto as = a, bs = b;
    for (auto& p : as.points) p.bitrate_kbps *= k;
    for (auto& p : bs.points) p.bitrate_kbps *= k;
    c.near(*bd::bd_quality(as, bs).bd_quality_db, *q_ab.bd_quality_db, 1e-9, tag + " rate-scale quality");
    c.near(*bd::bd_rate(as, bs).bd_rate_percent, *r_ab.bd_rate_percent, 1e-9, tag + " rate-scale rate");

    auto aq = a, bq = b;
    for (auto& p : aq.points) p.quality += 5.25;
    for (auto& p : bq.points) p.quality += 5.25;
    c.near(*bd::bd_quality(aq, bq).bd_quality_db, *q_ab.bd_quality_db, 1e-9, tag + " quality-shift quality");
    c.near(*bd::bd_rate(aq, bq).bd_rate_percent, *r_ab.bd_rate_percent, 1e-9, tag + " quality-shift rate");

    c.near(*q_ab.bd_quality_db, oracle::bd_quality(to_oracle(a), to_oracle(b)), 1e-6, tag + " trapezoid quality");
    c.near(std::log10(1.0 + *r_ab.bd_rate_percent / 100.0), oracle::bd_rate_log_gap(to_oracle(a), to_oracle(b)), 1e-6,
           tag + " trapezoid log-rate gap");
  }
  c.expect(compared >= 100, "only " + std::to_string(compared) + " overlapping random pairs");
  const double elapsed = seconds_since(t0);
  c.expect(elapsed < 5.0, "runtime " + fmt(elapsed) + " s exceeds 5 s");
  return c.outcome(std::to_string(compared) + " random pairs, " + std::to_string(c.checks()) +
                   " checks, trapezoid 1e4 points, " + fmt(elapsed) + " s");
}

Outcome ci_fixture() {
  Checker c;
  const std::vector<double> two = {40.0, 42.0};
  const double hw = report::ci95_half_width(two);
  c.near(hw, 12.706, 1e-3, "n=2 {40,42}");
  const std::vector<double> same(18, 38.5);
  c.near(report::ci95_half_width(same), 0.0, 0.0, "18 identical");
  return c.outcome("n=2 half-width " + fmt(hw, 6) + ", 18 identical -> 0");
}

Outcome command_golden() {
  Checker c;
  auto count_pair = [](const std::vector<std::string>& argv, const std::string& flag, const std::string& value) {
    std::size_t n = 0;
    for (std::size_t i = 0; i + 1 < argv.size(); ++i) n += argv[i] == flag && argv[i + 1] == value;
    return n;
  };
  auto count_flag = [](const std::vector<std::string>& argv, const std::string& flag) {
    return static_cast<std::size_t>(std::count(argv.begin(), argv.end(), flag));
  };
  for (Codec codec : kAllCodecs) {
    for (RateMode mode : {RateMode{CbrMode{6000}}, RateMode{CrfMode{30}}}) {
      EncodeJob job;
      job.sequence_id = "COD-P1";
      job.codec = codec;
      job.mode = mode;
      if (job.is_cbr()) job.gop = 60;
      job.spec = testsupport::spec(3840, 2160);
      job.spec.frame_count = 300;
      job.input_yuv = "/data/COD-P1.yuv";
      job.output_path = "/out/x";
      const auto argv = build_command(job);
      const std::string tag = std::string(codec_id(codec)) + "/" + mode_label(mode);
      auto once = [&](const std::string& flag, const std::string& value) {
        c.expect(count_pair(argv, flag, value) == 1, tag + ": " + flag + " " + value + " not exactly once");
      };
      once("-color_primaries", "9");
      once("-color_trc", "16");
      once("-colorspace", "9");
      once("-color_range", "1");
      once("-pix_fmt", "yuv420p10le");
      switch (codec) {
        case Codec::kH264:
          once("-preset", "veryfast");
          once("-profile:v", "high10");
          once("-level:v", "4.0");
          break;
        case Codec::kH265: {
          once("-preset", "veryfast");
          once("-profile:v", "main10");
          std::size_t level = 0;
          for (const auto& a : argv) level += a.find("level-idc=4.0") != std::string::npos;
          c.expect(level == 1, tag + ": level-idc=4.0 not exactly once");
          break;
        }
        case Codec::kVp9:
          once("-deadline", "realtime");
          once("-quality", "realtime");
          once("-profile:v", "2");
          break;
        case Codec::kAv1:
          once("-cpu-used", "8");
          break;
      }
      if (job.is_cbr()) {
        once("-g", "60");
        once("-keyint_min", "60");
        once("-b:v", "6000k");
        once("-bufsize", "6000k");
      } else {
        c.expect(count_flag(argv, "-g") == 0 && count_flag(argv, "-keyint_min") == 0, tag + ": GOP set for CRF");
        once("-crf", "30");
      }
      c.expect(build_command(job) == argv, tag + ": not deterministic");
    }
  }
  return c.outcome("4 codecs x {CBR, CRF}, " + std::to_string(c.checks()) + " token checks, no processes spawned");
}

std::vector<std::string> available_codecs() {
  const auto out = capture_stdout({"ffmpeg", "-hide_banner", "-encoders"}, 30.0);
  std::vector<std::string> have;
  if (!out) return have;
  for (Codec c : kAllCodecs) {
    if (out->find(" " + std::string(ffmpeg_encoder(c)) + " ") != std::string::npos) have.emplace_back(codec_id(c));
  }
  return have;
}

std::size_t count_lines(const fs::path& p) {
  std::ifstream in(p);
  std::size_t n = 0;
  std::string line;
  while (std::getline(in, line)) n += !line.empty();
  return n;
}

// Starts the CLI without waiting; output goes to log.
pid_t spawn(const std::vector<std::string>& argv, const fs::path& log) {
  const pid_t pid = ::fork();
  if (pid == 0) {
    const int fd = ::open(log.c_str(), O_WRONLY | O_CREAT | O_APPEND, 0644);
    ::dup2(fd, 1);
    ::dup2(fd, 2);
    std::vector<char*> cargv;
    for (const auto& a : argv) cargv.push_back(const_cast<char*>(a.c_str()));
    cargv.push_back(nullptr);
    ::execv(cargv[0], cargv.data());
    ::_exit(127);
  }
  return pid;
}

int run_cli(const std::vector<std::string>& argv, const fs::path& log) {
  ProcessOptions o;
  o.stdout_path = log;
  o.stderr_path = fs::path(log.string() + ".err");
  o.timeout_s = 240.0;
  const auto r = run_process(argv, o);
  return r.timed_out ? -2 : r.exit_code;
}

Outcome e2e_smoke(const std::string& cli) {
  const auto t0 = Clock::now();
  Checker c;
  if (cli.empty() || !fs::exists(cli)) return {Outcome::kFail, "CLI binary not given (--cli)"};
  auto codecs = available_codecs();
  if (codecs.size() < 2) return {Outcome::kFail, "fewer than two encoders available in ffmpeg"};
  codecs.resize(2);
  const std::string codec_list = codecs[0] + "," + codecs[1];

  testsupport::TempDir dir("hdrbench_e2e");
  const auto manifest = testsupport::write_synthetic_dataset(dir.path(), 3, 64, 64, 30);
  const fs::path out = dir / "out";
  const fs::path ledger = out / "ledger.jsonl";
  const std::vector<std::string> encode = {cli, "encode", "--manifest", manifest.string(), "--out-dir",
                                           out.string(), "--codecs", codec_list, "--bitrates-kbps",
                                           "50,100,200,400", "--workers", "1"};

  // Kill the first run part way through, then resume.
  const pid_t pid = spawn(encode, dir / "encode1.log");
  std::size_t at_kill = 0;
  bool exited_early = false;
  for (int i = 0; i < 6000; ++i) {
    int status = 0;
    if (::waitpid(pid, &status, WNOHANG) == pid) {
      exited_early = true;
      break;
    }
    at_kill = fs::exists(ledger) ? count_lines(ledger) : 0;
    if (at_kill >= 5) break;
    std::this_thread::sleep_for(std::chrono::milliseconds(10));
  }
  if (!exited_early) {
    ::kill(pid, SIGKILL);
    int status = 0;
    ::waitpid(pid, &status, 0);
  }
  at_kill = fs::exists(ledger) ? count_lines(ledger) : 0;
  c.expect(!exited_early && at_kill < 24, "first run was not interrupted (" + std::to_string(at_kill) + " records)");

  c.expect(run_cli(encode, dir / "encode2.log") == 0, "resumed encode failed: " + testsupport::slurp(dir / "encode2.log.err"));
  const auto records = load_ledger(ledger);
  c.expect(records.size() == 24, "ledger holds " + std::to_string(records.size()) + " jobs, want 24");
  std::size_t ok = 0;
  for (const auto& r : records) ok += r.status == JobStatus::kOk;
  c.expect(ok == 24, std::to_string(ok) + " of 24 jobs ok");
  std::size_t parsed = 0;
  {
    std::ifstream in(ledger);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      parsed += nlohmann::json::accept(line);
    }
  }
  c.expect(parsed == 24, std::to_string(parsed) + " ledger lines; completed jobs were re-run");

  c.expect(run_cli({cli, "metrics", "--out-dir", out.string(), "--workers", "1"}, dir / "metrics.log") == 0,
           "metrics failed: " + testsupport::slurp(dir / "metrics.log.err"));
  c.expect(run_cli({cli, "siti", "--manifest", manifest.string(), "--out-dir", out.string()}, dir / "siti.log") == 0,
           "siti failed");
  c.expect(run_cli({cli, "dr", "--manifest", manifest.string(), "--out-dir", out.string()}, dir / "dr.log") == 0,
           "dr failed");
  c.expect(run_cli({cli, "report", "--out-dir", out.string(), "--codecs", codec_list}, dir / "report.log") == 0,
           "report failed: " + testsupport::slurp(dir / "report.log.err"));

  std::size_t csv_files = 0;
  try {
    csv_files = report::validate_report_dir(out / "report");
    for (const auto& e : fs::directory_iterator(out / "metrics")) {
      const auto t = csv::read(e.path());
      csv::validate(t, "job_metrics", MetricStore::kSchemaVersion, {"metric_id", "frame", "value"}, {"value"});
      ++csv_files;
    }
  } catch (const Error& e) {
    c.expect(false, e.what());
  }
  // 4 files (points, aggregate, bitrate diff, bd matrix) + 8 traces + siti + dr, plus 24 metric files.
  c.expect(csv_files == 14 + 24, std::to_string(csv_files) + " CSV files validated, want 38");

  std::string rho_text;
  try {
    const auto agg = csv::read(out / "report" / "rd_aggregate.csv");
    std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> by_codec;
    for (const auto& row : agg.rows) {
      if (row[3] != "psnr_y") continue;
      by_codec[row[0]].first.push_back(*csv::parse_number(row[2]));
      by_codec[row[0]].second.push_back(*csv::parse_number(row[5]));
    }
    c.expect(by_codec.size() == 2, "rd_aggregate has " + std::to_string(by_codec.size()) + " codecs");
    for (const auto& [codec, xy] : by_codec) {
      const double rho = oracle::spearman(xy.first, xy.second);
      rho_text += (rho_text.empty() ? "" : ", ") + codec + " rho=" + fmt(rho, 2);
      c.expect(xy.first.size() == 4, codec + " has " + std::to_string(xy.first.size()) + " rates");
      c.expect(rho >= 0.9, codec + " Spearman rho " + fmt(rho) + " < 0.9");
    }
  } catch (const Error& e) {
    c.expect(false, e.what());
  }

  const double elapsed = seconds_since(t0);
  c.expect(elapsed < 300.0, "runtime " + fmt(elapsed) + " s exceeds 5 min");
  return c.outcome(codec_list + ", killed at " + std::to_string(at_kill) + "/24 records then resumed, " +
                   std::to_string(csv_files) + " CSVs valid, " + rho_text + ", " + fmt(elapsed, 1) + " s");
}

Outcome full_dataset() {
  const char* env = std::getenv("HDRBENCH_FULL_RUN_DIR");
  if (!env || !*env) return {Outcome::kSkip, "set HDRBENCH_FULL_RUN_DIR to a finished full-dataset run directory"};
  const fs::path dir = env;
  Checker c;
  try {
    const auto records = load_ledger(dir / "ledger.jsonl");
    std::size_t cbr_ok = 0;
    for (const auto& r : records) cbr_ok += r.job.is_cbr() && r.status == JobStatus::kOk;
    c.expect(cbr_ok == 288, std::to_string(cbr_ok) + " completed CBR jobs, want 288");

    const auto agg = csv::read(dir / "report" / "rd_aggregate.csv");
    std::map<std::string, std::map<std::string, double>> mean;  // target -> codec -> mean psnr_y
    for (const auto& row : agg.rows) {
      if (row[3] == "psnr_y" && !row[2].empty()) mean[row[2]][row[0]] = *csv::parse_number(row[5]);
    }
    for (const auto& [target, m] : mean) {
      c.expect(m.count("av1") && m.count("h265") && m.count("h264") && m.count("vp9"), target + ": missing codec");
      if (m.size() == 4) {
        c.expect(m.at("av1") > m.at("h265") && m.at("h265") > m.at("h264") && m.at("h264") > m.at("vp9"),
                 target + " kbps: PSNR ordering is not AV1 > HEVC > H.264 > VP9");
      }
    }

    const auto summary = nlohmann::json::parse(testsupport::slurp(dir / "report" / "summary.json"));
    const std::map<std::string, double> table = {{"av1_vs_vp9", -6.33},  {"av1_vs_h264", -3.37},
                                                 {"av1_vs_h265", -1.58}, {"h264_vs_vp9", -2.99},
                                                 {"h265_vs_vp9", -4.75}, {"h265_vs_h264", -1.75}};
    const auto& avg = summary.at("bd_average").at("psnr_y");
    for (const auto& [col, want] : table) {
      c.near(avg.at(col).get<double>(), want, 0.25, "BD average " + col);
    }
    const auto& diff = summary.at("bitrate_diff_mean_kbps");
    c.expect(diff.at("h265").get<double>() > 0.0, "x265 mean deviation should be positive");
    const std::map<std::string, double> under = {{"av1", -873.14}, {"vp9", -491.88}, {"h264", -592.80}};
    for (const auto& [codec, want] : under) {
      c.near(diff.at(codec).get<double>(), want, 0.2 * std::abs(want), codec + " mean deviation");
    }
  } catch (const std::exception& e) {
    c.expect(false, e.what());
  }
  return c.outcome("288 CBR jobs, per-rate PSNR ordering, BD averages within 0.25 dB, deviation signs");
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli;
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--cli") cli = argv[i + 1];
  }

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"metric_oracle", metric_oracle},
      {"psnr_peak_delta", psnr_peak_delta},
      {"dr_fixtures", dr_fixtures},
      {"bd_properties", bd_properties},
      {"ci_fixture", ci_fixture},
      {"command_golden", command_golden},
      {"e2e_smoke", [&] { return e2e_smoke(cli); }},
      {"full_dataset", full_dataset},
  };

  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {Outcome::kFail, std::string("exception: ") + e.what()};
    }
    const char* tag = o.kind == Outcome::kPass ? "PASS" : o.kind == Outcome::kSkip ? "SKIP" : "FAIL";
    failed += o.kind == Outcome::kFail;
    std::cout << tag << ' ' << name << " - " << o.detail << std::endl;
  }
  return failed ? 1 : 0;
}
