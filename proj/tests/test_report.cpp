#include <gtest/gtest.h>

#include <cmath>

#include "hdrbench/csv.hpp"
#include "hdrbench/error.hpp"
#include "hdrbench/metric_store.hpp"
#include "hdrbench/report.hpp"
#include "support.hpp"

using namespace hdrbench;
using namespace hdrbench::report;
using testsupport::TempDir;

namespace {

bd::RdCurve curve(const std::string& codec, const std::string& seq, double shift, double scale = 1.0) {
  bd::RdCurve c{codec, seq, "psnr_y", {}};
  const double rates[] = {6000, 12000, 18000, 24000};
  const double q[] = {34.0, 37.5, 39.2, 40.3};
  for (int i = 0; i < 4; ++i) c.points.push_back({rates[i] * scale, q[i] + shift});
  return c;
}

RdSample sample(const std::string& codec, const std::string& seq, std::int64_t kbps, double q) {
  return {codec, seq, "cbr" + std::to_string(kbps), kbps, static_cast<double>(kbps), "psnr_y", q};
}

}  // namespace

TEST(ConfidenceInterval, StudentTFixtures) {
  EXPECT_NEAR(t_critical_95(1), 12.706204736, 1e-8);
  EXPECT_NEAR(t_critical_95(17), 2.109815578, 1e-8);
  const std::vector<double> two = {40.0, 42.0};
  EXPECT_NEAR(ci95_half_width(two), 12.706, 1e-3);
  const std::vector<double> same(18, 37.25);
  EXPECT_EQ(ci95_half_width(same), 0.0);
  const std::vector<double> one = {40.0};
  try {
    ci95_half_width(one);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InsufficientSamples);
  }
}

TEST(Aggregate, GroupsAndRetainsValues) {
  std::vector<RdSample> s = {sample("vp9", "A", 6000, 30), sample("h264", "A", 12000, 35),
                             sample("h264", "B", 12000, 37), sample("vp9", "B", 6000, 32),
                             sample("h264", "A", 6000, 33),  sample("h264", "B", 6000, 31)};
  const auto rows = aggregate_rd(s);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].codec_id, "h264");
  EXPECT_EQ(rows[0].target_kbps, 6000);
  EXPECT_EQ(rows[1].target_kbps, 12000);
  EXPECT_EQ(rows[2].codec_id, "vp9");
  for (const auto& r : rows) {
    EXPECT_EQ(r.n, 2u);
    EXPECT_NEAR(r.mean, (r.values[0] + r.values[1]) / 2.0, 1e-12);
  }
  EXPECT_NEAR(rows[1].ci95_half_width, t_critical_95(1) * std::sqrt(2.0) / std::sqrt(2.0), 1e-9);

  s.push_back(sample("av1", "A", 6000, 40));
  EXPECT_THROW(aggregate_rd(s), Error);
}

TEST(FrameTrace, IFrameBoundaries) {
  metrics::MetricSeries s{"psnr_y", std::vector<double>(300, 40.0), 40.0, 300};
  std::vector<std::size_t> boundaries;
  for (const auto& r : frame_trace(s, 60)) {
    if (r.is_iframe_boundary.value_or(false)) boundaries.push_back(r.frame);
  }
  EXPECT_EQ(boundaries, (std::vector<std::size_t>{0, 60, 120, 180, 240}));
  for (const auto& r : frame_trace(s, std::nullopt)) EXPECT_FALSE(r.is_iframe_boundary);
}

TEST(FrameTrace, MeanTraceCapsInfinity) {
  std::vector<metrics::MetricSeries> s = {{"psnr_y", {10, 20, 30}, 0, 3}, {"psnr_y", {20, 30, 40}, 0, 3}};
  EXPECT_EQ(mean_trace(s, 100.0), (std::vector<double>{15, 25, 35}));
  s[0].per_frame[1] = std::numeric_limits<double>::infinity();
  EXPECT_EQ(mean_trace(s, 100.0)[1], 65.0);
}

TEST(BdMatrix, PairsFollowConfiguredCodecs) {
  const std::vector<std::string> all = {"h264", "h265", "vp9", "av1"};
  const auto pairs = comparison_pairs(all);
  ASSERT_EQ(pairs.size(), 6u);
  EXPECT_EQ(pairs[0].column(), "av1_vs_vp9");
  EXPECT_EQ(pairs[5].column(), "h265_vs_h264");
  const std::vector<std::string> two = {"h264", "h265"};
  ASSERT_EQ(comparison_pairs(two).size(), 1u);
}

TEST(BdMatrix, SignConventionAndAverage) {
  std::vector<bd::RdCurve> curves;
  for (const std::string seq : {"A", "B"}) {
    curves.push_back(curve("av1", seq, seq == "A" ? 2.0 : 4.0));
    curves.push_back(curve("vp9", seq, 0.0));
  }
  const std::vector<CodecPair> pairs = {{Codec::kAv1, Codec::kVp9}};
  const auto m = bd_matrix(curves, "psnr_y", pairs);
  ASSERT_EQ(m.sequences, (std::vector<std::string>{"A", "B"}));
  // AV1 is better, so "AV1 vs VP9" is negative.
  EXPECT_NEAR(m.values[0][0], -2.0, 1e-9);
  EXPECT_NEAR(m.values[1][0], -4.0, 1e-9);
  EXPECT_NEAR(m.average[0], -3.0, 1e-9);
}

TEST(BdMatrix, IdenticalCurvesAreZeroAndHolesAreNamed) {
  std::vector<bd::RdCurve> curves;
  for (const std::string codec : {"h264", "h265", "vp9", "av1"}) curves.push_back(curve(codec, "A", 0.0));
  const std::vector<std::string> all = {"h264", "h265", "vp9", "av1"};
  const auto pairs = comparison_pairs(all);
  const auto m = bd_matrix(curves, "psnr_y", pairs);
  for (double v : m.values[0]) EXPECT_NEAR(v, 0.0, 1e-12);

  curves.push_back(curve("h264", "B", 0.0));
  try {
    bd_matrix(curves, "psnr_y", pairs);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MissingCurve);
    EXPECT_NE(std::string(e.what()).find("B has no "), std::string::npos);
  }
}

TEST(BitrateDiff, RowsAndMeans) {
  std::vector<EncodeResult> results(3);
  for (int i = 0; i < 3; ++i) {
    auto& r = results[i];
    r.job.sequence_id = "S" + std::to_string(i);
    r.job.codec = Codec::kH265;
    r.job.mode = CbrMode{6000};
    r.status = JobStatus::kOk;
    r.actual_bitrate_kbps = 6000.0 + 100.0 * i;
    r.bitrate_diff_kbps = 100.0 * i;
  }
  results[2].status = JobStatus::kFailed;
  results[2].actual_bitrate_kbps.reset();
  EncodeResult crf = results[0];
  crf.job.mode = CrfMode{30};
  results.push_back(crf);

  const auto t = bitrate_diff_table(results);
  ASSERT_EQ(t.rows.size(), 3u);
  EXPECT_EQ(t.rows[2].status, "failed");
  EXPECT_FALSE(t.rows[2].diff_kbps);
  EXPECT_DOUBLE_EQ(t.codec_mean.at("h265"), 50.0);
}

TEST(ReportFiles, SchemasValidateAndRerunIsByteIdentical) {
  TempDir dir;
  MetricStore store(dir / "metrics");
  ReportInputs in;
  in.metric_dir = store.dir();
  in.codecs = {"h264", "vp9"};
  const std::int64_t rates[] = {100, 200, 400, 800};
  for (const std::string seq : {"A", "B", "C"}) {
    for (Codec codec : {Codec::kH264, Codec::kVp9}) {
      for (int i = 0; i < 4; ++i) {
        EncodeResult r;
        r.job.sequence_id = seq;
        r.job.codec = codec;
        r.job.mode = CbrMode{rates[i]};
        r.job.gop = 60;
        r.job.job_id = seq + "__" + std::string(codec_id(codec)) + "__" + mode_label(r.job.mode);
        r.status = JobStatus::kOk;
        r.actual_bitrate_kbps = static_cast<double>(rates[i]);
        r.bitrate_diff_kbps = *r.actual_bitrate_kbps - rates[i];
        const double q = 30 + 3 * i + (codec == Codec::kH264 ? 1.0 : 0.0) + seq[0] * 0.01;
        std::vector<double> frames(70, q);
        frames[0] = std::numeric_limits<double>::infinity();
        store.write(r.job.job_id, {{"psnr_y", frames, q, 70}});
        in.results.push_back(r);
      }
    }
  }
  auto failed = in.results.front();
  failed.job.sequence_id = "D";
  failed.job.job_id = "D__h264__cbr100";
  failed.status = JobStatus::kFailed;
  failed.actual_bitrate_kbps.reset();
  in.results.push_back(failed);

  const auto first = write_full_report(in, dir / "r1");
  const auto second = write_full_report(in, dir / "r2");
  EXPECT_EQ(first.files, second.files);
  for (const auto& f : first.files) {
    if (f == "summary.json") continue;
    EXPECT_EQ(testsupport::slurp(dir / "r1" / f), testsupport::slurp(dir / "r2" / f)) << f;
  }
  EXPECT_EQ(validate_report_dir(dir / "r1"), first.files.size() - 1);

  const auto bd = csv::read(dir / "r1" / "bd_matrix_psnr_y.csv");
  EXPECT_EQ(bd.header, (std::vector<std::string>{"sequence_id", "h264_vs_vp9"}));
  EXPECT_EQ(bd.rows.size(), 4u);  // 3 sequences + Average
  EXPECT_NEAR(*csv::parse_number(bd.rows.back()[1]), -1.0, 1e-6);

  const auto trace = csv::read(dir / "r1" / "frame_trace_h264_cbr100.csv");
  EXPECT_EQ(trace.rows[0][2], "inf");
  EXPECT_EQ(trace.rows[0][3], "1");
  EXPECT_EQ(trace.rows[60][3], "1");
  EXPECT_EQ(trace.rows[61][3], "0");

  const auto diff = csv::read(dir / "r1" / "bitrate_diff.csv");
  EXPECT_EQ(diff.rows.size(), 25u);
  EXPECT_EQ(diff.rows[0][1], "A");

  const auto summary = nlohmann::json::parse(testsupport::slurp(dir / "r1" / "summary.json"));
  EXPECT_EQ(summary["metadata"]["ci_method"], "student_t");
  EXPECT_NEAR(summary["bd_average"]["psnr_y"]["h264_vs_vp9"].get<double>(), -1.0, 1e-6);
  EXPECT_EQ(summary["jobs"]["failed"], 1);
}

TEST(ReportFiles, MissingCurveStillWritesOtherOutputs) {
  TempDir dir;
  ReportInputs in;
  in.metric_dir = dir / "metrics";
  in.codecs = {"h264", "vp9"};
  MetricStore store(in.metric_dir);
  for (const std::string seq : {"A", "B"}) {
    for (std::int64_t kbps : {100, 200, 400, 800}) {
      EncodeResult r;
      r.job.sequence_id = seq;
      r.job.codec = Codec::kH264;
      r.job.mode = CbrMode{kbps};
      r.job.job_id = seq + "__h264__" + mode_label(r.job.mode);
      r.status = JobStatus::kOk;
      r.actual_bitrate_kbps = static_cast<double>(kbps);
      store.write(r.job.job_id, {{"psnr_y", {35.0}, 35.0 + kbps / 100.0, 1}});
      in.results.push_back(r);
    }
  }
  const auto out = write_full_report(in, dir / "r");
  bool missing = false;
  for (const auto& p : out.problems) missing |= p.find("MissingCurve") != std::string::npos;
  EXPECT_TRUE(missing);
  EXPECT_TRUE(std::filesystem::exists(dir / "r" / "rd_aggregate.csv"));
  EXPECT_FALSE(std::filesystem::exists(dir / "r" / "bd_matrix_psnr_y.csv"));
}

TEST(ReportFiles, ValidatorRejectsDrift) {
  TempDir dir;
  testsupport::spit(dir / "rd_points.csv", "# hdrbench:rd_points v1\ncodec_id,sequence_id\nh264,A\n");
  EXPECT_THROW(validate_report_dir(dir.path()), Error);
}
